#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nls/counterexample.hpp"

namespace nls::verify {

struct CheckResult {
  std::string id;  // "1".."9" for acceptance criteria, a name for invariants
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  std::string id;
  std::string title;
  std::function<CheckResult()> run;
};

/// Acceptance criteria in order 1..9.
std::vector<Check> acceptance_checks();

/// Property checks of the individual modules.
std::vector<Check> invariant_checks();

/// "acceptance", "invariants" or "all". Throws InvalidArgument otherwise.
std::vector<Check> suite(const std::string& name);

/// Runs one check, timing it and turning exceptions into failures.
CheckResult run_check(const Check& check);

/// "PASS <id> <title>: <detail>"
std::string format_line(const CheckResult& result);

/// Random star through a central zero. region 0: P++, 1: P+- (mu < 0), 2: P-.
/// sigma in {1, 2}, d in 3..5, n_j in 1..3, mixed exterior conditions.
CentralZeroStar random_central_zero_star(std::mt19937& rng, int region);

}  // namespace nls::verify
