#include "nls/verify.hpp"

#include "doctest.h"
#include "nls/error.hpp"

using namespace nls;

TEST_CASE("invariant suite passes") {
  for (const auto& check : verify::invariant_checks()) {
    const auto r = verify::run_check(check);
    INFO(verify::format_line(r));
    CHECK(r.pass);
  }
}

TEST_CASE("suite selection") {
  CHECK(verify::suite("acceptance").size() == 9);
  CHECK(verify::suite("all").size() == verify::acceptance_checks().size() + verify::invariant_checks().size());
  CHECK_THROWS_AS(verify::suite("bogus"), Error);
}

TEST_CASE("exceptions become failures") {
  const verify::Check broken{"x", "throws", [] () -> verify::CheckResult { throw Error(ErrorKind::BlowUp, "boom"); }};
  const auto r = verify::run_check(broken);
  CHECK_FALSE(r.pass);
  CHECK(verify::format_line(r).rfind("FAIL x throws: exception:", 0) == 0);
}

TEST_CASE("random central-zero stars are deterministic and valid") {
  std::mt19937 a(5), b(5);
  for (int region = 0; region < 3; ++region) {
    const auto s = verify::random_central_zero_star(a, region);
    const auto t = verify::random_central_zero_star(b, region);
    CHECK(s.q.alphas == t.q.alphas);
    CHECK(residual_norm(s.q, s.graph) <= 1e-9);
    for (double al : s.q.alphas) CHECK(classify_region(s.q.mu, al, s.graph.params) != Region::Outside);
  }
}
