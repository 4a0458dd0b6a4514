#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include "nls/counterexample.hpp"
#include "nls/error.hpp"
#include "nls/interval_spectrum.hpp"
#include "nls/quadrature.hpp"
#include "nls/star_solver.hpp"
#include "nls/verify.hpp"

namespace {

using namespace nls;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr const char* kOutputDirEnv = "NLS_OUTPUT_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- argument parsing ----

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) throw UsageError("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(to_double(t));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) out.push_back(to_int(t));
  return out;
}

// "1..5" or "1,3,4"
std::vector<int> parse_index_set(const std::string& s) {
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int lo = to_int(s.substr(0, dots)), hi = to_int(s.substr(dots + 2));
    if (lo > hi) throw UsageError("empty range '" + s + "'");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  return parse_ints(s);
}

std::vector<int> parse_signs(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) {
    if (t == "+" || t == "+1" || t == "1") out.push_back(1);
    else if (t == "-" || t == "-1") out.push_back(-1);
    else throw UsageError("sign must be + or -: '" + t + "'");
  }
  return out;
}

BoundaryCondition parse_bc(char c) {
  if (c == 'd' || c == 'D') return BoundaryCondition::Dirichlet;
  if (c == 'n' || c == 'N') return BoundaryCondition::Neumann;
  throw UsageError(std::string("boundary condition must be d or n, got '") + c + "'");
}

std::vector<BoundaryCondition> parse_bcs(const std::string& s) {
  std::vector<BoundaryCondition> out;
  for (const auto& t : split(s, ',')) {
    if (t.size() != 1) throw UsageError("boundary condition must be d or n: '" + t + "'");
    out.push_back(parse_bc(t[0]));
  }
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& t : split(s, ',')) {
    const auto parts = split(t, '/');
    try {
      if (parts.size() == 1) out.emplace_back(boost::multiprecision::cpp_int(parts[0]));
      else if (parts.size() == 2)
        out.emplace_back(boost::multiprecision::cpp_int(parts[0]), boost::multiprecision::cpp_int(parts[1]));
      else throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("rate must be an integer or p/q: '" + t + "'");
    }
  }
  return out;
}

// "log:lo:hi:count", "lin:lo:hi:count" or "list:a,b,c"
std::vector<double> parse_grid(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("grid must be log:lo:hi:count, lin:lo:hi:count or list:...");
  const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
  if (kind == "list") return parse_doubles(rest);
  const auto p = split(rest, ':');
  if (p.size() != 3) throw UsageError("grid '" + s + "' needs lo:hi:count");
  try {
    if (kind == "log") return log_grid(to_double(p[0]), to_double(p[1]), to_int(p[2]));
    if (kind == "lin") return linear_grid(to_double(p[0]), to_double(p[1]), to_int(p[2]));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown grid kind '" + kind + "'");
}

// ---- output ----

using Cell = std::variant<int, double, std::string>;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Table {
 public:
  Table(std::ostream& out, std::string format, std::vector<std::string> columns)
      : out_(out), format_(std::move(format)), columns_(std::move(columns)) {
    if (format_ == "csv") {
      out_ << "# ";
      for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
      out_ << "\n";
    }
  }

  void row(const std::vector<Cell>& cells) {
    if (format_ == "csv") {
      for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << text(cells[i]);
      out_ << "\n";
      return;
    }
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::visit([&](const auto& v) { j[columns_[i]] = v; }, cells[i]);
    }
    out_ << j.dump() << "\n";
  }

  // Sample the computation could not produce: a '#' comment in CSV, an object with "failure" in JSONL.
  void failure(const std::vector<std::pair<std::string, Cell>>& fields, const std::string& kind,
               const std::string& message) {
    if (format_ == "csv") {
      out_ << "# failure";
      for (const auto& [k, v] : fields) out_ << "," << k << "=" << text(v);
      out_ << ",kind=" << kind << ",message=" << message << "\n";
      return;
    }
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields) std::visit([&, &k = k](const auto& x) { j[k] = x; }, v);
    j["failure"] = kind;
    j["message"] = message;
    out_ << j.dump() << "\n";
  }

 private:
  static std::string text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<int>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
  }

  std::ostream& out_;
  std::string format_;
  std::vector<std::string> columns_;
};

struct Output {
  std::string path;
  std::string format = "csv";
  std::unique_ptr<std::ofstream> file;

  std::ostream& open(const std::string& command) {
    std::filesystem::path target = path;
    const char* dir = std::getenv(kOutputDirEnv);
    if (target.empty() && dir && *dir) target = command + (format == "csv" ? ".csv" : ".jsonl");
    if (target.empty()) return std::cout;
    if (target.is_relative() && dir && *dir) target = std::filesystem::path(dir) / target;
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    file = std::make_unique<std::ofstream>(target);
    if (!*file) throw UsageError("cannot open output file '" + target.string() + "'");
    return *file;
  }
};

// ---- star graph options shared by star-solve and continue ----

struct StarOptions {
  int sigma = 1;
  double nu = 1.0;
  std::string lengths, bcs, alphas, signs, rates, zetas, ns;
  double mu = 0.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--sigma", sigma, "nonlinearity exponent (positive integer)")->check(CLI::PositiveNumber);
    cmd->add_option("--nu", nu, "nonlinearity coefficient");
    cmd->add_option("--lengths", lengths, "edge lengths, comma separated");
    cmd->add_option("--bcs", bcs, "exterior conditions per edge, e.g. d,d,n");
    cmd->add_option("--alphas", alphas, "initial amplitudes per edge");
    cmd->add_option("--signs", signs, "boundary-vertex branch signs per edge, e.g. -,-,+");
    cmd->add_option("--rates", rates, "build the star from rates m_j/l_j (mu = 0 construction)");
    cmd->add_option("--zetas", zetas, "central slope signs for --rates");
    cmd->add_option("--ns", ns, "half-wave counts n_j for --rates");
    cmd->add_option("--mu", mu, "mu at which the start point is solved");
  }

  // Graph and initial guess, either given directly or from the mu = 0 construction.
  std::pair<StarGraph, StarPoint> build() const {
    if (!rates.empty()) {
      if (zetas.empty()) throw UsageError("--rates needs --zetas");
      const auto cfg = config_from_rates(sigma, nu, parse_signs(zetas), parse_rationals(rates),
                                         ns.empty() ? std::vector<int>{} : parse_ints(ns),
                                         bcs.empty() ? std::vector<BoundaryCondition>{} : parse_bcs(bcs));
      return {graph_of(cfg), build_qstar(cfg)};
    }
    if (lengths.empty() || alphas.empty() || signs.empty())
      throw UsageError("give either --rates/--zetas or --lengths, --alphas and --signs");
    const auto ls = parse_doubles(lengths);
    const auto bc = bcs.empty() ? std::vector<BoundaryCondition>(ls.size(), BoundaryCondition::Dirichlet) : parse_bcs(bcs);
    StarPoint q{mu, parse_doubles(alphas), parse_signs(signs)};
    if (bc.size() != ls.size() || q.alphas.size() != ls.size() || q.zetas.size() != ls.size())
      throw UsageError("--lengths, --bcs, --alphas and --signs need one entry per edge");
    return {StarGraph(ls, bc, ModelParams(sigma, nu)), q};
  }
};

std::vector<std::string> point_columns(std::size_t d) {
  std::vector<std::string> cols{"mu"};
  for (std::size_t j = 1; j <= d; ++j) cols.push_back("alpha_" + std::to_string(j));
  for (const char* c : {"central_value", "Z", "residual"}) cols.emplace_back(c);
  return cols;
}

std::vector<Cell> point_cells(const LocalCurvePoint& p) {
  std::vector<Cell> cells{p.q.mu};
  for (double a : p.q.alphas) cells.emplace_back(a);
  cells.emplace_back(p.central_value);
  cells.emplace_back(p.nodal_count);
  cells.emplace_back(p.residual_norm);
  return cells;
}

// ---- config file ----

// key=value lines; "command" names the subcommand. Flags on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<std::string>& subcommands) {
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;
  std::ifstream in(config);
  if (!in) throw UsageError("cannot read config file '" + config + "'");
  std::string command;
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(config + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "command") {
      command = value;
      continue;
    }
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : rest) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  const auto sub = std::find_if(rest.begin(), rest.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (sub == rest.end()) {
    if (command.empty()) throw UsageError("no subcommand given on the command line or in the config file");
    std::vector<std::string> out{command};
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  std::vector<std::string> out(rest.begin(), sub + 1);
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), sub + 1, rest.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Stationary NLS solutions on intervals and star graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Output output;
  app.add_option("-o,--output", output.path,
                 std::string("output file; relative paths and the default file go to $") + kOutputDirEnv);
  app.add_option("--format", output.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  // wavelength
  auto* wl = app.add_subcommand("wavelength", "wavelength and its partial derivatives");
  int wl_sigma = 1;
  double wl_nu = 1.0, wl_mu = 0.0;
  std::string wl_alpha, wl_grid;
  wl->add_option("--sigma", wl_sigma)->check(CLI::PositiveNumber);
  wl->add_option("--nu", wl_nu);
  wl->add_option("--mu", wl_mu)->required();
  wl->add_option("--alpha", wl_alpha, "amplitudes, comma separated");
  wl->add_option("--alpha-grid", wl_grid, "log:lo:hi:count, lin:lo:hi:count or list:...");

  // curves
  auto* cv = app.add_subcommand("curves", "spectral curves mu_n(alpha) on an interval");
  std::string cv_bc = "dd", cv_n = "1..5", cv_grid = "log:1e-4:10:50";
  double cv_length = M_PI, cv_nu = 1.0;
  int cv_sigma = 1;
  cv->add_option("--bc", cv_bc, "dd, dn, nd or nn");
  cv->add_option("--length", cv_length)->check(CLI::PositiveNumber);
  cv->add_option("--nu", cv_nu);
  cv->add_option("--sigma", cv_sigma)->check(CLI::PositiveNumber);
  cv->add_option("--n", cv_n, "curve indices, 1..5 or 1,2,4");
  cv->add_option("--alpha-grid", cv_grid, "log:lo:hi:count, lin:lo:hi:count or list:...");

  // star-solve / continue
  auto* ss = app.add_subcommand("star-solve", "solve the vertex conditions on a star at fixed mu");
  StarOptions ss_opts;
  ss_opts.add(ss);
  auto* ct = app.add_subcommand("continue", "continue a star solution in mu");
  StarOptions ct_opts;
  ct_opts.add(ct);
  double ct_end = 0.0;
  int ct_steps = 10;
  ct->add_option("--mu-end", ct_end)->required();
  ct->add_option("--steps", ct_steps)->check(CLI::PositiveNumber);

  // counterexample
  auto* ce = app.add_subcommand("counterexample", "nodal count change through a central zero");
  int ce_sigma = 1, ce_d = 3, ce_bound = 12;
  double ce_nu = 1.0, ce_delta = 0.0;
  std::string ce_rates, ce_zetas, ce_ns, ce_bcs;
  ce->add_option("--sigma", ce_sigma)->check(CLI::PositiveNumber);
  ce->add_option("--d", ce_d, "star degree")->check(CLI::Range(3, 64));
  ce->add_option("--nu", ce_nu);
  ce->add_option("--rates", ce_rates, "rates m_j/l_j; omitted: search");
  ce->add_option("--zetas", ce_zetas, "central slope signs, e.g. +,+,-");
  ce->add_option("--ns", ce_ns, "half-wave counts n_j");
  ce->add_option("--bcs", ce_bcs, "exterior conditions, e.g. d,d,n");
  ce->add_option("--delta", ce_delta, "|mu| reached on each side; 0 selects a default");
  ce->add_option("--search-bound", ce_bound, "largest rate tried by the search")->check(CLI::PositiveNumber);

  // verify
  auto* vf = app.add_subcommand("verify", "run verification suites");
  std::string vf_suite = "all";
  vf->add_option("--suite", vf_suite)->check(CLI::IsMember({"acceptance", "invariants", "all"}));

  std::vector<std::string> names;
  for (const auto* sub : app.get_subcommands({})) names.push_back(sub->get_name());
  std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc), names);
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*wl) {
    if (wl_alpha.empty() == wl_grid.empty()) throw UsageError("give exactly one of --alpha and --alpha-grid");
    const auto alphas = wl_alpha.empty() ? parse_grid(wl_grid) : parse_doubles(wl_alpha);
    const ModelParams p(wl_sigma, wl_nu);
    std::ostream& out = output.open("wavelength");
    Table t(out, output.format, {"mu", "alpha", "region", "lambda", "d_mu", "d_alpha"});
    for (double a : alphas) {
      try {
        const ParamPoint pt = make_point(wl_mu, a, p);
        const WavelengthResult w = wavelength(pt, p);
        t.row({wl_mu, a, std::string(to_string(pt.region)), w.lambda, w.d_mu, w.d_alpha});
      } catch (const Error& e) {
        t.failure({{"mu", wl_mu}, {"alpha", a}}, std::string(to_string(e.kind())), e.what());
      }
    }
    return 0;
  }

  if (*cv) {
    if (cv_bc.size() != 2) throw UsageError("--bc must be two letters from {d, n}");
    const IntervalProblem prob(cv_length, parse_bc(cv_bc[0]), parse_bc(cv_bc[1]), ModelParams(cv_sigma, cv_nu));
    const auto grid = parse_grid(cv_grid);
    const auto ns = parse_index_set(cv_n);
    std::ostream& out = output.open("curves");
    Table t(out, output.format, {"n", "alpha", "mu", "Z", "boundary_gap", "level_error"});
    for (int n : ns) {
      if (!target_wavelength(n, prob)) {
        t.failure({{"n", n}}, "invalid argument", "curve index not admissible for these boundary conditions");
        continue;
      }
      const CurveTrace tr = trace_curve(n, grid, prob);
      std::size_t f = 0;
      // Samples and failures interleaved in grid order.
      for (const auto& s : tr.samples) {
        while (f < tr.failures.size() && tr.failures[f].alpha < s.alpha) {
          t.failure({{"n", n}, {"alpha", tr.failures[f].alpha}}, std::string(to_string(tr.failures[f].kind)),
                    tr.failures[f].message);
          ++f;
        }
        t.row({n, s.alpha, s.mu, s.nodal_count, s.boundary_gap, s.level_error});
      }
      for (; f < tr.failures.size(); ++f)
        t.failure({{"n", n}, {"alpha", tr.failures[f].alpha}}, std::string(to_string(tr.failures[f].kind)),
                  tr.failures[f].message);
    }
    return 0;
  }

  if (*ss) {
    const auto [graph, guess] = ss_opts.build();
    const StarPoint q = newton_solve(guess, graph, ss_opts.rates.empty() ? ss_opts.mu : guess.mu);
    std::ostream& out = output.open("star-solve");
    Table t(out, output.format, point_columns(graph.degree()));
    t.row(point_cells(make_curve_point(q, graph)));
    return 0;
  }

  if (*ct) {
    const auto [graph, guess] = ct_opts.build();
    const StarPoint start = newton_solve(guess, graph, ct_opts.rates.empty() ? ct_opts.mu : guess.mu);
    const ContinuationResult res = continue_curve(start, graph, ct_end, ct_steps);
    std::ostream& out = output.open("continue");
    Table t(out, output.format, point_columns(graph.degree()));
    for (const auto& p : res.points) t.row(point_cells(p));
    if (!res.completed) {
      t.failure({{"mu", res.reached_mu}}, "non-convergence", res.message);
      out.flush();
      std::cerr << "continuation stopped at mu = " << format_double(res.reached_mu) << ": " << res.message << "\n";
      return kExitNumeric;
    }
    return 0;
  }

  if (*ce) {
    StarConfig cfg;
    if (ce_rates.empty()) {
      std::optional<std::vector<int>> fixed;
      if (!ce_zetas.empty()) fixed = parse_signs(ce_zetas);
      const auto found = find_config(ce_sigma, ce_d, ce_bound, fixed);
      if (!found) throw Error(ErrorKind::Unattainable, "no configuration with rates up to " + std::to_string(ce_bound));
      cfg = *found;
    } else {
      if (ce_zetas.empty()) throw UsageError("--rates needs --zetas");
      const auto rates = parse_rationals(ce_rates);
      if (static_cast<int>(rates.size()) != ce_d) throw UsageError("--rates needs --d entries");
      cfg = config_from_rates(ce_sigma, ce_nu, parse_signs(ce_zetas), rates,
                              ce_ns.empty() ? std::vector<int>{} : parse_ints(ce_ns),
                              ce_bcs.empty() ? std::vector<BoundaryCondition>{} : parse_bcs(ce_bcs));
    }
    const ViolationReport r = demonstrate_violation(cfg, ce_delta);
    std::ostream& out = output.open("counterexample");
    out << to_json(r) << "\n";
    return 0;
  }

  if (*vf) {
    std::ostream& out = output.open("verify");
    int failures = 0;
    for (const auto& check : verify::suite(vf_suite)) {
      const auto r = verify::run_check(check);
      out << verify::format_line(r) << "\n";
      out.flush();
      if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == nls::ErrorKind::InvalidArgument ? kExitUsage : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
