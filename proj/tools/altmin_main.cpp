// altmin: command-line driver.
//
//   altmin solve <spec.json> [--max-iters N] [--rule agnostic|short] [--out trace.csv]
//   altmin bench <suite>
//   altmin feastest <spec.json>
//   altmin lmo <spec.json> --direction 1,-1 [--set p|q]
//
// solve exits 0 (intersection point), 1 (disjoint), 2 (undecided); errors
// exit with 3 (bad input), 4 (unsupported combination) or 5 (anything else).

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "altmin/feasibility.hpp"
#include "altmin/problem_spec.hpp"
#include "altmin/suites.hpp"

namespace {

constexpr int kExitBadInput = 3;
constexpr int kExitUnsupported = 4;
constexpr int kExitFailure = 5;

using nlohmann::json;
using namespace altmin;

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

std::string certificate_path(const ProblemSpec& spec, const std::string& trace_path) {
  if (!spec.certificate.empty()) return spec.certificate;
  if (trace_path.empty()) return {};
  std::filesystem::path p(trace_path);
  p.replace_extension(".cert.json");
  return p.string();
}

int run_solve(const std::string& path, std::optional<std::size_t> max_iters, const std::string& rule,
              const std::string& out) {
  ProblemSpec spec = load_problem_spec(path);
  if (max_iters) {
    if (*max_iters < 1) throw SpecError("max_iters", "must be an integer >= 1");
    spec.max_iters = *max_iters;
  }
  if (!rule.empty()) spec.rule = parse_step_rule(rule);
  if (!out.empty()) spec.output = out;

  SolveOutcome outcome;
  if (spec.output.empty()) {
    outcome = solve_problem(spec, nullptr);
  } else {
    std::ofstream trace(spec.output);
    if (!trace) throw std::runtime_error("cannot write '" + spec.output + "'");
    outcome = solve_problem(spec, &trace);
  }

  const json cert = certificate_to_json(outcome.certificate);
  if (const std::string cpath = certificate_path(spec, spec.output); !cpath.empty()) {
    std::ofstream c(cpath);
    if (!c) throw std::runtime_error("cannot write '" + cpath + "'");
    c << cert.dump(2) << '\n';
  }
  std::cout << cert.dump(2) << '\n';
  return exit_code(outcome.certificate);
}

int run_bench(const std::string& suite) {
  bool ok = true;
  for (const SuiteReport& report : run_suite(suite)) {
    std::cout << report.render() << '\n';
    ok = ok && report.ok();
  }
  return ok ? 0 : 1;
}

int run_feastest(const std::string& path) {
  const ProblemSpec spec = load_problem_spec(path);
  const Matrix* u = spec.set_p.vertices();
  const Matrix* v = spec.set_q.vertices();
  if (u == nullptr || v == nullptr) throw UnsupportedOperation("feastest: both sets must be vpolytope");
  const FeasibilityReport rep = solve_feasibility_detailed(FeasibilityProgram(columns(*u), columns(*v)));
  json j = {{"feasible", rep.feasible}, {"phase_one_objective", rep.phase_one_objective}, {"pivots", rep.pivots}};
  if (rep.weights) {
    j["point"] = to_json(rep.weights->point);
    j["lambda"] = rep.weights->lambda;
    j["kappa"] = rep.weights->kappa;
    j["residual"] = rep.weights->residual;
  }
  std::cout << j.dump(2) << '\n';
  return rep.feasible ? 0 : 1;
}

int run_lmo(const std::string& path, const std::string& direction, const std::string& which) {
  const ProblemSpec spec = load_problem_spec(path);
  const Vector c = parse_direction(direction);
  if (c.size() != spec.dimension) {
    throw SpecError("direction", "expected " + std::to_string(spec.dimension) + " entries");
  }
  const OracleSet& set = which == "q" ? spec.set_q : spec.set_p;
  const LmoResult r = set.lmo_indexed(c);
  json j = {{"set", which},
            {"kind", std::string(to_string(set.kind()))},
            {"direction", to_json(c)},
            {"point", to_json(r.point)},
            {"value", c.dot(r.point)}};
  if (r.vertex) j["vertex"] = *r.vertex;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex feasibility with linear minimization oracles"};
  app.require_subcommand(1);

  std::string spec_path;
  std::optional<std::size_t> max_iters;
  std::string rule;
  std::string out;
  auto* solve = app.add_subcommand("solve", "Run the algorithm named in a problem file");
  solve->add_option("spec", spec_path, "Problem file (JSON)")->required();
  solve->add_option("--max-iters", max_iters, "Override max_iters");
  solve->add_option("--rule", rule, "Override step_rule")->check(CLI::IsMember({"agnostic", "short"}));
  solve->add_option("--out", out, "Trace CSV path (overrides output)");

  std::string suite;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("suite", suite, "rates, certificates, adaptive, pocs or pocs-vs-alm")->required();

  std::string feas_path;
  auto* feastest = app.add_subcommand("feastest", "Intersect the vertex hulls of set_p and set_q by LP");
  feastest->add_option("spec", feas_path, "Problem file (JSON)")->required();

  std::string lmo_path;
  std::string direction;
  std::string which = "p";
  auto* lmo = app.add_subcommand("lmo", "Probe a linear minimization oracle");
  lmo->add_option("spec", lmo_path, "Problem file (JSON)")->required();
  lmo->add_option("--direction", direction, "Comma-separated direction")->required();
  lmo->add_option("--set", which, "p or q")->check(CLI::IsMember({"p", "q"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*solve) return run_solve(spec_path, max_iters, rule, out);
    if (*bench) return run_bench(suite);
    if (*feastest) return run_feastest(feas_path);
    if (*lmo) return run_lmo(lmo_path, direction, which);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
