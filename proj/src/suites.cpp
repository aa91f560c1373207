#include "altmin/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

#include "altmin/feasibility.hpp"
#include "altmin/instances.hpp"
#include "altmin/pocs.hpp"

namespace altmin {

namespace {

constexpr std::size_t kRateIterations = 1000;
constexpr std::size_t kMaxIterations = 10000;
constexpr double kMatchedAccuracy = 1e-4;
constexpr std::size_t kMatchedCap = 20000;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

const char* verdict(bool ok) { return ok ? "ok" : "VIOLATED"; }

/// Records one measured-vs-bound comparison.
void check(InstanceReport& r, const std::string& label, double measured, double bound) {
  const bool ok = measured <= bound;
  ++r.checks;
  if (!ok) ++r.violations;
  r.lines.push_back(fmt("  %-34s measured %-13.6g bound %-13.6g %s", label.c_str(), measured, bound, verdict(ok)));
}

void require(InstanceReport& r, const std::string& label, bool ok) {
  ++r.checks;
  if (!ok) ++r.violations;
  r.lines.push_back(fmt("  %-34s %s", label.c_str(), verdict(ok)));
}

void note(InstanceReport& r, const std::string& text) { r.lines.push_back("  " + text); }

template <class Item, class Fn>
std::vector<InstanceReport> run_instances(const std::vector<Item>& items, Fn&& fn) {
  std::vector<InstanceReport> out(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  const long n = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(items[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(out.begin(), out.end(),
            [](const InstanceReport& a, const InstanceReport& b) { return a.instance < b.instance; });
  return out;
}

bool is_report_point(std::size_t t, std::size_t last) {
  return t == 1 || t == 10 || t == 100 || t == 1000 || t == 10000 || t == last;
}

/// AlmState after iteration t of a keep_points run.
AlmState state_at(const AlmRun& run, std::size_t t) {
  AlmState s;
  if (t == 0) {
    s.x = run.trace.start[0];
    s.y = run.trace.start[1];
  } else {
    const auto& pts = run.trace.points[2 * t - 1];
    s.x = pts[0];
    s.y = pts[1];
  }
  s.t = t;
  s.lmo_calls = run.iterations[t].lmo_calls;
  return s;
}

std::vector<PairInstance> filter(std::vector<PairInstance> all, bool intersecting) {
  std::vector<PairInstance> out;
  for (auto& inst : all) {
    if (inst.intersecting() == intersecting) out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

std::size_t SuiteReport::checks() const {
  std::size_t n = 0;
  for (const auto& i : instances) n += i.checks;
  return n;
}

std::size_t SuiteReport::violations() const {
  std::size_t n = 0;
  for (const auto& i : instances) n += i.violations;
  return n;
}

std::string SuiteReport::render() const {
  std::ostringstream out;
  out << "== " << suite << " ==\n";
  if (!header.empty()) out << header << '\n';
  for (const auto& inst : instances) {
    out << inst.instance << (inst.ok() ? "" : "  [VIOLATIONS]") << '\n';
    for (const auto& line : inst.lines) out << line << '\n';
  }
  out << suite << ": " << checks() << " checks, " << violations() << " violations\n";
  return out.str();
}

double brute_force_support(const OracleSet& set, const Vector& c) {
  return std::visit(
      [&](const auto& g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Box>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < c.size(); ++i) s += std::min(c[i] * g.lower[i], c[i] * g.upper[i]);
          return s;
        } else if constexpr (std::is_same_v<G, Ball>) {
          return c.dot(g.center) - g.radius * c.norm();
        } else if constexpr (std::is_same_v<G, Simplex>) {
          return g.scale * c.minCoeff();
        } else if constexpr (std::is_same_v<G, L1Ball>) {
          return c.dot(g.center) - g.radius * c.cwiseAbs().maxCoeff();
        } else {
          double best = std::numeric_limits<double>::infinity();
          for (Eigen::Index j = 0; j < g.vertices.cols(); ++j) best = std::min(best, c.dot(g.vertices.col(j)));
          return best;
        }
      },
      set.geometry());
}

bool disjoint_certificate_sound(const OracleSet& p, const OracleSet& q, const Disjoint& certificate) {
  const Vector& g = certificate.direction;
  if (g.size() != p.dimension()) return false;
  const double margin = brute_force_support(p, g) + brute_force_support(q, -g);
  return margin > 0.0 && std::abs(margin - certificate.margin) <= 1e-9 * (1.0 + std::abs(margin));
}

SuiteReport primal_bound_suite() {
  SuiteReport report{"primal-bound", "||x_t - y_t||^2 / 4 against the ALM primal rate, every iterate t <= 1000", {}};
  report.instances = run_instances(pair_suite(), [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const double dp = inst.p.diameter();
    const double dq = inst.q.diameter();
    const double d2 = inst.diameter_sq();
    const double dist = inst.distance;
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      AlmRun run = alm_run(inst.p, inst.q, rule, kRateIterations, std::nullopt, {false, false, false});
      const double c = (dp + dq + dist) * std::max(dp, dq) + 2.0 * d2;
      double worst = -std::numeric_limits<double>::infinity();
      std::size_t bad = 0;
      for (const AlmRow& row : run.iterations) {
        const double td = static_cast<double>(row.t);
        const double bound = rule == StepRule::Agnostic ? kOnePlusTwoSqrtTwo * d2 / (td + 2.0) + dist * dist / 4.0
                                                        : 4.0 * c / (td + 4.0) + dist * dist / 4.0;
        const double lhs = row.distance_sq / 4.0;
        worst = std::max(worst, lhs - bound);
        if (lhs > bound + kBoundSlack) ++bad;
        if (is_report_point(row.t, kRateIterations)) {
          r.lines.push_back(fmt("  %-9s t=%-6zu lhs %-13.6g bound %-13.6g %s", std::string(to_string(rule)).c_str(),
                                row.t, lhs, bound + kBoundSlack, verdict(lhs <= bound + kBoundSlack)));
        }
      }
      r.checks += run.iterations.size();
      r.violations += bad;
      note(r, fmt("%-9s %zu iterates, worst lhs - bound %.3g, %zu violations",
                  std::string(to_string(rule)).c_str(), run.iterations.size(), worst, bad));
    }
    return r;
  });
  return report;
}

SuiteReport dual_bound_suite() {
  SuiteReport report{"dual-bound", "min_{1<=t<=T} dual_t against 6.75 (1+2sqrt2) D^2 / (T+2), agnostic", {}};
  report.instances = run_instances(filter(pair_suite(), true), [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const double d2 = inst.diameter_sq();
    AlmRun run = alm_run(inst.p, inst.q, StepRule::Agnostic, kRateIterations, std::nullopt, {true, false, false});
    double best = std::numeric_limits<double>::infinity();
    for (const AlmRow& row : run.iterations) {
      if (row.t == 0) continue;
      best = std::min(best, *row.dual);
      if (row.t == 10 || row.t == 100 || row.t == 1000) {
        const double bound = 6.75 * kOnePlusTwoSqrtTwo * d2 / (static_cast<double>(row.t) + 2.0);
        check(r, fmt("T=%zu", row.t), best, bound + kBoundSlack);
      }
    }
    return r;
  });
  return report;
}

SuiteReport parameterized_certificate_suite() {
  SuiteReport report{"parameterized-certificate",
                     "first t with ||x_t - y_t||^2 above the threshold; block-LMO calls against "
                     "8 (1+2sqrt2) D^2 / dist^2",
                     {}};
  report.instances = run_instances(pair_suite(), [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const double dp = inst.p.diameter();
    const double dq = inst.q.diameter();
    if (!(dp > 0.0 && dq > 0.0)) {
      note(r, "skipped: a set has zero diameter");
      return r;
    }
    if (inst.intersecting()) {
      for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
        AlmRun run = alm_run(inst.p, inst.q, rule, kRateIterations, std::nullopt, {false, false, false});
        std::size_t fired = 0;
        for (const AlmRow& row : run.iterations) {
          if (row.distance_sq > disjoint_threshold(row.t, dp, dq, rule)) ++fired;
        }
        require(r, fmt("%s never fires (%zu iterates)", std::string(to_string(rule)).c_str(), run.iterations.size()),
                fired == 0);
      }
      return r;
    }
    const double dist = inst.distance;
    const double budget = 8.0 * kOnePlusTwoSqrtTwo * inst.diameter_sq() / (dist * dist);
    const auto iters = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(budget / 2.0)) + 1, kMaxIterations);
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      AlmRun run = alm_run(inst.p, inst.q, rule, iters, std::nullopt, {false, false, false});
      std::optional<AlmRow> first;
      for (const AlmRow& row : run.iterations) {
        if (row.distance_sq > disjoint_threshold(row.t, dp, dq, rule)) {
          first = row;
          break;
        }
      }
      if (rule == StepRule::Agnostic) {
        require(r, "agnostic fires", first.has_value());
        if (first) check(r, fmt("agnostic calls (t=%zu)", first->t), static_cast<double>(first->lmo_calls), budget);
      } else if (first) {
        note(r, fmt("short step fires at t=%zu (%zu calls)", first->t, first->lmo_calls));
      } else {
        note(r, fmt("short step did not fire within %zu iterations", iters));
      }
    }
    return r;
  });
  return report;
}

SuiteReport free_certificate_suite() {
  SuiteReport report{"free-certificate",
                     "support-gap certificate: calls against 8 (1+2sqrt2) D^2 (D_P+D_Q)^2 / dist^4, "
                     "persistence past half that, brute-force soundness",
                     {}};
  report.instances = run_instances(pair_suite(), [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const double dp = inst.p.diameter();
    const double dq = inst.q.diameter();
    const double d2 = inst.diameter_sq();
    if (inst.intersecting()) {
      AlmRun run = alm_run(inst.p, inst.q, StepRule::Agnostic, kRateIterations, std::nullopt, {false, false, true});
      std::size_t fired = 0;
      for (std::size_t t = 0; t <= kRateIterations; ++t) {
        if (certify_disjoint_free(inst.p, inst.q, state_at(run, t))) ++fired;
      }
      require(r, fmt("never fires (%zu iterates)", kRateIterations + 1), fired == 0);
      AdaptiveResult res = alm_adaptive(inst.p, inst.q, StepRule::Agnostic, kRateIterations);
      require(r, fmt("adaptive verdict %s is not Disjoint", std::string(res.certificate.verdict_name()).c_str()),
              !res.certificate.is_disjoint());
      return r;
    }

    const double dist = inst.distance;
    const double dist4 = dist * dist * dist * dist;
    const double budget = 8.0 * kOnePlusTwoSqrtTwo * d2 * (dp + dq) * (dp + dq) / dist4;
    const double persist_after = budget / 2.0;
    const auto horizon = std::min<std::size_t>(
        std::max<std::size_t>(static_cast<std::size_t>(std::ceil(persist_after)) + 100, kRateIterations),
        kMaxIterations);
    AlmRun run = alm_run(inst.p, inst.q, StepRule::Agnostic, horizon, std::nullopt, {false, false, true});

    std::optional<Certificate> first;
    std::size_t emitted = 0;
    std::size_t unsound = 0;
    std::size_t missing_after = 0;
    std::size_t checked_after = 0;
    for (std::size_t t = 0; t <= horizon; ++t) {
      const auto cert = certify_disjoint_free(inst.p, inst.q, state_at(run, t));
      if (cert) {
        ++emitted;
        if (!disjoint_certificate_sound(inst.p, inst.q, std::get<Disjoint>(cert->verdict))) ++unsound;
        if (!first) first = cert;
      }
      if (static_cast<double>(t) > persist_after) {
        ++checked_after;
        if (!cert) ++missing_after;
      }
    }
    require(r, "certificate found", first.has_value());
    if (first) {
      check(r, fmt("calls (t=%zu)", first->iterations), static_cast<double>(first->lmo_calls), budget);
    }
    require(r, fmt("holds for all %zu iterates past %.4g", checked_after, persist_after), missing_after == 0);
    require(r, fmt("%zu emitted certificates sound", emitted), unsound == 0);

    AdaptiveResult res = alm_adaptive(inst.p, inst.q, StepRule::Agnostic, horizon);
    const bool sound = res.certificate.is_disjoint() &&
                       disjoint_certificate_sound(inst.p, inst.q, std::get<Disjoint>(res.certificate.verdict));
    require(r, fmt("adaptive Disjoint sound (%zu calls)", res.certificate.lmo_calls), sound);
    return r;
  });
  return report;
}

SuiteReport adaptive_certificate_suite() {
  SuiteReport report{"adaptive",
                     "alm_adaptive on intersecting V-polytopes; calls against 16 (1+2sqrt2) D^2 / eps_PQ^2", {}};
  report.instances = run_instances(adaptive_suite(), [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const EpsilonPQ eps = epsilon_pq(inst.p, inst.q);
    require(r, "eps_PQ finite", eps.finite());
    if (!eps.finite()) return r;
    const double budget = 16.0 * kOnePlusTwoSqrtTwo * inst.diameter_sq() / (eps.value * eps.value);
    note(r, fmt("eps_PQ %.6g over %zu subset pairs (%zu disjoint)", eps.value, eps.pairs, eps.disjoint_pairs));
    const auto iters = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(budget / 2.0)) + 1, 100000);
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      AdaptiveResult res = alm_adaptive(inst.p, inst.q, rule, iters);
      const std::string name(to_string(rule));
      const Certificate& c = res.certificate;
      if (rule == StepRule::ShortStep) {
        note(r, fmt("short step: %s after %zu calls", std::string(c.verdict_name()).c_str(), c.lmo_calls));
        continue;
      }
      require(r, "IntersectionPoint", c.is_intersection());
      if (!c.is_intersection()) continue;
      const Vector& x = std::get<IntersectionPoint>(c.verdict).point;
      require(r, "point in conv(P)", membership(x, columns(*inst.p.vertices())));
      require(r, "point in conv(Q)", membership(x, columns(*inst.q.vertices())));
      require(r, "certificate re-validates", validate_certificate(inst.p, inst.q, c).valid);
      check(r, fmt("calls (t=%zu, %zu LPs)", c.iterations, res.lp_solves), static_cast<double>(c.lmo_calls), budget);
    }
    return r;
  });
  return report;
}

SuiteReport pocs_rate_suite() {
  SuiteReport report{"pocs", "averaged residual and last-iterate bounds against dist(y0, .)^2 / T", {}};
  report.instances = run_instances(pocs_suite(), [](const PocsInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    PocsTrace trace = pocs_run(inst.p, inst.q, inst.y0, kRateIterations, inst.distance_vector);
    PocsRateReport rate = check_pocs_rate(trace, inst.dist_y0);
    r.checks += rate.rows.size() * (rate.intersecting ? 2 : 1) + (rate.intersecting ? 1 : 0);
    r.violations += rate.violations;
    for (const PocsBoundRow& row : rate.rows) {
      if (!is_report_point(row.horizon, rate.rows.size())) continue;
      std::string line = fmt("  T=%-6zu avg residual %-12.5g bound %-12.5g", row.horizon, row.averaged_residual,
                             row.bound + kBoundSlack);
      if (row.final_distance_sq) line += fmt(" dist_sq %-12.5g", *row.final_distance_sq);
      line += row.violated ? " VIOLATED" : " ok";
      r.lines.push_back(line);
    }
    if (rate.intersecting) {
      if (!rate.monotone) ++r.violations;
      note(r, fmt("distance_sq monotone: %s", rate.monotone ? "yes" : "NO"));
    }
    note(r, fmt("%zu iterations%s", trace.rows.size(), trace.stalled ? " (stalled)" : ""));
    return r;
  });
  return report;
}

SuiteReport block_rate_suite() {
  SuiteReport report{"block-rates", "cyclic CG primal and dual rates, 1000 sweeps per rule", {}};
  report.instances = run_instances(block_suite(), [](const BlockInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      IterateTrace trace = cbcg_run(inst.problem, inst.start, rule, kRateIterations);
      RateReport rate = check_rate_bounds(trace, inst.problem, inst.fstar);
      r.checks += rate.rows.size();
      r.violations += rate.violations;
      for (const BoundRow& row : rate.rows) {
        if (!is_report_point(row.sweep, kRateIterations) && !row.violated) continue;
        r.lines.push_back(fmt("  %-9s s=%-5zu %-6s measured %-12.5g bound %-12.5g %s",
                              std::string(to_string(rule)).c_str(), row.sweep,
                              row.kind == BoundKind::Primal ? "primal" : "dual", row.measured, row.bound,
                              verdict(!row.violated)));
      }
      note(r, fmt("%-9s k=%zu constant %.5g, %zu rows", std::string(to_string(rule)).c_str(), inst.problem.size(),
                  rate.constant, rate.rows.size()));
    }
    return r;
  });
  return report;
}

SuiteReport pocs_vs_alm_suite() {
  SuiteReport report{"pocs-vs-alm",
                     fmt("oracle calls until ||x_t - y_t||^2 - dist^2 <= %g (projections for pocs, block LMOs for alm)",
                         kMatchedAccuracy),
                     {}};
  std::vector<PairInstance> friendly;
  for (auto& inst : pair_suite()) {
    if (inst.p.has_projection() && inst.q.has_projection()) friendly.push_back(std::move(inst));
  }
  report.instances = run_instances(friendly, [](const PairInstance& inst) {
    InstanceReport r{inst.name, {}, 0, 0};
    const double target = inst.distance * inst.distance + kMatchedAccuracy;
    auto show = [](std::optional<std::size_t> calls) {
      return calls ? std::to_string(*calls) : std::string(">") + std::to_string(2 * kMatchedCap);
    };

    const Vector y0 = inst.q.lmo(-Vector::Ones(inst.q.dimension()));
    PocsTrace pocs = pocs_run(inst.p, inst.q, y0, kMatchedCap);
    std::optional<std::size_t> pocs_calls;
    for (const PocsRow& row : pocs.rows) {
      if (row.distance_sq <= target) {
        pocs_calls = 2 * row.t;
        break;
      }
    }
    std::optional<std::size_t> alm_calls[2];
    int k = 0;
    for (StepRule rule : {StepRule::Agnostic, StepRule::ShortStep}) {
      AlmRun run = alm_run(inst.p, inst.q, rule, kMatchedCap, std::nullopt, {false, false, false});
      for (const AlmRow& row : run.iterations) {
        if (row.distance_sq <= target) {
          alm_calls[k] = row.lmo_calls;
          break;
        }
      }
      ++k;
    }
    r.lines.push_back(fmt("  pocs projections %-8s alm-agnostic LMOs %-8s alm-short LMOs %-8s", show(pocs_calls).c_str(),
                          show(alm_calls[0]).c_str(), show(alm_calls[1]).c_str()));
    return r;
  });
  return report;
}

std::vector<std::string> suite_names() { return {"rates", "certificates", "adaptive", "pocs", "pocs-vs-alm"}; }

std::vector<SuiteReport> run_suite(const std::string& name) {
  if (name == "rates") return {primal_bound_suite(), dual_bound_suite(), block_rate_suite()};
  if (name == "certificates") return {parameterized_certificate_suite(), free_certificate_suite()};
  if (name == "adaptive") return {adaptive_certificate_suite()};
  if (name == "pocs") return {pocs_rate_suite()};
  if (name == "pocs-vs-alm") return {pocs_rate_suite(), pocs_vs_alm_suite()};
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown suite '" + name + "' (" + known + ")");
}

}  // namespace altmin
