#pragma once

// Benchmark suites: run the solvers over the fixed instances and compare
// every measured quantity against its convergence bound.
//
// Instances of a suite may run concurrently (each solve is single-threaded);
// reports are sorted by instance name so output does not depend on scheduling.

#include <functional>
#include <string>
#include <vector>

#include "altmin/alm.hpp"
#include "altmin/oracles.hpp"

namespace altmin {

struct InstanceReport {
  std::string instance;
  /// Table rows, already formatted.
  std::vector<std::string> lines;
  std::size_t checks = 0;
  std::size_t violations = 0;

  bool ok() const { return violations == 0; }
};

struct SuiteReport {
  std::string suite;
  std::string header;
  std::vector<InstanceReport> instances;

  std::size_t checks() const;
  std::size_t violations() const;
  bool ok() const { return violations() == 0; }
  std::string render() const;
};

/// Primal bound of ALM (agnostic and short step) at every iterate.
SuiteReport primal_bound_suite();
/// Best dual quantity up to T in {10, 100, 1000} on intersecting pairs.
SuiteReport dual_bound_suite();
/// Parameterized disjointness certificate: budget on disjoint pairs, never
/// firing on intersecting ones.
SuiteReport parameterized_certificate_suite();
/// Parameter-free certificate: budget, persistence and brute-force soundness.
SuiteReport free_certificate_suite();
/// Adaptive ALM on intersecting V-polytopes against the epsilon_pq budget.
SuiteReport adaptive_certificate_suite();
/// POCS averaged and last-iterate rates.
SuiteReport pocs_rate_suite();
/// Cyclic CG rates on the k = 1, 2, 3 block problems.
SuiteReport block_rate_suite();
/// Oracle calls needed to bring ||x_t - y_t||^2 - dist^2 below 1e-4.
SuiteReport pocs_vs_alm_suite();

std::vector<std::string> suite_names();
/// Named groups: rates, certificates, adaptive, pocs, pocs-vs-alm.
/// Throws InvalidArgument for an unknown name.
std::vector<SuiteReport> run_suite(const std::string& name);

/// min over P of <c, x> evaluated from closed-form support functions (or all
/// vertices), without going through the LMO.
double brute_force_support(const OracleSet& set, const Vector& c);

/// Checks a Disjoint certificate with brute_force_support.
bool disjoint_certificate_sound(const OracleSet& p, const OracleSet& q, const Disjoint& certificate);

}  // namespace altmin
