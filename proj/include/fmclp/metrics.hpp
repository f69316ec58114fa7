#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmclp/solver.hpp"

namespace fmclp {

// Reference values a fairness run is compared against. sum_baseline is the
// best total covered weight (uniform weights, alpha = 0); min_baseline is the
// best worst-slot coverage (max-min weights, alpha = 0). Both are recomputed
// exactly, never cached across instances.
struct Baselines {
  double sum_baseline = 0.0;
  double min_baseline = 0.0;
  std::string instance_hash;
  int p = 0;
  double R = 0.0;
};

Baselines compute_baselines(const Instance& inst, int p, double R, SolveSpace space,
                            const SolveOptions& opts = {});

// max(0, wk - wj): how much slot j's coverage exceeds slot k's, one-sided.
double envy(double wk, double wj);

// Sum of one-sided envies over ordered slot pairs, normalized by 2 * p * sum(W).
// Zero iff all slots cover equally. Throws on empty W, negative entries, or
// zero total.
double gini_index(const std::vector<double>& W);

// (sum_baseline - total) / sum_baseline. Empty when the baseline is zero
// (nothing coverable, the ratio is undefined). Throws when total exceeds the
// baseline beyond rounding (relative 1e-9): the baseline is then inconsistent
// with the solution.
std::optional<double> price_of_fairness(double sum_baseline, double total_covered);
std::optional<double> price_of_fairness(const CoverageSolution& sol, const Baselines& b);

// (min_baseline - min W) / min_baseline, same conventions.
std::optional<double> price_of_efficiency(double min_baseline, double min_covered);
std::optional<double> price_of_efficiency(const CoverageSolution& sol, const Baselines& b);

struct MetricsReport {
  std::optional<double> pof;
  std::optional<double> poe;
  std::optional<double> gini;
  double coverage_pct = 0.0;  // 100 * covered weight / total demand weight
  std::vector<double> W;
  Baselines baselines;
  SolveStatus status = SolveStatus::Optimal;
};

// Checks that solution, instance, and baselines all describe the same problem
// (hashes and p must agree) before combining them.
MetricsReport report(const CoverageSolution& sol, const Instance& inst, const Baselines& b);

}  // namespace fmclp
