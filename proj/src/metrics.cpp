#include "fmclp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fmclp {

namespace {

FairnessSpec uniform_spec(int p) {
  FairnessSpec s;
  s.weights = owa_family(OwaFamily::W, p);
  s.alpha = Rational(0);
  return s;
}

FairnessSpec maxmin_spec(int p) {
  FairnessSpec s;
  s.weights = owa_family(OwaFamily::C, p);
  s.alpha = Rational(0);
  return s;
}

CoverageSolution solve_for(const Instance& inst, const FairnessSpec& spec, int p, double R,
                           SolveSpace space, const SolveOptions& opts) {
  return space == SolveSpace::Discrete ? solve_discrete(inst, spec, p, R, opts)
                                       : solve_continuous_fds(inst, spec, p, R, opts);
}

}  // namespace

Baselines compute_baselines(const Instance& inst, int p, double R, SolveSpace space,
                            const SolveOptions& opts) {
  Baselines b;
  b.p = p;
  b.R = R;
  auto sum_sol = solve_for(inst, uniform_spec(p), p, R, space, opts);
  b.sum_baseline = std::accumulate(sum_sol.W.begin(), sum_sol.W.end(), 0.0);
  auto min_sol = solve_for(inst, maxmin_spec(p), p, R, space, opts);
  b.min_baseline = min_sol.objective.value();  // alpha = 0 is never -inf
  b.instance_hash = sum_sol.instance_hash;
  return b;
}

double envy(double wk, double wj) { return std::max(0.0, wk - wj); }

double gini_index(const std::vector<double>& W) {
  if (W.empty()) throw std::invalid_argument("gini_index: empty coverage vector");
  double total = 0.0;
  for (double w : W) {
    if (w < 0) throw std::invalid_argument("gini_index: negative coverage");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("gini_index: zero total coverage");
  const std::size_t p = W.size();
  double s = 0.0;
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t j = 0; j < p; ++j) s += envy(W[k], W[j]);
  return s / (2.0 * static_cast<double>(p) * total);
}

std::optional<double> price_of_fairness(double sum_baseline, double total_covered) {
  if (sum_baseline == 0) return std::nullopt;
  if (total_covered > sum_baseline * (1.0 + 1e-9))
    throw std::runtime_error("price_of_fairness: covered weight exceeds the baseline; "
                             "baselines do not match this solution");
  return std::max(0.0, (sum_baseline - total_covered) / sum_baseline);
}

std::optional<double> price_of_fairness(const CoverageSolution& sol, const Baselines& b) {
  return price_of_fairness(b.sum_baseline,
                           std::accumulate(sol.W.begin(), sol.W.end(), 0.0));
}

std::optional<double> price_of_efficiency(double min_baseline, double min_covered) {
  if (min_baseline == 0) return std::nullopt;
  if (min_covered > min_baseline * (1.0 + 1e-9))
    throw std::runtime_error("price_of_efficiency: worst-slot coverage exceeds the baseline; "
                             "baselines do not match this solution");
  return std::max(0.0, (min_baseline - min_covered) / min_baseline);
}

std::optional<double> price_of_efficiency(const CoverageSolution& sol, const Baselines& b) {
  if (sol.W.empty()) throw std::invalid_argument("price_of_efficiency: empty coverage vector");
  return price_of_efficiency(b.min_baseline, *std::min_element(sol.W.begin(), sol.W.end()));
}

MetricsReport report(const CoverageSolution& sol, const Instance& inst, const Baselines& b) {
  const std::string h = instance_hash(inst);
  if (sol.instance_hash != h)
    throw std::invalid_argument("report: solution was computed on a different instance");
  if (b.instance_hash != h)
    throw std::invalid_argument("report: baselines were computed on a different instance");
  if (b.p != static_cast<int>(sol.W.size()))
    throw std::invalid_argument("report: baseline p differs from the solution's slot count");
  MetricsReport r;
  r.W = sol.W;
  r.baselines = b;
  r.status = sol.status;
  const double covered = std::accumulate(sol.W.begin(), sol.W.end(), 0.0);
  const double demand = inst.total_weight();
  r.coverage_pct = demand > 0 ? 100.0 * covered / demand : 0.0;
  r.pof = price_of_fairness(sol, b);
  r.poe = price_of_efficiency(sol, b);
  if (covered > 0) r.gini = gini_index(sol.W);
  return r;
}

}  // namespace fmclp
