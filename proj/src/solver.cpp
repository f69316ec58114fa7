#include "fmclp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fmclp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

/* Lean fair_owa evaluator for search loops. Mirrors fair_owa's arithmetic
 * (sort ascending, identical accumulation order) so incumbent values agree
 * bit-for-bit with the final public recomputation. -inf is the native double
 * -infinity here; conversion to ExtReal happens at the boundary. */
struct FairEval {
  std::vector<double> lambda;
  double a = 0;
  bool is_zero = false, is_one = false, ge_one = false;
  mutable std::vector<double> scratch;

  explicit FairEval(const FairnessSpec& spec)
      : lambda(spec.weights.lambda),
        a(spec.alpha.to_double()),
        is_zero(spec.alpha == Rational(0)),
        is_one(spec.alpha == Rational(1)),
        ge_one(spec.alpha >= Rational(1)),
        scratch(lambda.size()) {}

  double eval(const double* W) const {
    const std::size_t p = lambda.size();
    std::copy(W, W + p, scratch.begin());
    std::sort(scratch.begin(), scratch.end());
    if (is_zero) {
      double v = 0;
      for (std::size_t j = 0; j < p; ++j) v += lambda[j] * scratch[j];
      return v;
    }
    if (ge_one && scratch[0] == 0) return kNegInf;
    if (is_one) {
      double v = 0;
      for (std::size_t j = 0; j < p; ++j) v += lambda[j] * std::log(scratch[j]);
      return v;
    }
    double v = 0;
    for (std::size_t j = 0; j < p; ++j) v += lambda[j] * std::pow(scratch[j], 1.0 - a);
    return v / (1.0 - a);
  }
  double eval(const std::vector<double>& W) const { return eval(W.data()); }
};

struct Incumbent {
  bool has = false;
  double best = kNegInf;  // warm-start value until `has` flips

  bool improves(double val) const { return has ? val > best : val >= best; }
  /* Safe to discard a subtree with upper bound ub? Before the first recorded
   * leaf, only strictly-worse-than-warm-start subtrees may go (the warm value
   * is achievable, so such a subtree cannot contain the optimum); afterwards
   * ties go too, which preserves the first (lexicographically smallest)
   * optimum found. */
  bool prune(double ub, double tol) const {
    if (!has) {
      // ub and the warm-start floor accumulate the same weights in different
      // orders, so equal quantities can disagree by a few ulps; a bare
      // comparison can then prune the floor's own leaf and end the search
      // leafless
      return ub < best - 1e-12 * std::max(1.0, std::fabs(best));
    }
    if (ub <= best) return true;
    if (tol > 0 && best != kNegInf)
      return (ub - best) / std::max(std::fabs(ub), 1e-12) <= tol;
    return false;
  }
};

double rel_gap(double ub, double lb) {
  if (!(ub > lb)) return 0.0;
  if (lb == kNegInf) return kPosInf;
  return (ub - lb) / std::max(std::fabs(ub), 1e-12);
}

ExtReal to_ext(double v) { return v == kNegInf ? ExtReal::neg_inf() : ExtReal(v); }

/* Reorder slots so W is nondecreasing (stable: equal coverages keep their
 * slot order); sites/chosen/assignment are permuted consistently. */
void canonicalize_slots(CoverageSolution& sol) {
  const int p = static_cast<int>(sol.W.size());
  std::vector<int> perm(p);
  for (int k = 0; k < p; ++k) perm[k] = k;
  std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) { return sol.W[x] < sol.W[y]; });
  std::vector<int> inv(p);
  for (int k = 0; k < p; ++k) inv[perm[k]] = k;
  std::vector<double> W(p);
  std::vector<Point> sites(p);
  std::vector<int> chosen;
  if (!sol.chosen.empty()) chosen.resize(p);
  for (int k = 0; k < p; ++k) {
    W[k] = sol.W[perm[k]];
    if (!sol.sites.empty()) sites[k] = sol.sites[perm[k]];
    if (!sol.chosen.empty()) chosen[k] = sol.chosen[perm[k]];
  }
  sol.W = std::move(W);
  if (!sol.sites.empty()) sol.sites = std::move(sites);
  sol.chosen = std::move(chosen);
  for (int& a : sol.assignment)
    if (a >= 0) a = inv[a];
}

std::string zero_slot_witness(const std::vector<double>& W) {
  std::ostringstream os;
  os << "objective is -inf for every feasible choice: alpha >= 1 and the best coverage vector (";
  for (std::size_t k = 0; k < W.size(); ++k) os << (k ? "," : "") << W[k];
  os << ") still has a zero slot; no selection can give every facility positive covered demand";
  return os.str();
}

void finalize_status(CoverageSolution& sol, bool timed_out, double pending_ub, double best) {
  sol.gap = rel_gap(std::max(pending_ub, best), best);
  if (timed_out && sol.gap > 0) {
    sol.status = SolveStatus::Feasible;
  } else if (sol.objective.is_neg_inf()) {
    sol.status = SolveStatus::DegenerateMinusInfinity;
    sol.witness = zero_slot_witness(sol.W);
  } else {
    sol.status = SolveStatus::Optimal;
  }
}

void check_common(const Instance& inst, const FairnessSpec& spec, int p, double R) {
  inst.validate();
  spec.validate();
  if (p < 1) throw std::invalid_argument("solve: p must be >= 1");
  if (spec.weights.p() != p) throw std::invalid_argument("solve: weights length must equal p");
  if (!(R > 0)) throw std::invalid_argument("solve: R must be positive");
}

std::vector<std::vector<int>> coverer_lists(const std::vector<Point>& sites, const Instance& inst,
                                            double R) {
  std::vector<std::vector<int>> cov(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t k = 0; k < sites.size(); ++k)
      if (within_radius(inst.points[i], sites[k], R, inst.norm))
        cov[i].push_back(static_cast<int>(k));
  return cov;
}

/* allocate() core so solvers can reuse it without revalidating. */
AllocationResult allocate_impl(const std::vector<Point>& sites, const Instance& inst,
                               const FairnessSpec& spec, double R, const FairEval& fe,
                               long long* nodes) {
  const int n = static_cast<int>(inst.size());
  const int p = static_cast<int>(sites.size());
  auto cov = coverer_lists(sites, inst, R);
  AllocationResult res;
  res.assignment.assign(n, -1);
  std::vector<double> W(p, 0.0);
  std::vector<int> contested;
  for (int i = 0; i < n; ++i) {
    if (cov[i].size() == 1) {
      res.assignment[i] = cov[i][0];
      W[cov[i][0]] += inst.weights[i];
    } else if (cov[i].size() > 1) {
      contested.push_back(i);
    }
  }
  std::sort(contested.begin(), contested.end(), [&](int x, int y) {
    if (inst.weights[x] != inst.weights[y]) return inst.weights[x] > inst.weights[y];
    return x < y;
  });
  const int c = static_cast<int>(contested.size());
  Incumbent inc;
  std::vector<int> choice(c, -1), best_choice(c, -1);
  std::vector<double> best_W = W;
  std::vector<double> wub(p);

  auto rec = [&](auto&& self, int t) -> void {
    if (nodes) ++*nodes;
    if (t == c) {
      double val = fe.eval(W);
      if (inc.improves(val)) {
        inc.best = val;
        inc.has = true;
        best_choice = choice;
        best_W = W;
      }
      return;
    }
    // bound: every remaining contested point credited to all its coverers
    std::copy(W.begin(), W.end(), wub.begin());
    for (int t2 = t; t2 < c; ++t2)
      for (int k : cov[contested[t2]]) wub[k] += inst.weights[contested[t2]];
    if (inc.prune(fe.eval(wub), 0.0)) return;
    const int i = contested[t];
    for (int k : cov[i]) {
      const double saved = W[k];  // restore, don't subtract: keeps slots exact
      W[k] = saved + inst.weights[i];
      choice[t] = k;
      self(self, t + 1);
      W[k] = saved;
    }
    choice[t] = -1;
  };
  rec(rec, 0);

  for (int t = 0; t < c; ++t) res.assignment[contested[t]] = best_choice[t];
  res.W = best_W;
  res.objective = fair_owa(res.W, spec);
  return res;
}

}  // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::DegenerateMinusInfinity: return "DegenerateMinusInfinity";
  }
  throw std::logic_error("status_name");
}

AllocationResult allocate(const std::vector<Point>& open_facilities, const Instance& inst,
                          const FairnessSpec& spec, double R) {
  inst.validate();
  spec.validate();
  if (static_cast<int>(open_facilities.size()) != spec.weights.p())
    throw std::invalid_argument("allocate: facility count must equal the weight length p");
  if (!(R > 0)) throw std::invalid_argument("allocate: R must be positive");
  for (const auto& s : open_facilities)
    if (s.dim() != inst.dim()) throw std::invalid_argument("allocate: facility dimension mismatch");
  FairEval fe(spec);
  return allocate_impl(open_facilities, inst, spec, R, fe, nullptr);
}

namespace {

struct DiscreteSearch {
  const Instance& inst;
  const FairnessSpec& spec;
  int p;
  double R;
  const SolveOptions& opts;
  FairEval fe;
  int m = 0;
  std::vector<std::vector<int>> covpts;       // candidate -> covered point indices
  std::vector<double> fullcov;                // candidate -> total coverable weight
  std::vector<std::vector<double>> suffix_top;  // top-p fullcov values in [idx, m)
  Incumbent inc;
  std::vector<int> chosen, best_chosen;
  std::vector<double> best_W;
  std::vector<int> best_assignment;
  double pending_ub = kNegInf;
  bool timed_out = false;
  double deadline = 0;
  long long nodes = 0;

  DiscreteSearch(const Instance& inst_, const FairnessSpec& spec_, int p_, double R_,
                 const SolveOptions& opts_)
      : inst(inst_), spec(spec_), p(p_), R(R_), opts(opts_), fe(spec_) {
    m = static_cast<int>(inst.candidates.size());
    covpts.resize(m);
    fullcov.assign(m, 0.0);
    for (int j = 0; j < m; ++j)
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (within_radius(inst.points[i], inst.candidates[j], R, inst.norm)) {
          covpts[j].push_back(static_cast<int>(i));
          fullcov[j] += inst.weights[i];
        }
    suffix_top.assign(m + 1, {});
    for (int idx = m; idx-- > 0;) {
      suffix_top[idx] = suffix_top[idx + 1];
      suffix_top[idx].insert(
          std::upper_bound(suffix_top[idx].begin(), suffix_top[idx].end(), fullcov[idx],
                           std::greater<double>()),
          fullcov[idx]);
      if (static_cast<int>(suffix_top[idx].size()) > p) suffix_top[idx].resize(p);
    }
  }

  std::vector<Point> sites_of(const std::vector<int>& sel) const {
    std::vector<Point> s;
    s.reserve(sel.size());
    for (int j : sel) s.push_back(inst.candidates[j]);
    return s;
  }

  double bound(int idx) const {
    std::vector<double> wub;
    wub.reserve(p);
    for (int j : chosen) wub.push_back(fullcov[j]);
    const int need = p - static_cast<int>(chosen.size());
    for (int t = 0; t < need; ++t) wub.push_back(suffix_top[idx][t]);
    return fe.eval(wub);
  }

  void warm_start() {
    // classical greedy: maximize marginal covered weight, then allocate
    std::vector<int> sel;
    std::vector<char> covered(inst.size(), 0), used(m, 0);
    for (int round = 0; round < p; ++round) {
      int pick = -1;
      double best_marg = -1;
      for (int j = 0; j < m; ++j) {
        if (used[j]) continue;
        double marg = 0;
        for (int i : covpts[j])
          if (!covered[i]) marg += inst.weights[i];
        if (marg > best_marg) { best_marg = marg; pick = j; }
      }
      used[pick] = 1;
      sel.push_back(pick);
      for (int i : covpts[pick]) covered[i] = 1;
    }
    std::sort(sel.begin(), sel.end());
    auto res = allocate_impl(sites_of(sel), inst, spec, R, fe, &nodes);
    inc.best = res.objective.is_neg_inf() ? kNegInf : res.objective.value();
    inc.has = false;  // value is a floor; the set itself is rediscovered in lex order
  }

  void dfs(int idx) {
    ++nodes;
    if (!timed_out && inc.has && (nodes & 1023) == 0 && now_seconds() > deadline)
      timed_out = true;
    const int s = static_cast<int>(chosen.size());
    if (s == p) {
      double ub = bound(idx);
      if (inc.prune(ub, opts.tol)) { pending_ub = std::max(pending_ub, ub); return; }
      auto res = allocate_impl(sites_of(chosen), inst, spec, R, fe, &nodes);
      double val = res.objective.is_neg_inf() ? kNegInf : res.objective.value();
      if (inc.improves(val)) {
        inc.best = val;
        inc.has = true;
        best_chosen = chosen;
        best_W = res.W;
        best_assignment = res.assignment;
      }
      return;
    }
    if (m - idx < p - s) return;  // not enough candidates left
    double ub = bound(idx);
    if (inc.prune(ub, opts.tol)) { pending_ub = std::max(pending_ub, ub); return; }
    if (timed_out) { pending_ub = std::max(pending_ub, ub); return; }
    chosen.push_back(idx);
    dfs(idx + 1);
    chosen.pop_back();
    dfs(idx + 1);
  }
};

}  // namespace

CoverageSolution solve_discrete(const Instance& inst, const FairnessSpec& spec, int p, double R,
                                const SolveOptions& opts) {
  check_common(inst, spec, p, R);
  if (inst.candidates.empty()) throw std::invalid_argument("solve_discrete: no candidate set");
  if (p > static_cast<int>(inst.candidates.size()))
    throw std::invalid_argument("solve_discrete: p exceeds candidate count");
  const double t0 = now_seconds();
  DiscreteSearch search(inst, spec, p, R, opts);
  search.deadline = t0 + opts.time_limit;
  search.warm_start();
  search.dfs(0);
  if (!search.inc.has) throw std::logic_error("solve_discrete: search ended without a leaf");
  CoverageSolution sol;
  sol.chosen = search.best_chosen;
  sol.sites = search.sites_of(search.best_chosen);
  sol.W = search.best_W;
  sol.assignment = search.best_assignment;
  sol.objective = fair_owa(sol.W, spec);
  canonicalize_slots(sol);
  finalize_status(sol, search.timed_out, search.pending_ub, search.inc.best);
  sol.nodes = search.nodes;
  sol.seconds = now_seconds() - t0;
  sol.instance_hash = instance_hash(inst);
  return sol;
}

CoverageSolution solve_continuous_fds(const Instance& inst, const FairnessSpec& spec, int p,
                                      double R, const SolveOptions& opts) {
  check_common(inst, spec, p, R);
  if (inst.dim() != 2 || inst.norm.kind != NormSpec::Kind::Euclidean)
    throw std::invalid_argument("solve_continuous_fds: planar Euclidean instances only");
  auto cands = candidate_locations(inst, R);
  // candidates with identical coverage sets are interchangeable; keep the first
  std::map<std::vector<int>, int> seen;
  std::vector<Point> kept;
  for (const auto& c : cands) {
    std::vector<int> covset;
    for (std::size_t i = 0; i < inst.size(); ++i)
      if (within_radius(inst.points[i], c, R, inst.norm))
        covset.push_back(static_cast<int>(i));
    if (seen.emplace(std::move(covset), static_cast<int>(kept.size())).second) kept.push_back(c);
  }
  while (static_cast<int>(kept.size()) < p) kept.push_back(kept.front());  // idle-slot padding
  Instance work = inst;
  work.candidates = kept;
  CoverageSolution sol = solve_discrete(work, spec, p, R, opts);
  // move each facility to the 1-center of its assigned cluster
  for (int k = 0; k < p; ++k) {
    std::vector<Point> cluster;
    for (std::size_t i = 0; i < inst.size(); ++i)
      if (sol.assignment[i] == k) cluster.push_back(inst.points[i]);
    sol.sites[k] = cluster.empty() ? inst.points.front() : one_center(cluster, inst.norm).center;
  }
  sol.instance_hash = instance_hash(inst);
  return sol;
}

namespace {

struct MasterResult {
  bool has = false;
  double best = kNegInf;
  std::vector<int> assignment;
  std::vector<double> W;
  bool timed_out = false;
  double pending_ub = kNegInf;
};

/* Geometry-free master: assign each point to one of p anonymous slots or to
 * none, subject to the cut pool; maximize fair_owa of the slot loads.
 * First-use slot ordering removes the p! slot symmetry. */
MasterResult solve_master(const Instance& inst, const FairnessSpec& spec, int p,
                          const std::vector<std::vector<int>>& cuts, const FairEval& fe,
                          double deadline, long long& nodes) {
  const int n = static_cast<int>(inst.size());
  std::vector<int> ord(n);
  for (int i = 0; i < n; ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](int x, int y) {
    if (inst.weights[x] != inst.weights[y]) return inst.weights[x] > inst.weights[y];
    return x < y;
  });
  std::vector<double> rem(n + 1, 0.0);
  for (int t = n; t-- > 0;) rem[t] = rem[t + 1] + inst.weights[ord[t]];
  std::vector<std::vector<int>> cuts_of(n);
  for (std::size_t c = 0; c < cuts.size(); ++c)
    for (int i : cuts[c]) cuts_of[i].push_back(static_cast<int>(c));
  std::vector<std::vector<int>> cnt(cuts.size(), std::vector<int>(p, 0));

  MasterResult out;
  Incumbent inc;
  std::vector<int> assign(n, -1);
  std::vector<double> W(p, 0.0), wub(p);
  bool timed_out = false;

  auto rec = [&](auto&& self, int t, int used) -> void {
    ++nodes;
    if (!timed_out && inc.has && (nodes & 1023) == 0 && now_seconds() > deadline)
      timed_out = true;
    if (t == n) {
      double val = fe.eval(W);
      if (inc.improves(val)) {
        inc.best = val;
        inc.has = true;
        out.assignment = assign;
        out.W = W;
      }
      return;
    }
    for (int k = 0; k < p; ++k) wub[k] = W[k] + rem[t];
    double ub = fe.eval(wub);
    if (inc.prune(ub, 0.0)) { out.pending_ub = std::max(out.pending_ub, ub); return; }
    if (timed_out) { out.pending_ub = std::max(out.pending_ub, ub); return; }
    const int i = ord[t];
    const int maxslot = std::min(used, p - 1);
    for (int k = 0; k <= maxslot; ++k) {
      bool blocked = false;
      for (int c : cuts_of[i])
        if (cnt[c][k] + 1 == static_cast<int>(cuts[c].size())) { blocked = true; break; }
      if (blocked) continue;
      assign[i] = k;
      const double saved = W[k];  // restore, don't subtract: keeps slots exact
      W[k] = saved + inst.weights[i];
      for (int c : cuts_of[i]) ++cnt[c][k];
      self(self, t + 1, std::max(used, k + 1));
      for (int c : cuts_of[i]) --cnt[c][k];
      W[k] = saved;
      assign[i] = -1;
    }
    self(self, t + 1, used);  // leave unassigned
  };
  rec(rec, 0, 0);
  out.has = inc.has;
  out.best = inc.best;
  out.timed_out = timed_out;
  return out;
}

}  // namespace

CoverageSolution solve_row_generation(const Instance& inst, const FairnessSpec& spec, int p,
                                      double R, const SolveOptions& opts) {
  check_common(inst, spec, p, R);
  if (inst.dim() != 2 || inst.norm.kind != NormSpec::Kind::Euclidean)
    throw std::invalid_argument("solve_row_generation: planar Euclidean instances only");
  if (inst.size() == 0) throw std::invalid_argument("solve_row_generation: empty instance");
  const double t0 = now_seconds();
  const double deadline = t0 + opts.time_limit;
  const int n = static_cast<int>(inst.size());
  FairEval fe(spec);
  long long nodes = 0;

  CoverageSolution sol;
  sol.instance_hash = instance_hash(inst);
  std::vector<std::vector<int>> cuts = incompatible_sets(inst, R, 3, false);
  MasterResult master;
  bool out_of_time = false;
  int round = 0;
  while (true) {
    master = solve_master(inst, spec, p, cuts, fe, deadline, nodes);
    if (master.timed_out || !master.has) { out_of_time = true; break; }
    bool added = false;
    for (int k = 0; k < p; ++k) {
      std::vector<int> q;
      for (int i = 0; i < n; ++i)
        if (master.assignment[i] == k) q.push_back(i);
      if (q.empty() || cluster_feasible(q, inst, R)) continue;
      SeparationEvent ev;
      ev.round = round;
      ev.slot = k;
      ev.members = q;
      ev.incumbent_assignment = master.assignment;
      sol.separation_log.push_back(std::move(ev));
      cuts.push_back(std::move(q));
      added = true;
    }
    if (!added) break;
    ++round;
  }

  if (out_of_time) {
    // all-unassigned is always geometrically feasible; report it with the
    // master bound as the upper end of the gap
    sol.assignment.assign(n, -1);
    sol.W.assign(p, 0.0);
    sol.sites.assign(p, inst.points.front());
    sol.objective = fair_owa(sol.W, spec);
    double lb = sol.objective.is_neg_inf() ? kNegInf : sol.objective.value();
    double ub = std::max({master.pending_ub, master.has ? master.best : kNegInf, lb});
    sol.gap = rel_gap(ub, lb);
    sol.status = sol.gap > 0 ? SolveStatus::Feasible
                             : (sol.objective.is_neg_inf() ? SolveStatus::DegenerateMinusInfinity
                                                           : SolveStatus::Optimal);
    if (sol.status == SolveStatus::DegenerateMinusInfinity) sol.witness = zero_slot_witness(sol.W);
  } else {
    sol.assignment = master.assignment;
    sol.W = master.W;
    sol.sites.resize(p);
    for (int k = 0; k < p; ++k) {
      std::vector<Point> cluster;
      for (int i = 0; i < n; ++i)
        if (sol.assignment[i] == k) cluster.push_back(inst.points[i]);
      sol.sites[k] = cluster.empty() ? inst.points.front() : one_center(cluster, inst.norm).center;
    }
    sol.objective = fair_owa(sol.W, spec);
    canonicalize_slots(sol);
    finalize_status(sol, false, kNegInf, master.best);
  }
  sol.nodes = nodes;
  sol.seconds = now_seconds() - t0;
  return sol;
}

CoverageSolution brute_force(const Instance& inst, const FairnessSpec& spec, int p, double R,
                             SolveSpace space, const SolveOptions& opts) {
  check_common(inst, spec, p, R);
  std::vector<Point> cands;
  if (space == SolveSpace::Discrete) {
    if (inst.candidates.empty()) throw std::invalid_argument("brute_force: no candidate set");
    cands = inst.candidates;
  } else {
    if (inst.dim() != 2 || inst.norm.kind != NormSpec::Kind::Euclidean)
      throw std::invalid_argument("brute_force: continuous space needs planar Euclidean input");
    cands = candidate_locations(inst, R);
    while (static_cast<int>(cands.size()) < p) cands.push_back(cands.front());
  }
  const int m = static_cast<int>(cands.size());
  const int n = static_cast<int>(inst.size());
  if (p > m) throw std::invalid_argument("brute_force: p exceeds candidate count");
  const double t0 = now_seconds();
  FairEval fe(spec);

  long long states = 0;
  bool has_best = false;
  double best = kNegInf;
  std::vector<int> best_subset;
  std::vector<int> best_assignment;
  std::vector<double> best_W;

  std::vector<int> combo(p);
  for (int i = 0; i < p; ++i) combo[i] = i;
  std::vector<Point> sites(p);
  while (true) {
    for (int k = 0; k < p; ++k) sites[k] = cands[combo[k]];
    auto cov = coverer_lists(sites, inst, R);
    std::vector<int> free_pts;  // points with at least one coverer
    for (int i = 0; i < n; ++i)
      if (!cov[i].empty()) free_pts.push_back(i);
    std::vector<int> pick(free_pts.size(), 0);
    std::vector<double> W(p);
    while (true) {
      if (++states > opts.brute_cap) throw std::runtime_error("brute_force: state cap exceeded");
      std::fill(W.begin(), W.end(), 0.0);
      for (std::size_t t = 0; t < free_pts.size(); ++t)
        W[cov[free_pts[t]][pick[t]]] += inst.weights[free_pts[t]];
      double val = fe.eval(W);
      if (!has_best || val > best) {
        has_best = true;
        best = val;
        best_subset = combo;
        best_W = W;
        best_assignment.assign(n, -1);
        for (std::size_t t = 0; t < free_pts.size(); ++t)
          best_assignment[free_pts[t]] = cov[free_pts[t]][pick[t]];
      }
      // odometer over the allocation choices
      std::size_t t = 0;
      for (; t < free_pts.size(); ++t) {
        if (pick[t] + 1 < static_cast<int>(cov[free_pts[t]].size())) { ++pick[t]; break; }
        pick[t] = 0;
      }
      if (t == free_pts.size()) break;
    }
    int pos = p - 1;
    while (pos >= 0 && combo[pos] == m - p + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int i = pos + 1; i < p; ++i) combo[i] = combo[i - 1] + 1;
  }

  CoverageSolution sol;
  sol.chosen = best_subset;
  sol.sites.resize(p);
  for (int k = 0; k < p; ++k) sol.sites[k] = cands[best_subset[k]];
  sol.W = best_W;
  sol.assignment = best_assignment;
  sol.objective = fair_owa(sol.W, spec);
  canonicalize_slots(sol);
  finalize_status(sol, false, kNegInf, best);
  sol.nodes = states;
  sol.seconds = now_seconds() - t0;
  sol.instance_hash = instance_hash(inst);
  return sol;
}

}  // namespace fmclp
