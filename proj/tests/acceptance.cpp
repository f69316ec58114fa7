// Release gate: nine end-to-end checks, one PASS/FAIL line each, nonzero exit
// on any failure. Tolerances are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fmclp/experiments.hpp"
#include "fmclp/geometry.hpp"
#include "fmclp/instance_io.hpp"
#include "fmclp/metrics.hpp"
#include "fmclp/model_ir.hpp"
#include "fmclp/solver.hpp"

using namespace fmclp;

namespace {

constexpr double kObjTol = 1e-9;        // objective agreement, criteria 1/2/9
constexpr double kCoverSlack = 1e-9;    // relative radius slack granted to recovered centers
constexpr double kUlpGuard = 1e-12;     // reading noise on top of kCoverSlack, never semantic
constexpr double kOrnessTol = 1e-9;     // double-precision orness vs closed form, criterion 3
constexpr double kPofTol = 1e-6;        // frozen price arithmetic, criterion 5
constexpr double kBoundaryBand = 1e-6;  // relative band around z = w^(1-alpha) where the
                                        // feasible/infeasible question is FP-ill-posed
constexpr double kMonoTol = 1e-12;      // FP guard on PoE monotonicity comparisons

constexpr double kBudget1 = 300.0;  // seconds, criterion 1
constexpr double kBudget2 = 600.0;  // seconds, criterion 2

struct Outcome {
  bool ok = false;
  std::string detail;
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

FairnessSpec spec_of(OwaFamily f, int p, const Rational& alpha) {
  FairnessSpec s;
  s.weights = owa_family(f, p);
  s.alpha = alpha;
  return s;
}

bool ext_close(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_neg_inf() || b.is_neg_inf()) return a.is_neg_inf() && b.is_neg_inf();
  return std::fabs(a.value() - b.value()) <= tol;
}

std::string ext_str(const ExtReal& v) {
  if (v.is_neg_inf()) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v.value();
  return os.str();
}

// Demand points and candidate sites drawn from one stream: the first n
// generated points are demand, the remaining m are sites.
Instance split_instance(int n, int m, std::uint64_t seed) {
  const Instance g = gen_instance(n + m, 2, seed);
  Instance inst;
  inst.points.assign(g.points.begin(), g.points.begin() + n);
  inst.weights.assign(g.weights.begin(), g.weights.begin() + n);
  inst.candidates.assign(g.points.begin() + n, g.points.end());
  inst.norm = NormSpec::euclidean();
  inst.normalized = true;
  inst.seed = seed;
  inst.name = "acc-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
              std::to_string(seed);
  return inst;
}

double mean_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Rational> alphas = {Rational(0), Rational(1, 2), Rational(1), Rational(2)};
  const OwaFamily fams[] = {OwaFamily::W, OwaFamily::C, OwaFamily::K,
                            OwaFamily::D, OwaFamily::G, OwaFamily::H};
  const double radii[] = {0.1, 0.2, 0.3, 0.4, 0.5};
  long long pairs = 0;
  for (int s = 0; s < 200; ++s) {
    const int n = 4 + s % 7;  // <= 10
    const int m = 3 + s % 6;  // <= 8
    const int p = 1 + s % 3;  // <= 3
    const double R = radii[s % 5];
    const Instance inst = split_instance(n, m, 9000 + static_cast<std::uint64_t>(s));
    for (OwaFamily f : fams) {
      for (const Rational& a : alphas) {
        const FairnessSpec spec = spec_of(f, p, a);
        const CoverageSolution bb = solve_discrete(inst, spec, p, R);
        const CoverageSolution ex = brute_force(inst, spec, p, R, SolveSpace::Discrete);
        if (!ext_close(bb.objective, ex.objective, kObjTol)) {
          std::ostringstream os;
          os << "objective mismatch on " << inst.name << " family " << family_name(f)
             << " alpha " << a.str() << " p " << p << " R " << R << ": solver "
             << ext_str(bb.objective) << " vs oracle " << ext_str(ex.objective);
          return {false, os.str()};
        }
        ++pairs;
      }
    }
  }
  const double secs = elapsed_since(t0);
  std::ostringstream os;
  os << pairs << " solver/oracle pairs on 200 instances agreed to 1e-9, " << secs << "s";
  if (secs >= kBudget1) {
    os << " >= " << kBudget1 << "s budget";
    return {false, os.str()};
  }
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 2

bool centers_cover(const CoverageSolution& sol, const Instance& inst, double R,
                   std::string& why) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const int k = sol.assignment[i];
    if (k < 0) continue;
    const double d = distance(inst.points[i], sol.sites[k], inst.norm);
    if (d > R * (1.0 + kCoverSlack) * (1.0 + kUlpGuard) + kUlpGuard) {
      std::ostringstream os;
      os << "point " << i << " at distance " << d << " from its slot-" << k
         << " center, limit " << R * (1.0 + kCoverSlack);
      why = os.str();
      return false;
    }
  }
  return true;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Rational> alphas = {Rational(0), Rational(1, 2), Rational(1), Rational(2)};
  const OwaFamily fams[] = {OwaFamily::W, OwaFamily::C, OwaFamily::K, OwaFamily::G};
  const double radii[] = {0.18, 0.24, 0.30, 0.36};
  long long checked = 0;
  for (int s = 0; s < 100; ++s) {
    const int n = 4 + s % 7;  // <= 10
    const int p = 1 + s % 3;  // <= 3
    const double R = radii[s % 4];
    const FairnessSpec spec = spec_of(fams[s % 4], p, alphas[(s / 4) % 4]);
    const Instance inst = gen_instance(n, 2, 7000 + static_cast<std::uint64_t>(s));
    const CoverageSolution fds = solve_continuous_fds(inst, spec, p, R);
    const CoverageSolution rg = solve_row_generation(inst, spec, p, R);
    if (!ext_close(fds.objective, rg.objective, kObjTol)) {
      std::ostringstream os;
      os << "objective mismatch on " << inst.name << " p " << p << " R " << R
         << ": candidate-set " << ext_str(fds.objective) << " vs row-generation "
         << ext_str(rg.objective);
      return {false, os.str()};
    }
    std::string why;
    if (!centers_cover(fds, inst, R, why))
      return {false, "candidate-set solve on " + inst.name + ": " + why};
    if (!centers_cover(rg, inst, R, why))
      return {false, "row-generation solve on " + inst.name + ": " + why};
    ++checked;
  }
  const double secs = elapsed_since(t0);
  std::ostringstream os;
  os << checked << " instance pairs agreed to 1e-9 with covering centers, " << secs << "s";
  if (secs >= kBudget2) {
    os << " >= " << kBudget2 << "s budget";
    return {false, os.str()};
  }
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion3() {
  const OwaFamily all[] = {OwaFamily::W, OwaFamily::C, OwaFamily::K,
                           OwaFamily::D, OwaFamily::G, OwaFamily::H};
  int sums = 0, forms = 0;
  for (int p = 2; p <= 10; ++p) {
    for (OwaFamily f : all) {
      const auto exact = owa_family_exact(f, p);
      Rational sum(0);
      for (const Rational& l : exact) sum = sum + l;
      if (!(sum == Rational(1))) {
        std::ostringstream os;
        os << family_name(f) << " p " << p << ": exact weights sum to " << sum.str();
        return {false, os.str()};
      }
      ++sums;
    }
    const int k = (p + 1) / 2;
    const std::pair<OwaFamily, Rational> closed[] = {
        {OwaFamily::W, Rational(1, 2)},
        {OwaFamily::C, Rational(1)},
        {OwaFamily::K, Rational(1) - Rational(k - 1, 2 * (p - 1))},
        {OwaFamily::G, Rational(4 * p + 1, 6 * p)},
        {OwaFamily::H, Rational(3, 4)},
    };
    for (const auto& [f, want] : closed) {
      const Rational direct = orness_exact(owa_family_exact(f, p));
      if (!(direct == want)) {
        // closed form and direct computation disagree: report both
        std::ostringstream os;
        os << family_name(f) << " p " << p << ": direct orness " << direct.str()
           << " but closed form says " << want.str();
        return {false, os.str()};
      }
      const double fp = orness(owa_family(f, p));
      if (std::fabs(fp - want.to_double()) > kOrnessTol) {
        std::ostringstream os;
        os << family_name(f) << " p " << p << ": double orness " << fp
           << " vs closed form " << want.to_double();
        return {false, os.str()};
      }
      ++forms;
    }
  }
  std::ostringstream os;
  os << sums << " exact weight sums and " << forms
     << " orness closed forms verified for p in [2,10]";
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
  const Instance master = gen_instance(8, 2, 424);
  ExperimentGrid grid;
  grid.n_values = {6, 8};
  grid.p_values = {2, 3};
  grid.R_values = {0.2, 0.35};
  grid.spaces = {SolveSpace::Discrete, SolveSpace::ContinuousFDS};
  grid.families = {OwaFamily::W, OwaFamily::C, OwaFamily::G};
  grid.alphas = {Rational(0), Rational(1, 2), Rational(2)};
  grid.seed = 4;
  const auto rows = run_grid(grid, master, "");
  if (rows.size() != static_cast<std::size_t>(grid.total_cells()))
    return {false, "grid produced " + std::to_string(rows.size()) + " rows, expected " +
                       std::to_string(grid.total_cells())};
  long long identity_rows = 0;
  for (const ResultRow& r : rows) {
    std::ostringstream at;
    at << r.instance << " p " << r.p << " R " << r.R << " " << r.space << " " << r.family
       << "/" << r.alpha;
    if (!r.error.empty() || r.status == "Error")
      return {false, "row " + at.str() + " errored: " + r.error};
    if (!r.pof || !r.poe || !r.gini)
      return {false, "row " + at.str() + " is missing a metric"};
    for (double v : {*r.pof, *r.poe, *r.gini})
      if (!(v >= 0.0 && v <= 1.0))
        return {false, "row " + at.str() + " has a metric outside [0,1]"};
    if (r.family == "W" && r.alpha == "0") {
      if (*r.pof != 0.0)
        return {false, "row " + at.str() + " restates the sum baseline but has PoF " +
                           std::to_string(*r.pof)};
      ++identity_rows;
    }
    if (r.family == "C") {
      if (*r.poe != 0.0)
        return {false, "row " + at.str() + " restates the maximin baseline but has PoE " +
                           std::to_string(*r.poe)};
      ++identity_rows;
    }
  }
  std::ostringstream os;
  os << rows.size() << " sweep rows in range, " << identity_rows
     << " baseline identities exact";
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
  const double g1 = gini_index({1723, 2365, 2804});
  const double w1 = 2162.0 / 41352.0;
  if (g1 != w1) {
    std::ostringstream os;
    os.precision(17);
    os << "gini(1723,2365,2804) = " << g1 << ", want 2162/41352 = " << w1;
    return {false, os.str()};
  }
  const double g2 = gini_index({2126, 2162, 2278});
  const double w2 = 304.0 / 39396.0;
  if (g2 != w2) {
    std::ostringstream os;
    os.precision(17);
    os << "gini(2126,2162,2278) = " << g2 << ", want 304/39396 = " << w2;
    return {false, os.str()};
  }
  const auto pof = price_of_fairness(65.7, 62.58);
  if (!pof) return {false, "price_of_fairness(65.7, 62.58) returned no value"};
  const double want = (65.7 - 62.58) / 65.7;
  if (std::fabs(*pof - want) > kPofTol || std::fabs(*pof - 0.047488584474885844) > kPofTol) {
    std::ostringstream os;
    os.precision(17);
    os << "price_of_fairness(65.7, 62.58) = " << *pof << ", want " << want;
    return {false, os.str()};
  }
  return {true, "both frozen Gini fractions exact, frozen PoF within 1e-6"};
}

// ---------------------------------------------------------------- criterion 6

struct PowerProbe {
  model::ModelIR m;
  int wv, zv;
  explicit PowerProbe(const Rational& alpha) {
    wv = m.add_var("W", model::VarKind::Continuous, 0.0, 1e6);
    zv = m.add_var("Z", model::VarKind::Continuous, 0.0, 1e6);
    model::decompose_power(m, zv, wv, alpha);
  }
  bool feasible(double w, double z) const {
    return model::completion_feasible(m, {{wv, w}, {zv, z}});
  }
};

Outcome criterion6() {
  const std::vector<Rational> grid = {Rational(1, 3), Rational(1, 2), Rational(2, 3),
                                      Rational(2), Rational(3)};
  long long samples = 0;
  for (std::size_t ai = 0; ai < grid.size(); ++ai) {
    const Rational& alpha = grid[ai];
    const bool hypo = alpha < Rational(1);  // encodes z <= w^(1-alpha); else z >= w^(1-alpha)
    const double ae = 1.0 - alpha.to_double();
    const PowerProbe probe(alpha);
    auto scalar_ok = [&](double w, double z) {
      const double b = std::pow(w, ae);  // +inf at w = 0 for alpha > 1
      return hypo ? z <= b : z >= b;
    };
    auto check = [&](double w, double z) -> bool {
      const bool cone = probe.feasible(w, z);
      const bool truth = scalar_ok(w, z);
      if (cone == truth) {
        ++samples;
        return true;
      }
      return false;
    };
    auto report = [&](double w, double z) {
      std::ostringstream os;
      os.precision(17);
      os << "alpha " << alpha.str() << ", (W,Z) = (" << w << ", " << z
         << "): cones say " << (probe.feasible(w, z) ? "feasible" : "infeasible")
         << ", the scalar inequality says the opposite";
      return Outcome{false, os.str()};
    };

    std::mt19937_64 rng(600 + ai);
    std::uniform_real_distribution<double> uw(0.0, 3.0), uf(0.0, 2.5);
    int done = 0;
    while (done < 1000) {
      double w = uw(rng);
      if (done % 97 == 0) w = 0.0;  // exercise the zero-coverage edge
      const double b = std::pow(w, ae);
      double z;
      if (std::isfinite(b)) {
        z = uf(rng) * std::max(b, 0.25);
        // skip the band where the answer is a coin flip at double precision
        if (std::fabs(z - b) <= kBoundaryBand * std::max({1.0, std::fabs(b), std::fabs(z)}))
          continue;
      } else {
        z = uf(rng) * 400.0;
      }
      if (z > 1e6) continue;
      if (!check(w, z)) return report(w, z);
      ++done;
    }

    // deterministic probes just off the boundary, both sides
    for (double w : {0.25, 1.0, 2.25}) {
      const double b = std::pow(w, ae);
      const double in_side = hypo ? b * 0.999 : b * 1.001;
      const double out_side = hypo ? b * 1.001 : b * 0.999;
      if (!probe.feasible(w, in_side)) return report(w, in_side);
      if (probe.feasible(w, out_side)) return report(w, out_side);
      samples += 2;
    }
    if (hypo) {
      if (!probe.feasible(0.0, 0.0)) return report(0.0, 0.0);
      if (probe.feasible(0.0, 0.5)) return report(0.0, 0.5);
    } else {
      if (probe.feasible(0.0, 5.0)) return report(0.0, 5.0);
      if (!probe.feasible(1.0, 1.0)) return report(1.0, 1.0);
    }
    samples += 2;
  }
  std::ostringstream os;
  os << samples << " (W,Z) classifications across 5 exponents, zero counterexamples";
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7() {
  const double radii[] = {0.15, 0.22, 0.30, 0.38, 0.45};
  long long pool_triples = 0, cuts = 0;
  for (int s = 0; s < 50; ++s) {
    const int n = 5 + s % 6;  // <= 10
    const double R = radii[s % 5];
    const Instance inst = gen_instance(n, 2, 8100 + static_cast<std::uint64_t>(s));

    // exhaustive enumeration with one_center; the threshold mirrors the
    // library's coverage predicate so this targets the subset enumeration,
    // not rounding at the radius boundary
    const double thresh = R * (1.0 + kRadiusTol) * (1.0 + kFpGuard);
    std::set<std::vector<int>> want;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          const std::vector<Point> tri = {inst.points[i], inst.points[j], inst.points[k]};
          if (one_center(tri, inst.norm).radius > thresh) want.insert({i, j, k});
        }
    const auto pool = incompatible_sets(inst, R);
    const std::set<std::vector<int>> got(pool.begin(), pool.end());
    if (got != want) {
      long long spurious = 0, missing = 0;
      for (const auto& t : got)
        if (!want.count(t)) ++spurious;
      for (const auto& t : want)
        if (!got.count(t)) ++missing;
      std::ostringstream os;
      os << inst.name << " R " << R << ": warm-start pool has " << spurious
         << " feasible triples and misses " << missing << " infeasible ones";
      return {false, os.str()};
    }
    pool_triples += static_cast<long long>(want.size());

    // audit every separation event of a row-generation run
    const int p = 1 + s % 2;
    const OwaFamily fam = (s % 2) ? OwaFamily::C : OwaFamily::W;
    const CoverageSolution sol = solve_row_generation(inst, spec_of(fam, p, Rational(0)), p, R);
    for (const SeparationEvent& ev : sol.separation_log) {
      for (int i : ev.members)
        if (ev.incumbent_assignment[i] != ev.slot) {
          std::ostringstream os;
          os << inst.name << " round " << ev.round << ": cut member " << i
             << " was not on slot " << ev.slot << ", so the incumbent never violated the cut";
          return {false, os.str()};
        }
      if (cluster_feasible(ev.members, inst, R)) {
        std::ostringstream os;
        os << inst.name << " round " << ev.round
           << ": separated cluster fits one facility, the cut is wrong";
        return {false, os.str()};
      }
      ++cuts;
    }
  }
  if (cuts == 0)
    return {false, "no separation event fired across 50 instances; the audit never ran"};
  std::ostringstream os;
  os << pool_triples << " pool triples matched exhaustive enumeration, " << cuts
     << " separation cuts violated by their incumbents";
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8() {
  std::vector<double> gini_c, gini_w, pof_c, pof_w;
  int monotone = 0;
  const int total = 50;
  for (int s = 0; s < total; ++s) {
    const int n = 8 + s % 3;
    const int p = 3;
    const double R = 0.22 + 0.04 * (s % 3);
    const Instance inst = gen_instance(n, 2, 500 + static_cast<std::uint64_t>(s));
    const Baselines b = compute_baselines(inst, p, R, SolveSpace::Discrete);

    const MetricsReport rc = report(solve_discrete(inst, spec_of(OwaFamily::C, p, Rational(0)),
                                                   p, R), inst, b);
    const MetricsReport r0 = report(solve_discrete(inst, spec_of(OwaFamily::W, p, Rational(0)),
                                                   p, R), inst, b);
    const MetricsReport rh = report(solve_discrete(inst, spec_of(OwaFamily::W, p,
                                                                 Rational(1, 2)), p, R), inst, b);
    const MetricsReport r2 = report(solve_discrete(inst, spec_of(OwaFamily::W, p, Rational(2)),
                                                   p, R), inst, b);
    if (!rc.gini || !r0.gini || !rc.pof || !r0.pof || !r0.poe || !rh.poe || !r2.poe)
      return {false, inst.name + ": a trend metric is missing"};
    gini_c.push_back(*rc.gini);
    gini_w.push_back(*r0.gini);
    pof_c.push_back(*rc.pof);
    pof_w.push_back(*r0.pof);
    if (*r0.poe >= *rh.poe - kMonoTol && *rh.poe >= *r2.poe - kMonoTol) ++monotone;
  }
  const double mgc = mean_of(gini_c), mgw = mean_of(gini_w);
  const double mpc = mean_of(pof_c), mpw = mean_of(pof_w);
  std::ostringstream os;
  os.precision(4);
  os << "mean Gini " << mgc << " (maximin) vs " << mgw << " (sum), mean PoF " << mpc
     << " vs " << mpw << ", PoE monotone in " << monotone << "/" << total;
  if (!(mgc <= mgw)) return {false, "maximin weights did not reduce mean Gini: " + os.str()};
  if (!(mpc >= mpw)) return {false, "maximin weights did not cost coverage: " + os.str()};
  if (monotone * 5 < total * 4)
    return {false, "PoE fell with alpha in under 80% of instances: " + os.str()};
  return {true, os.str()};
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9() {
  const std::vector<Rational> alphas = {Rational(0), Rational(1, 2), Rational(1), Rational(2)};
  const OwaFamily fams[] = {OwaFamily::W, OwaFamily::C, OwaFamily::G};
  struct Setup {
    int n, m, p;
    double R;
    std::uint64_t seed;
  };
  const Setup setups[] = {{4, 3, 2, 0.30, 91}, {3, 2, 1, 0.35, 92}, {4, 3, 2, 0.25, 93}};
  long long round_trips = 0, brute_pairs = 0;
  for (const Setup& su : setups) {
    const Instance inst = split_instance(su.n, su.m, su.seed);
    const auto cuts = incompatible_sets(inst, su.R);
    for (OwaFamily f : fams) {
      for (const Rational& a : alphas) {
        const FairnessSpec spec = spec_of(f, su.p, a);
        const model::ModelIR models[] = {
            model::build_discrete(inst, spec, su.p, su.R),
            model::build_continuous(inst, spec, su.p, su.R),
            model::build_continuous_cut_model(inst, spec, su.p, su.R, cuts),
        };
        for (const model::ModelIR& m : models) {
          if (!(model::import_json(model::export_json(m)) == m)) {
            std::ostringstream os;
            os << "JSON round trip changed the " << family_name(f) << "/" << a.str()
               << " model of " << inst.name;
            return {false, os.str()};
          }
          ++round_trips;
        }
        if (a == Rational(0)) {
          const auto ir = model::ir_brute_force_binaries(models[0]);
          const CoverageSolution sd = solve_discrete(inst, spec, su.p, su.R);
          if (!ir.feasible || std::fabs(ir.objective - sd.objective.value()) > kObjTol) {
            std::ostringstream os;
            os.precision(17);
            os << family_name(f) << " model of " << inst.name << ": exhaustive binary optimum "
               << ir.objective << " vs solver " << ext_str(sd.objective);
            return {false, os.str()};
          }
          ++brute_pairs;
        }
      }
    }
  }
  std::ostringstream os;
  os << round_trips << " JSON round trips identical, " << brute_pairs
     << " in-model optima matched the solver to 1e-9";
  return {true, os.str()};
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* label;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {1, "discrete solver equals the exhaustive oracle", &criterion1},
      {2, "continuous methods agree and centers cover their clusters", &criterion2},
      {3, "weight families have exact sums and closed-form orness", &criterion3},
      {4, "baseline identities and metric ranges hold on a sweep", &criterion4},
      {5, "frozen metric arithmetic is reproduced", &criterion5},
      {6, "power-cone decomposition matches the scalar inequality", &criterion6},
      {7, "cut pool is exact and separation cuts are violated", &criterion7},
      {8, "fairness trends reproduce at desk scale", &criterion8},
      {9, "model export round trips and in-model optima agree", &criterion9},
  };
  int failures = 0;
  for (const Row& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = row.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s (%s; %.1fs)\n", o.ok ? "PASS" : "FAIL", row.id, row.label,
                o.detail.c_str(), elapsed_since(t0));
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
