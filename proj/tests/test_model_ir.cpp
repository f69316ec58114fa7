#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fmclp/model_ir.hpp"
#include "fmclp/solver.hpp"

using namespace fmclp;
using namespace fmclp::model;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instance tiny_instance() {
  Instance inst;
  inst.points = {point2(0.0, 0.0), point2(0.3, 0.0), point2(1.0, 0.0)};
  inst.weights = {3.0, 2.0, 1.0};
  inst.candidates = {point2(0.1, 0.0), point2(0.9, 0.0)};
  inst.name = "tiny";
  return inst;
}

FairnessSpec spec_of(OwaFamily f, int p, const Rational& alpha) {
  FairnessSpec s;
  s.weights = owa_family(f, p);
  s.alpha = alpha;
  return s;
}

int count_tag_prefix(const ModelIR& m, const std::string& prefix) {
  int c = 0;
  for (const auto& con : m.lincons)
    if (con.tag.rfind(prefix, 0) == 0) ++c;
  return c;
}

/* Mini model with just Z and W for power-decomposition checks. */
struct PowerProbe {
  ModelIR m;
  int W, Z;
  explicit PowerProbe(const Rational& alpha) {
    W = m.add_var("W", VarKind::Continuous, 0, 1e6);
    Z = m.add_var("Z", VarKind::Continuous, alpha > Rational(1) ? 0 : -1e6, 1e6);
    decompose_power(m, Z, W, alpha);
    m.validate();
  }
  bool feasible(double w, double z) const {
    return completion_feasible(m, {{W, w}, {Z, z}}, 1e-9);
  }
};

}  // namespace

TEST_CASE("discrete builder shape on the tiny instance") {
  Instance inst = tiny_instance();
  ModelIR m = build_discrete(inst, spec_of(OwaFamily::W, 2, Rational(0)), 2, 0.25);
  CHECK(m.vars.size() == 14);  // 6 x, 4 y, 2 W, 2 Z
  CHECK(m.conecons.empty());
  CHECK(m.lincons.size() == 18);
  CHECK(count_tag_prefix(m, "assign_once_") == 3);
  CHECK(count_tag_prefix(m, "cover_link_") == 6);
  CHECK(count_tag_prefix(m, "slot_filled_") == 2);
  CHECK(count_tag_prefix(m, "site_once_") == 2);
  CHECK(count_tag_prefix(m, "W_def_") == 2);
  CHECK(count_tag_prefix(m, "sorting_") == 1);
  CHECK(count_tag_prefix(m, "power_id_") == 2);
  CHECK(m.objective.maximize);
  CHECK(m.objective.kind == "linear");
  CHECK(m.objective.terms.size() == 2);
  CHECK(m.metadata.at("space") == "discrete");
  CHECK(m.metadata.at("p") == "2");
  CHECK(m.metadata.at("m") == "2");
  CHECK(m.metadata.at("instance_hash") == instance_hash(inst));
  CHECK(provenance_audit(m).empty());
}

TEST_CASE("discrete builder adds one rotated cone per slot when alpha = 1/2") {
  Instance inst = tiny_instance();
  ModelIR m = build_discrete(inst, spec_of(OwaFamily::W, 2, Rational(1, 2)), 2, 0.25);
  CHECK(m.conecons.size() == 2);
  for (const auto& c : m.conecons) CHECK(c.kind == ConeKind::RotatedSO);
  CHECK(m.var_index("one") >= 0);
  CHECK(m.var_index("half") >= 0);
  CHECK(count_tag_prefix(m, "power_id_") == 0);
}

TEST_CASE("continuous builder shape: one distance cone per point and slot") {
  Instance inst = tiny_instance();
  const int n = 3, p = 2, d = 2;
  ModelIR m = build_continuous(inst, spec_of(OwaFamily::G, p, Rational(0)), p, 0.3);
  int soc = 0;
  for (const auto& c : m.conecons)
    if (c.kind == ConeKind::SecondOrder) ++soc;
  CHECK(soc == n * p);
  // X p*d + x n*p + v n*p*d + s n*p + W p + Z p
  CHECK((int)m.vars.size() == p * d + n * p + n * p * d + n * p + 2 * p);
  CHECK(count_tag_prefix(m, "bigM_") == n * p);
  CHECK(count_tag_prefix(m, "absdiff_") == 2 * n * p * d);
  CHECK(m.metadata.at("space") == "continuous");
  CHECK(provenance_audit(m).empty());
}

TEST_CASE("log objective builds tangent rows instead of cones") {
  Instance inst = tiny_instance();
  ModelIR m = build_discrete(inst, spec_of(OwaFamily::W, 2, Rational(1)), 2, 0.25, 16);
  CHECK(m.conecons.empty());
  CHECK(count_tag_prefix(m, "log_cut_") == 2 * 16);
  CHECK(m.objective.kind == "log_pwl");
  CHECK(m.metadata.at("objective_note") == "log_pwl_overestimator");
  // each tangent overestimates log: at the abscissa it is exact, elsewhere above
  CHECK_THROWS_AS(export_lp(build_discrete(inst, spec_of(OwaFamily::W, 2, Rational(1, 2)), 2, 0.25)),
                  std::invalid_argument);
}

TEST_CASE("power decomposition encodes the scalar inequality, spot values") {
  SUBCASE("alpha = 0 pins Z to W") {
    PowerProbe pr(Rational(0));
    CHECK(pr.feasible(2.0, 2.0));
    CHECK_FALSE(pr.feasible(2.0, 1.9));
    CHECK_FALSE(pr.feasible(2.0, 2.1));
  }
  SUBCASE("alpha = 1/2: Z <= sqrt(W)") {
    PowerProbe pr(Rational(1, 2));
    CHECK(pr.feasible(4.0, 2.0));
    CHECK(pr.feasible(4.0, 1.5));
    CHECK_FALSE(pr.feasible(4.0, 2.01));
    CHECK(pr.feasible(0.0, 0.0));
    CHECK_FALSE(pr.feasible(0.0, 0.5));
  }
  SUBCASE("alpha = 1/3: Z <= W^(2/3)") {
    PowerProbe pr(Rational(1, 3));
    CHECK(pr.feasible(8.0, 4.0));
    CHECK_FALSE(pr.feasible(8.0, 4.01));
    CHECK(pr.feasible(1.0, 0.9));
  }
  SUBCASE("alpha = 2: Z >= 1/W") {
    PowerProbe pr(Rational(2));
    CHECK(pr.feasible(2.0, 0.5));
    CHECK(pr.feasible(2.0, 0.7));
    CHECK_FALSE(pr.feasible(2.0, 0.49));
    CHECK_FALSE(pr.feasible(0.0, 100.0));
  }
  SUBCASE("alpha = 3: Z >= 1/W^2") {
    PowerProbe pr(Rational(3));
    CHECK(pr.feasible(2.0, 0.25));
    CHECK_FALSE(pr.feasible(2.0, 0.24));
  }
  SUBCASE("alpha = 1 is rejected; log lives elsewhere") {
    ModelIR m;
    int W = m.add_var("W", VarKind::Continuous, 0, 10);
    int Z = m.add_var("Z", VarKind::Continuous, -10, 10);
    CHECK_THROWS_AS(decompose_power(m, Z, W, Rational(1)), std::invalid_argument);
  }
}

TEST_CASE("json round trip is exact for every build flavor") {
  Instance inst = tiny_instance();
  const std::vector<Rational> alphas{Rational(0),    Rational(1, 3), Rational(1, 2),
                                     Rational(2, 3), Rational(1),    Rational(2),
                                     Rational(3)};
  for (const auto& a : alphas) {
    for (OwaFamily f : {OwaFamily::W, OwaFamily::G}) {
      FairnessSpec s = spec_of(f, 2, a);
      CAPTURE(family_name(f));
      CAPTURE(a.str());
      ModelIR md = build_discrete(inst, s, 2, 0.25);
      CHECK(import_json(export_json(md)) == md);
      ModelIR mc = build_continuous(inst, s, 2, 0.3);
      CHECK(import_json(export_json(mc)) == mc);
      ModelIR mk = build_continuous_cut_model(inst, s, 2, 0.3, {{0, 1, 2}, {1, 2}});
      CHECK(import_json(export_json(mk)) == mk);
    }
  }
  CHECK_THROWS_AS(import_json("{\"format\":\"other\",\"version\":1}"), std::invalid_argument);
}

TEST_CASE("cut records expand to one row per cut and slot") {
  Instance inst = tiny_instance();
  ModelIR m = build_continuous_cut_model(inst, spec_of(OwaFamily::W, 2, Rational(0)), 2, 0.3,
                                         {{0, 1, 2}, {2, 1}});
  REQUIRE(m.cuts.size() == 2);
  CHECK(m.cuts[1].members == std::vector<int>{1, 2});  // members are sorted on entry
  auto rows = cut_rows(m);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rhs == 2.0);
  CHECK(rows[0].terms.size() == 3);
  CHECK(rows[0].tag == "cut_0_0");
  CHECK(rows[3].rhs == 1.0);
  CHECK(rows[3].terms.size() == 2);
  CHECK(rows[3].tag == "cut_1_1");
  for (const auto& r : rows) {
    CHECK(r.sense == Sense::LE);
    for (const auto& t : r.terms) CHECK(m.vars[t.var].name.rfind("x_", 0) == 0);
  }
  CHECK_THROWS_AS(build_continuous_cut_model(inst, spec_of(OwaFamily::W, 2, Rational(0)), 2, 0.3,
                                             {{0, 7}}),
                  std::invalid_argument);
}

TEST_CASE("lp writer golden text for a hand-built model") {
  ModelIR m;
  int b = m.add_var("pick_0", VarKind::Binary, 0, 1);
  int w = m.add_var("load", VarKind::Continuous, 0, 7.5);
  int f = m.add_var("slack", VarKind::Continuous, -kInf, kInf);
  m.lincons.push_back(LinCon{{{w, 1.0}, {b, -2.5}}, Sense::LE, 0.0, "link"});
  m.lincons.push_back(LinCon{{{w, 1.0}, {f, 1.0}}, Sense::EQ, 1.0, ""});
  m.lincons.push_back(LinCon{{{b, 1.0}}, Sense::GE, 0.0, "floor"});
  m.objective.maximize = true;
  m.objective.terms = {{w, 1.0}, {b, -0.5}};
  m.objective.constant = 0.25;
  m.validate();
  const std::string want =
      "Maximize\n"
      " obj: load - 0.5 pick_0 + 0.25\n"
      "Subject To\n"
      " link: load - 2.5 pick_0 <= 0\n"
      " c1: load + slack = 1\n"
      " floor: pick_0 >= 0\n"
      "Bounds\n"
      " 0 <= load <= 7.5\n"
      " slack free\n"
      "Binary\n"
      " pick_0\n"
      "End\n";
  CHECK(export_lp(m) == want);
  ModelIR back = parse_lp(want);
  CHECK(export_lp(back) == want);
  CHECK(back.objective.constant == 0.25);
  CHECK(back.objective.maximize);
  REQUIRE(back.lincons.size() == 3);
  CHECK(back.lincons[0].sense == Sense::LE);
  CHECK(back.lincons[1].sense == Sense::EQ);
  CHECK(back.lincons[2].sense == Sense::GE);
  int wb = back.var_index("load");
  REQUIRE(wb >= 0);
  CHECK(back.vars[wb].lo == 0.0);
  CHECK(back.vars[wb].hi == 7.5);
  int fb = back.var_index("slack");
  REQUIRE(fb >= 0);
  CHECK(back.vars[fb].lo == -kInf);
  CHECK(back.vars[fb].hi == kInf);
  int bb = back.var_index("pick_0");
  REQUIRE(bb >= 0);
  CHECK(back.vars[bb].kind == VarKind::Binary);
}

TEST_CASE("lp round trip reaches a fixpoint on builder output") {
  Instance inst = tiny_instance();
  for (OwaFamily f : {OwaFamily::W, OwaFamily::C}) {
    ModelIR m = build_discrete(inst, spec_of(f, 2, Rational(0)), 2, 0.25);
    std::string once = export_lp(parse_lp(export_lp(m)));
    std::string twice = export_lp(parse_lp(once));
    CHECK(once == twice);
  }
  ModelIR mk = build_continuous_cut_model(inst, spec_of(OwaFamily::W, 2, Rational(0)), 2, 0.3,
                                          {{0, 1}});
  std::string once = export_lp(parse_lp(export_lp(mk)));
  CHECK(once == export_lp(parse_lp(once)));
}

TEST_CASE("provenance audit flags hollow models") {
  ModelIR empty;
  auto missing = provenance_audit(empty);
  CHECK(missing.size() == 7);
  Instance inst = tiny_instance();
  ModelIR m = build_discrete(inst, spec_of(OwaFamily::W, 2, Rational(0)), 2, 0.25);
  m.metadata.erase("instance_hash");
  auto missing2 = provenance_audit(m);
  REQUIRE(missing2.size() == 1);
  CHECK(missing2[0] == "metadata:instance_hash");
}

TEST_CASE("completion_feasible sees violated assignment rows") {
  Instance inst = tiny_instance();
  ModelIR m = build_discrete(inst, spec_of(OwaFamily::W, 1, Rational(0)), 1, 0.25);
  std::map<int, double> good, bad;
  for (const auto& v : m.vars) {
    int idx = m.var_index(v.name);
    if (v.kind != VarKind::Binary) continue;
    good[idx] = 0.0;
    bad[idx] = 0.0;
  }
  good[m.var_index("y_0_0")] = 1.0;  // site at candidate 0, nobody assigned
  CHECK(completion_feasible(m, good));
  bad[m.var_index("y_0_0")] = 1.0;
  bad[m.var_index("x_2_0")] = 1.0;  // point 2 is out of range of candidate 0
  CHECK_FALSE(completion_feasible(m, bad));
}

TEST_CASE("exhaustive binary enumeration agrees with the discrete solver") {
  Instance inst = tiny_instance();
  for (OwaFamily f : {OwaFamily::W, OwaFamily::C, OwaFamily::G}) {
    for (double R : {0.12, 0.25, 0.45}) {
      FairnessSpec s = spec_of(f, 2, Rational(0));
      ModelIR m = build_discrete(inst, s, 2, R);
      IrBruteResult ir = ir_brute_force_binaries(m);
      REQUIRE(ir.feasible);
      CoverageSolution sol = solve_discrete(inst, s, 2, R);
      REQUIRE(sol.objective.finite());
      CAPTURE(family_name(f));
      CAPTURE(R);
      CHECK(ir.objective == doctest::Approx(sol.objective.value()).epsilon(1e-9));
    }
  }
  ModelIR with_cones = build_discrete(tiny_instance(), spec_of(OwaFamily::W, 2, Rational(1, 2)),
                                      2, 0.25);
  CHECK_THROWS_AS(ir_brute_force_binaries(with_cones), std::invalid_argument);
}
