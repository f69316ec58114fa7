#include "fmclp/model_ir.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "fmclp/geometry.hpp"
#include "json.hpp"

namespace fmclp::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num_str(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string idx2(const char* base, int i, int k) {
  return std::string(base) + "_" + std::to_string(i) + "_" + std::to_string(k);
}

}  // namespace

int ModelIR::add_var(std::string name, VarKind kind, double lo, double hi) {
  vars.push_back(Var{std::move(name), kind, lo, hi});
  return static_cast<int>(vars.size()) - 1;
}

int ModelIR::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

void ModelIR::validate() const {
  const int nv = static_cast<int>(vars.size());
  std::map<std::string, int> seen;
  for (int i = 0; i < nv; ++i) {
    if (vars[i].name.empty()) throw std::invalid_argument("model: unnamed variable");
    if (!seen.emplace(vars[i].name, i).second)
      throw std::invalid_argument("model: duplicate variable name " + vars[i].name);
    if (vars[i].lo > vars[i].hi) throw std::invalid_argument("model: empty bound interval");
  }
  auto check_ref = [&](int v) {
    if (v < 0 || v >= nv) throw std::invalid_argument("model: variable reference out of range");
  };
  for (const auto& c : lincons)
    for (const auto& t : c.terms) check_ref(t.var);
  for (const auto& c : conecons) {
    check_ref(c.t);
    if (c.kind == ConeKind::RotatedSO) check_ref(c.s);
    for (int v : c.u) check_ref(v);
  }
  for (const auto& t : objective.terms) check_ref(t.var);
}

namespace {

/* Coverage sets C(i) = candidate indices within R(1+tol) of demand i. */
std::vector<std::vector<int>> coverage_sets(const Instance& inst, double R) {
  std::vector<std::vector<int>> cov(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t j = 0; j < inst.candidates.size(); ++j)
      if (within_radius(inst.points[i], inst.candidates[j], R, inst.norm))
        cov[i].push_back(static_cast<int>(j));
  return cov;
}

int get_fixed_var(ModelIR& m, const char* name, double value) {
  int idx = m.var_index(name);
  if (idx >= 0) return idx;
  return m.add_var(name, VarKind::Continuous, value, value);
}

/* Auxiliary h with 2h = of, so RotatedSO t*s' pairs encode products exactly. */
int half_of(ModelIR& m, int of, const std::string& name) {
  if (m.vars[of].lo == m.vars[of].hi && m.vars[of].name == "one") return get_fixed_var(m, "half", 0.5);
  int h = m.add_var(name, VarKind::Continuous, 0, kInf);
  m.lincons.push_back(LinCon{{{h, 2.0}, {of, -1.0}}, Sense::EQ, 0.0, "half_link"});
  return h;
}

void add_pwl_log_rows(ModelIR& m, int zvar, int wvar, const Instance& inst, int breakpoints) {
  double wmin = kInf, total = 0;
  for (double w : inst.weights) {
    if (w > 0) wmin = std::min(wmin, w);
    total += w;
  }
  if (!(total > 0) || wmin == kInf)
    throw std::invalid_argument("log objective needs some positive demand weight");
  if (breakpoints < 1) throw std::invalid_argument("pwl: breakpoints must be >= 1");
  // Tangent overestimators of log at geometrically spaced abscissae:
  // z <= log(t) + (w - t)/t.
  for (int b = 0; b < breakpoints; ++b) {
    double frac = breakpoints == 1 ? 0.0 : double(b) / double(breakpoints - 1);
    double t = wmin * std::pow(total / wmin, frac);
    m.lincons.push_back(LinCon{{{zvar, 1.0}, {wvar, -1.0 / t}}, Sense::LE, std::log(t) - 1.0,
                               "log_cut_" + std::to_string(b)});
  }
}

void add_power_or_log(ModelIR& m, int zvar, int wvar, const FairnessSpec& spec,
                      const Instance& inst, int pwl_breakpoints) {
  if (spec.alpha == Rational(1))
    add_pwl_log_rows(m, zvar, wvar, inst, pwl_breakpoints);
  else
    decompose_power(m, zvar, wvar, spec.alpha);
}

/* Shared trunk: W/Z variables, sorting rows, objective. The caller has
 * already created the x_i_k binaries. */
void add_coverage_objective(ModelIR& m, const Instance& inst, const FairnessSpec& spec, int p,
                            int pwl_breakpoints, const std::vector<std::vector<int>>& xvar) {
  const int n = static_cast<int>(inst.size());
  const double total = inst.total_weight();
  const double a = spec.alpha.to_double();
  std::vector<int> Wv(p), Zv(p);
  for (int k = 0; k < p; ++k)
    Wv[k] = m.add_var("W_" + std::to_string(k), VarKind::Continuous, 0, total);
  for (int k = 0; k < p; ++k) {
    double lo = 0, hi = kInf;
    if (spec.alpha == Rational(0)) hi = total;
    else if (spec.alpha < Rational(1)) hi = std::pow(total, 1.0 - a);
    else if (spec.alpha == Rational(1)) { lo = -kInf; hi = total > 0 ? std::log(total) : 0; }
    else lo = total > 0 ? std::pow(total, 1.0 - a) : 0;
    Zv[k] = m.add_var("Z_" + std::to_string(k), VarKind::Continuous, lo, hi);
  }
  for (int k = 0; k < p; ++k) {
    LinCon def;
    def.terms.push_back({Wv[k], 1.0});
    for (int i = 0; i < n; ++i)
      if (inst.weights[i] != 0) def.terms.push_back({xvar[i][k], -inst.weights[i]});
    def.sense = Sense::EQ;
    def.rhs = 0;
    def.tag = "W_def_" + std::to_string(k);
    m.lincons.push_back(std::move(def));
  }
  for (int k = 0; k + 1 < p; ++k)
    m.lincons.push_back(LinCon{{{Wv[k], 1.0}, {Wv[k + 1], -1.0}}, Sense::LE, 0.0,
                               "sorting_" + std::to_string(k)});
  for (int k = 0; k < p; ++k) add_power_or_log(m, Zv[k], Wv[k], spec, inst, pwl_breakpoints);
  m.objective.maximize = true;
  m.objective.kind = spec.alpha == Rational(1) ? "log_pwl" : "linear";
  double scale = spec.alpha == Rational(1) ? 1.0 : 1.0 / (1.0 - a);
  if (spec.alpha == Rational(0)) scale = 1.0;
  for (int k = 0; k < p; ++k)
    m.objective.terms.push_back({Zv[k], scale * spec.weights.lambda[k]});
}

void common_metadata(ModelIR& m, const Instance& inst, const FairnessSpec& spec, int p, double R,
                     const char* space) {
  nlohmann::json lam = spec.weights.lambda, om = inst.weights;
  m.metadata["space"] = space;
  m.metadata["p"] = std::to_string(p);
  m.metadata["R"] = num_str(R);
  m.metadata["alpha"] = spec.alpha.str();
  m.metadata["n"] = std::to_string(inst.size());
  m.metadata["lambda"] = lam.dump();
  m.metadata["omega"] = om.dump();
  m.metadata["spec"] = spec.to_json();
  m.metadata["instance_name"] = inst.name;
  m.metadata["instance_hash"] = instance_hash(inst);
  if (spec.alpha == Rational(1)) m.metadata["objective_note"] = "log_pwl_overestimator";
}

void check_build_pre(const Instance& inst, const FairnessSpec& spec, int p, double R) {
  inst.validate();
  spec.validate();
  if (p < 1) throw std::invalid_argument("build: p must be >= 1");
  if (spec.weights.p() != p) throw std::invalid_argument("build: weights length must equal p");
  if (!(R > 0)) throw std::invalid_argument("build: R must be positive");
}

}  // namespace

std::vector<int> decompose_power(ModelIR& m, int zvar, int wvar, const Rational& alpha) {
  if (alpha < Rational(0)) throw std::invalid_argument("decompose_power: alpha must be >= 0");
  if (alpha == Rational(1)) throw std::invalid_argument("decompose_power: alpha = 1 is the log case");
  if (zvar < 0 || wvar < 0 || zvar >= (int)m.vars.size() || wvar >= (int)m.vars.size())
    throw std::invalid_argument("decompose_power: bad variable index");
  const std::string zname = m.vars[zvar].name;
  if (alpha == Rational(0)) {
    m.lincons.push_back(LinCon{{{zvar, 1.0}, {wvar, -1.0}}, Sense::EQ, 0.0, "power_id_" + zname});
    return {};
  }
  // alpha < 1: 1/(1-alpha) = p/q, encode Z^p <= W^q * 1^(p-q)  (self-pad with Z).
  // alpha > 1: 1/(1-alpha) = -q/p, encode Z^q * W^p >= 1       (root tied to 1).
  std::int64_t pp, qq;
  bool hypograph = alpha < Rational(1);
  if (hypograph) {
    Rational inv = Rational(1) / (Rational(1) - alpha);
    pp = inv.num;
    qq = inv.den;
  } else {
    Rational inv = Rational(1) / (alpha - Rational(1));  // = q/p
    qq = inv.num;
    pp = inv.den;
  }
  std::int64_t need = hypograph ? pp : pp + qq;
  std::int64_t T = 1;
  while (T < need) T *= 2;
  int one = -1;
  std::vector<int> leaves;
  if (hypograph) {
    for (std::int64_t r = 0; r < qq; ++r) leaves.push_back(wvar);
    if (pp - qq > 0) one = get_fixed_var(m, "one", 1.0);
    for (std::int64_t r = 0; r < pp - qq; ++r) leaves.push_back(one);
    for (std::int64_t r = 0; r < T - pp; ++r) leaves.push_back(zvar);
  } else {
    one = get_fixed_var(m, "one", 1.0);
    for (std::int64_t r = 0; r < qq; ++r) leaves.push_back(zvar);
    for (std::int64_t r = 0; r < pp; ++r) leaves.push_back(wvar);
    for (std::int64_t r = 0; r < T - pp - qq; ++r) leaves.push_back(one);
  }
  std::vector<int> cones;
  int level = 0, counter = 0;
  std::vector<int> cur = leaves;
  while (cur.size() > 2) {
    std::vector<int> next;
    for (std::size_t i = 0; i < cur.size(); i += 2) {
      std::string base = zname + "_gm" + std::to_string(level) + "_" + std::to_string(counter++);
      int node = m.add_var(base, VarKind::Continuous, 0, kInf);
      int h = half_of(m, cur[i + 1], base + "_h");
      m.conecons.push_back(ConeCon{ConeKind::RotatedSO, cur[i], h, {node}, "gm_" + base});
      cones.push_back(static_cast<int>(m.conecons.size()) - 1);
      next.push_back(node);
    }
    cur = std::move(next);
    ++level;
  }
  int rootvar = hypograph ? zvar : get_fixed_var(m, "one", 1.0);
  int h = half_of(m, cur[1], zname + "_rooth");
  m.conecons.push_back(ConeCon{ConeKind::RotatedSO, cur[0], h, {rootvar}, "gm_root_" + zname});
  cones.push_back(static_cast<int>(m.conecons.size()) - 1);
  return cones;
}

ModelIR build_discrete(const Instance& inst, const FairnessSpec& spec, int p, double R,
                       int pwl_breakpoints) {
  check_build_pre(inst, spec, p, R);
  if (inst.candidates.empty()) throw std::invalid_argument("build_discrete: no candidate set");
  const int n = static_cast<int>(inst.size());
  const int mm = static_cast<int>(inst.candidates.size());
  if (p > mm) throw std::invalid_argument("build_discrete: p exceeds candidate count");
  ModelIR m;
  auto cov = coverage_sets(inst, R);
  std::vector<std::vector<int>> xvar(n, std::vector<int>(p));
  std::vector<std::vector<int>> yvar(mm, std::vector<int>(p));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) xvar[i][k] = m.add_var(idx2("x", i, k), VarKind::Binary, 0, 1);
  for (int j = 0; j < mm; ++j)
    for (int k = 0; k < p; ++k) yvar[j][k] = m.add_var(idx2("y", j, k), VarKind::Binary, 0, 1);
  for (int i = 0; i < n; ++i) {
    LinCon c;
    for (int k = 0; k < p; ++k) c.terms.push_back({xvar[i][k], 1.0});
    c.sense = Sense::LE;
    c.rhs = 1;
    c.tag = "assign_once_" + std::to_string(i);
    m.lincons.push_back(std::move(c));
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) {
      LinCon c;
      c.terms.push_back({xvar[i][k], 1.0});
      for (int j : cov[i]) c.terms.push_back({yvar[j][k], -1.0});
      c.sense = Sense::LE;
      c.rhs = 0;
      c.tag = "cover_link_" + std::to_string(i) + "_" + std::to_string(k);
      m.lincons.push_back(std::move(c));
    }
  for (int k = 0; k < p; ++k) {
    LinCon c;
    for (int j = 0; j < mm; ++j) c.terms.push_back({yvar[j][k], 1.0});
    c.sense = Sense::EQ;
    c.rhs = 1;
    c.tag = "slot_filled_" + std::to_string(k);
    m.lincons.push_back(std::move(c));
  }
  for (int j = 0; j < mm; ++j) {
    LinCon c;
    for (int k = 0; k < p; ++k) c.terms.push_back({yvar[j][k], 1.0});
    c.sense = Sense::LE;
    c.rhs = 1;
    c.tag = "site_once_" + std::to_string(j);
    m.lincons.push_back(std::move(c));
  }
  add_coverage_objective(m, inst, spec, p, pwl_breakpoints, xvar);
  common_metadata(m, inst, spec, p, R, "discrete");
  m.metadata["m"] = std::to_string(mm);
  m.validate();
  return m;
}

ModelIR build_continuous(const Instance& inst, const FairnessSpec& spec, int p, double R,
                         int pwl_breakpoints) {
  check_build_pre(inst, spec, p, R);
  if (inst.norm.kind != NormSpec::Kind::Euclidean)
    throw std::invalid_argument("build_continuous: Euclidean norm only");
  const int n = static_cast<int>(inst.size());
  const int d = static_cast<int>(inst.dim());
  if (n == 0) throw std::invalid_argument("build_continuous: empty instance");
  ModelIR m;
  // U_i = max pairwise distance from i: large enough that a facility covering
  // any point at all satisfies the deactivated rows by triangle inequality.
  std::vector<double> U(n, 0.0);
  double Umax = 0;
  for (int i = 0; i < n; ++i) {
    for (int i2 = 0; i2 < n; ++i2)
      U[i] = std::max(U[i], distance(inst.points[i], inst.points[i2], inst.norm));
    Umax = std::max(Umax, U[i]);
  }
  std::vector<double> lo(d, kInf), hi(d, -kInf);
  for (const auto& pt : inst.points)
    for (int l = 0; l < d; ++l) {
      lo[l] = std::min(lo[l], pt[l]);
      hi[l] = std::max(hi[l], pt[l]);
    }
  std::vector<std::vector<int>> Xv(p, std::vector<int>(d));
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < d; ++l)
      Xv[k][l] = m.add_var(idx2("X", k, l), VarKind::Continuous, lo[l] - (R + Umax), hi[l] + (R + Umax));
  std::vector<std::vector<int>> xvar(n, std::vector<int>(p));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) xvar[i][k] = m.add_var(idx2("x", i, k), VarKind::Binary, 0, 1);
  for (int i = 0; i < n; ++i) {
    LinCon c;
    for (int k = 0; k < p; ++k) c.terms.push_back({xvar[i][k], 1.0});
    c.sense = Sense::LE;
    c.rhs = 1;
    c.tag = "assign_once_" + std::to_string(i);
    m.lincons.push_back(std::move(c));
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) {
      std::vector<int> vv(d);
      for (int l = 0; l < d; ++l) {
        vv[l] = m.add_var("v_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(l),
                          VarKind::Continuous, 0, kInf);
        // v >= a - X and v >= X - a
        m.lincons.push_back(LinCon{{{vv[l], 1.0}, {Xv[k][l], 1.0}}, Sense::GE, inst.points[i][l],
                                   "absdiff_lo_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(l)});
        m.lincons.push_back(LinCon{{{vv[l], 1.0}, {Xv[k][l], -1.0}}, Sense::GE, -inst.points[i][l],
                                   "absdiff_hi_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(l)});
      }
      int s = m.add_var(idx2("s", i, k), VarKind::Continuous, 0, kInf);
      m.conecons.push_back(ConeCon{ConeKind::SecondOrder, s, -1, vv, idx2("dist", i, k)});
      // s <= R + U_i (1 - x)
      m.lincons.push_back(LinCon{{{s, 1.0}, {xvar[i][k], U[i]}}, Sense::LE, R + U[i], idx2("bigM", i, k)});
    }
  add_coverage_objective(m, inst, spec, p, pwl_breakpoints, xvar);
  common_metadata(m, inst, spec, p, R, "continuous");
  m.metadata["d"] = std::to_string(d);
  nlohmann::json uj = U;
  m.metadata["U"] = uj.dump();
  m.validate();
  return m;
}

ModelIR build_continuous_cut_model(const Instance& inst, const FairnessSpec& spec, int p, double R,
                                   const std::vector<std::vector<int>>& initial_cuts,
                                   int pwl_breakpoints) {
  check_build_pre(inst, spec, p, R);
  const int n = static_cast<int>(inst.size());
  ModelIR m;
  std::vector<std::vector<int>> xvar(n, std::vector<int>(p));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) xvar[i][k] = m.add_var(idx2("x", i, k), VarKind::Binary, 0, 1);
  for (int i = 0; i < n; ++i) {
    LinCon c;
    for (int k = 0; k < p; ++k) c.terms.push_back({xvar[i][k], 1.0});
    c.sense = Sense::LE;
    c.rhs = 1;
    c.tag = "assign_once_" + std::to_string(i);
    m.lincons.push_back(std::move(c));
  }
  add_coverage_objective(m, inst, spec, p, pwl_breakpoints, xvar);
  for (const auto& q : initial_cuts) {
    CutRecord rec;
    rec.members = q;
    std::sort(rec.members.begin(), rec.members.end());
    for (int i : rec.members)
      if (i < 0 || i >= n) throw std::invalid_argument("cut member out of range");
    m.cuts.push_back(std::move(rec));
  }
  common_metadata(m, inst, spec, p, R, "cut");
  m.validate();
  return m;
}

std::vector<LinCon> cut_rows(const ModelIR& m) {
  if (m.cuts.empty()) return {};
  auto it = m.metadata.find("p");
  if (it == m.metadata.end()) throw std::invalid_argument("cut_rows: model lacks p metadata");
  const int p = std::stoi(it->second);
  std::vector<LinCon> rows;
  for (std::size_t c = 0; c < m.cuts.size(); ++c) {
    for (int k = 0; k < p; ++k) {
      LinCon row;
      for (int i : m.cuts[c].members) {
        int v = m.var_index(idx2("x", i, k));
        if (v < 0) throw std::invalid_argument("cut_rows: missing x variable");
        row.terms.push_back({v, 1.0});
      }
      row.sense = Sense::LE;
      row.rhs = static_cast<double>(m.cuts[c].members.size()) - 1.0;
      row.tag = "cut_" + std::to_string(c) + "_" + std::to_string(k);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

nlohmann::ordered_json bound_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double bound_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("model json: bad bound " + s);
  }
  return j.get<double>();
}

const char* sense_str(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::EQ: return "=";
    case Sense::GE: return ">=";
  }
  throw std::logic_error("sense");
}

Sense sense_from(const std::string& s) {
  if (s == "<=") return Sense::LE;
  if (s == "=") return Sense::EQ;
  if (s == ">=") return Sense::GE;
  throw std::invalid_argument("model json: bad sense " + s);
}

}  // namespace

std::string export_json(const ModelIR& m) {
  nlohmann::ordered_json j;
  j["format"] = "fmclp-model";
  j["version"] = 1;
  auto& vars = j["vars"] = nlohmann::ordered_json::array();
  for (const auto& v : m.vars) {
    nlohmann::ordered_json vj;
    vj["name"] = v.name;
    vj["kind"] = v.kind == VarKind::Binary ? "binary" : "continuous";
    vj["lo"] = bound_json(v.lo);
    vj["hi"] = bound_json(v.hi);
    vars.push_back(std::move(vj));
  }
  auto& lin = j["lincons"] = nlohmann::ordered_json::array();
  for (const auto& c : m.lincons) {
    nlohmann::ordered_json cj;
    auto& terms = cj["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : c.terms) terms.push_back({t.var, t.coeff});
    cj["sense"] = sense_str(c.sense);
    cj["rhs"] = c.rhs;
    cj["tag"] = c.tag;
    lin.push_back(std::move(cj));
  }
  auto& cones = j["conecons"] = nlohmann::ordered_json::array();
  for (const auto& c : m.conecons) {
    nlohmann::ordered_json cj;
    cj["kind"] = c.kind == ConeKind::SecondOrder ? "soc" : "rsoc";
    cj["t"] = c.t;
    cj["s"] = c.s;
    cj["u"] = c.u;
    cj["tag"] = c.tag;
    cones.push_back(std::move(cj));
  }
  nlohmann::ordered_json obj;
  obj["maximize"] = m.objective.maximize;
  auto& oterms = obj["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : m.objective.terms) oterms.push_back({t.var, t.coeff});
  obj["constant"] = m.objective.constant;
  obj["kind"] = m.objective.kind;
  j["objective"] = std::move(obj);
  auto& cuts = j["cuts"] = nlohmann::ordered_json::array();
  for (const auto& c : m.cuts) cuts.push_back(c.members);
  j["metadata"] = m.metadata;
  return j.dump(2);
}

ModelIR import_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "fmclp-model" || j.value("version", 0) != 1)
    throw std::invalid_argument("model json: unrecognized format header");
  ModelIR m;
  for (const auto& vj : j.at("vars")) {
    Var v;
    v.name = vj.at("name").get<std::string>();
    std::string kind = vj.at("kind").get<std::string>();
    if (kind == "binary") v.kind = VarKind::Binary;
    else if (kind == "continuous") v.kind = VarKind::Continuous;
    else throw std::invalid_argument("model json: bad var kind " + kind);
    v.lo = bound_from_json(vj.at("lo"));
    v.hi = bound_from_json(vj.at("hi"));
    m.vars.push_back(std::move(v));
  }
  for (const auto& cj : j.at("lincons")) {
    LinCon c;
    for (const auto& t : cj.at("terms")) c.terms.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
    c.sense = sense_from(cj.at("sense").get<std::string>());
    c.rhs = cj.at("rhs").get<double>();
    c.tag = cj.value("tag", "");
    m.lincons.push_back(std::move(c));
  }
  for (const auto& cj : j.at("conecons")) {
    ConeCon c;
    std::string kind = cj.at("kind").get<std::string>();
    if (kind == "soc") c.kind = ConeKind::SecondOrder;
    else if (kind == "rsoc") c.kind = ConeKind::RotatedSO;
    else throw std::invalid_argument("model json: bad cone kind " + kind);
    c.t = cj.at("t").get<int>();
    c.s = cj.at("s").get<int>();
    c.u = cj.at("u").get<std::vector<int>>();
    c.tag = cj.value("tag", "");
    m.conecons.push_back(std::move(c));
  }
  const auto& obj = j.at("objective");
  m.objective.maximize = obj.at("maximize").get<bool>();
  for (const auto& t : obj.at("terms"))
    m.objective.terms.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
  m.objective.constant = obj.at("constant").get<double>();
  m.objective.kind = obj.at("kind").get<std::string>();
  for (const auto& c : j.at("cuts")) {
    CutRecord rec;
    rec.members = c.get<std::vector<int>>();
    m.cuts.push_back(std::move(rec));
  }
  for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it)
    m.metadata[it.key()] = it.value().get<std::string>();
  m.validate();
  return m;
}

namespace {

void append_terms(std::string& out, const std::vector<LinTerm>& terms, const ModelIR& m) {
  bool first = true;
  for (const auto& t : terms) {
    double c = t.coeff;
    if (c == 0) continue;
    if (first) {
      if (c < 0) { out += "- "; c = -c; }
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    if (c != 1.0) { out += num_str(c); out += " "; }
    out += m.vars[t.var].name;
  }
  if (first) out += "0";
}

}  // namespace

std::string export_lp(const ModelIR& m) {
  if (!m.conecons.empty())
    throw std::invalid_argument("lp export: model has cone constraints; use the json format");
  std::string out;
  out += m.objective.maximize ? "Maximize\n" : "Minimize\n";
  out += " obj: ";
  append_terms(out, m.objective.terms, m);
  if (m.objective.constant != 0) {
    out += m.objective.constant > 0 ? " + " : " - ";
    out += num_str(std::fabs(m.objective.constant));
  }
  out += "\nSubject To\n";
  auto rows = m.lincons;
  for (auto& r : cut_rows(m)) rows.push_back(std::move(r));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i];
    out += " ";
    out += c.tag.empty() ? "c" + std::to_string(i) : c.tag;
    out += ": ";
    append_terms(out, c.terms, m);
    out += " ";
    out += sense_str(c.sense);
    out += " ";
    out += num_str(c.rhs);
    out += "\n";
  }
  out += "Bounds\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Binary) continue;
    out += " ";
    if (v.lo == -kInf && v.hi == kInf) {
      out += v.name + " free\n";
      continue;
    }
    if (v.lo == v.hi) {
      out += v.name + " = " + num_str(v.lo) + "\n";
      continue;
    }
    out += (v.lo == -kInf ? std::string("-infinity") : num_str(v.lo)) + " <= " + v.name + " <= " +
           (v.hi == kInf ? std::string("+infinity") : num_str(v.hi)) + "\n";
  }
  bool any_bin = false;
  for (const auto& v : m.vars) any_bin = any_bin || v.kind == VarKind::Binary;
  if (any_bin) {
    out += "Binary\n";
    for (const auto& v : m.vars)
      if (v.kind == VarKind::Binary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

namespace {

struct LpTokens {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }
  std::string next() { return toks[pos++]; }
};

LpTokens lp_tokenize(const std::string& text) {
  LpTokens t;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) { t.toks.push_back(cur); cur.clear(); }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\') {  // comment to end of line
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (isspace(static_cast<unsigned char>(c))) { flush(); continue; }
    if (c == ':' || c == '+' || c == '-') {
      // keep exponent signs inside numeric tokens: "1.5e-07"
      if ((c == '+' || c == '-') && !cur.empty() && (cur.back() == 'e' || cur.back() == 'E') &&
          (isdigit(static_cast<unsigned char>(cur[0])) || cur[0] == '.')) {
        cur += c;
        continue;
      }
      flush();
      t.toks.push_back(std::string(1, c));
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (c != '=' && i + 1 < text.size() && text[i + 1] == '=') { op += '='; ++i; }
      t.toks.push_back(op);
      continue;
    }
    cur += c;
  }
  flush();
  return t;
}

bool is_number_token(const std::string& s) {
  if (s.empty()) return false;
  char c = s[0];
  return isdigit(static_cast<unsigned char>(c)) || c == '.';
}

double parse_num(const std::string& s) {
  if (s == "infinity" || s == "+infinity") return kInf;
  if (s == "-infinity") return -kInf;
  return std::stod(s);
}

bool keyword(const std::string& s, const char* kw) {
  if (s.size() != std::string(kw).size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (tolower(static_cast<unsigned char>(s[i])) != tolower(static_cast<unsigned char>(kw[i])))
      return false;
  return true;
}

}  // namespace

ModelIR parse_lp(const std::string& text) {
  LpTokens tk = lp_tokenize(text);
  ModelIR m;
  std::map<std::string, int> byname;
  auto var_of = [&](const std::string& name) {
    auto it = byname.find(name);
    if (it != byname.end()) return it->second;
    int idx = m.add_var(name, VarKind::Continuous, 0, kInf);
    byname[name] = idx;
    return idx;
  };
  // expression := [name ':'] term* ; returns terms
  auto parse_terms = [&](std::vector<LinTerm>& terms, double& constant) {
    double sign = 1;
    while (!tk.done()) {
      const std::string& s = tk.peek();
      if (s == "+") { tk.next(); continue; }
      if (s == "-") { tk.next(); sign = -sign; continue; }
      if (s == "<=" || s == ">=" || s == "=" ) break;
      if (keyword(s, "Subject") || keyword(s, "To") || keyword(s, "Bounds") || keyword(s, "Binary") ||
          keyword(s, "End") || keyword(s, "st") || keyword(s, "s.t.")) break;
      if (is_number_token(s)) {
        double num = parse_num(tk.next());
        if (!tk.done() && !is_number_token(tk.peek()) && tk.peek() != "+" && tk.peek() != "-" &&
            tk.peek() != "<=" && tk.peek() != ">=" && tk.peek() != "=" && !keyword(tk.peek(), "Subject") &&
            !keyword(tk.peek(), "Bounds") && !keyword(tk.peek(), "Binary") && !keyword(tk.peek(), "End")) {
          terms.push_back({var_of(tk.next()), sign * num});
        } else {
          constant += sign * num;
        }
      } else {
        // bare variable (coefficient 1), or next-section keyword handled above
        if (!tk.done() && tk.pos + 1 < tk.toks.size() && tk.toks[tk.pos + 1] == ":") break;
        terms.push_back({var_of(tk.next()), sign});
      }
      sign = 1;
    }
  };
  if (tk.done()) throw std::invalid_argument("lp parse: empty file");
  std::string head = tk.next();
  if (keyword(head, "Maximize")) m.objective.maximize = true;
  else if (keyword(head, "Minimize")) m.objective.maximize = false;
  else throw std::invalid_argument("lp parse: expected Maximize/Minimize");
  if (!tk.done() && tk.pos + 1 < tk.toks.size() && tk.toks[tk.pos + 1] == ":") { tk.next(); tk.next(); }
  parse_terms(m.objective.terms, m.objective.constant);
  if (tk.done() || !keyword(tk.next(), "Subject") || tk.done() || !keyword(tk.next(), "To"))
    throw std::invalid_argument("lp parse: expected Subject To");
  while (!tk.done() && !keyword(tk.peek(), "Bounds") && !keyword(tk.peek(), "Binary") &&
         !keyword(tk.peek(), "End")) {
    LinCon c;
    if (tk.pos + 1 < tk.toks.size() && tk.toks[tk.pos + 1] == ":") {
      c.tag = tk.next();
      tk.next();
    }
    double cst = 0;
    parse_terms(c.terms, cst);
    if (tk.done()) throw std::invalid_argument("lp parse: constraint missing relation");
    std::string rel = tk.next();
    c.sense = sense_from(rel == "=" ? "=" : rel);
    if (tk.done()) throw std::invalid_argument("lp parse: constraint missing rhs");
    std::string rhs_tok = tk.next();
    double mult = 1;
    if (rhs_tok == "-") { mult = -1; rhs_tok = tk.next(); }
    c.rhs = mult * parse_num(rhs_tok) - cst;
    m.lincons.push_back(std::move(c));
  }
  if (!tk.done() && keyword(tk.peek(), "Bounds")) {
    tk.next();
    while (!tk.done() && !keyword(tk.peek(), "Binary") && !keyword(tk.peek(), "End")) {
      // forms: lo <= name <= hi | name free | name = v
      std::string first = tk.next();
      if (first == "-") first = "-" + tk.next();
      if (is_number_token(first) || first == "-infinity" || first[0] == '-') {
        double lo = parse_num(first);
        if (tk.next() != "<=") throw std::invalid_argument("lp parse: bad bound row");
        std::string name = tk.next();
        if (tk.next() != "<=") throw std::invalid_argument("lp parse: bad bound row");
        std::string hi_tok = tk.next();
        if (hi_tok == "+") hi_tok = tk.next();
        else if (hi_tok == "-") hi_tok = "-" + tk.next();
        int v = var_of(name);
        m.vars[v].lo = lo;
        m.vars[v].hi = parse_num(hi_tok);
      } else {
        std::string name = first;
        std::string op = tk.next();
        int v = var_of(name);
        if (keyword(op, "free")) {
          m.vars[v].lo = -kInf;
          m.vars[v].hi = kInf;
        } else if (op == "=") {
          std::string val = tk.next();
          double mult = 1;
          if (val == "-") { mult = -1; val = tk.next(); }
          m.vars[v].lo = m.vars[v].hi = mult * parse_num(val);
        } else {
          throw std::invalid_argument("lp parse: bad bound row near " + name);
        }
      }
    }
  }
  if (!tk.done() && keyword(tk.peek(), "Binary")) {
    tk.next();
    while (!tk.done() && !keyword(tk.peek(), "End")) {
      int v = var_of(tk.next());
      m.vars[v].kind = VarKind::Binary;
      m.vars[v].lo = 0;
      m.vars[v].hi = 1;
    }
  }
  if (tk.done() || !keyword(tk.next(), "End")) throw std::invalid_argument("lp parse: expected End");
  m.validate();
  return m;
}

std::vector<std::string> provenance_audit(const ModelIR& m) {
  std::vector<std::string> missing;
  for (const char* key : {"space", "p", "R", "alpha", "lambda", "omega", "instance_hash"})
    if (!m.metadata.count(key)) missing.push_back(std::string("metadata:") + key);
  auto it = m.metadata.find("space");
  std::string space = it == m.metadata.end() ? "" : it->second;
  auto has_prefix = [&](const char* pre) {
    std::string want = std::string(pre) + "_";
    for (const auto& v : m.vars)
      if (v.name.rfind(want, 0) == 0) return true;
    return false;
  };
  std::vector<const char*> prefixes;
  if (space == "discrete") prefixes = {"x", "y", "W", "Z"};
  else if (space == "continuous") prefixes = {"x", "X", "v", "s", "W", "Z"};
  else if (space == "cut") prefixes = {"x", "W", "Z"};
  for (const char* pre : prefixes)
    if (!has_prefix(pre)) missing.push_back(std::string("var:") + pre);
  if (space == "continuous" && !m.metadata.count("U")) missing.push_back("metadata:U");
  return missing;
}

bool completion_feasible(const ModelIR& m, std::map<int, double> values, double tol) {
  const int nv = static_cast<int>(m.vars.size());
  for (int v = 0; v < nv; ++v)
    if (m.vars[v].lo == m.vars[v].hi) values.emplace(v, m.vars[v].lo);
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& c : m.lincons) {
      if (c.sense != Sense::EQ) continue;
      int unknown = -1;
      double acc = 0, coeff = 0;
      bool skip = false;
      for (const auto& t : c.terms) {
        auto it = values.find(t.var);
        if (it == values.end()) {
          if (unknown >= 0) { skip = true; break; }
          unknown = t.var;
          coeff = t.coeff;
        } else {
          acc += t.coeff * it->second;
        }
      }
      if (skip || unknown < 0) continue;
      values[unknown] = (c.rhs - acc) / coeff;
      progress = true;
    }
    for (const auto& c : m.conecons) {
      if (c.kind != ConeKind::RotatedSO || c.u.size() != 1) continue;
      auto t_it = values.find(c.t), s_it = values.find(c.s);
      if (t_it == values.end() || s_it == values.end()) continue;
      if (values.count(c.u[0])) continue;
      values[c.u[0]] = std::sqrt(std::max(0.0, 2.0 * t_it->second * s_it->second));
      progress = true;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!values.count(v))
      throw std::logic_error("completion_feasible: variable " + m.vars[v].name + " not reachable");
  auto val = [&](int v) { return values.at(v); };
  for (int v = 0; v < nv; ++v) {
    double x = val(v);
    double slack = tol * (1.0 + std::fabs(x));
    if (x < m.vars[v].lo - slack || x > m.vars[v].hi + slack) return false;
  }
  auto check_lin = [&](const LinCon& c) {
    double acc = 0, scale = 1.0 + std::fabs(c.rhs);
    for (const auto& t : c.terms) {
      acc += t.coeff * val(t.var);
      scale += std::fabs(t.coeff * val(t.var));
    }
    double slack = tol * scale;
    switch (c.sense) {
      case Sense::LE: return acc <= c.rhs + slack;
      case Sense::EQ: return std::fabs(acc - c.rhs) <= slack;
      case Sense::GE: return acc >= c.rhs - slack;
    }
    return false;
  };
  for (const auto& c : m.lincons)
    if (!check_lin(c)) return false;
  if (!m.cuts.empty())
    for (const auto& c : cut_rows(m))
      if (!check_lin(c)) return false;
  for (const auto& c : m.conecons) {
    double un = 0;
    for (int u : c.u) un += val(u) * val(u);
    if (c.kind == ConeKind::SecondOrder) {
      double t = val(c.t);
      if (t < -tol) return false;
      if (t * t + tol * (1.0 + un + t * t) < un) return false;
    } else {
      double t = val(c.t), s = val(c.s);
      if (t < -tol || s < -tol) return false;
      if (2.0 * t * s + tol * (1.0 + un + 2.0 * std::fabs(t * s)) < un) return false;
    }
  }
  return true;
}

IrBruteResult ir_brute_force_binaries(const ModelIR& m, long long cap) {
  if (!m.conecons.empty())
    throw std::invalid_argument("ir_brute_force: cone models not supported");
  std::vector<int> bins;
  for (std::size_t v = 0; v < m.vars.size(); ++v)
    if (m.vars[v].kind == VarKind::Binary) bins.push_back(static_cast<int>(v));
  if (bins.size() >= 63 || (1LL << bins.size()) > cap)
    throw std::invalid_argument("ir_brute_force: state space exceeds cap");
  IrBruteResult best;
  for (long long mask = 0; mask < (1LL << bins.size()); ++mask) {
    std::map<int, double> values;
    for (std::size_t b = 0; b < bins.size(); ++b)
      values[bins[b]] = (mask >> b) & 1 ? 1.0 : 0.0;
    if (!completion_feasible(m, values, 1e-9)) continue;
    // recompute the completed values for the objective
    std::map<int, double> full = values;
    for (std::size_t v = 0; v < m.vars.size(); ++v)
      if (m.vars[v].lo == m.vars[v].hi) full.emplace(static_cast<int>(v), m.vars[v].lo);
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& c : m.lincons) {
        if (c.sense != Sense::EQ) continue;
        int unknown = -1;
        double acc = 0, coeff = 0;
        bool skip = false;
        for (const auto& t : c.terms) {
          auto it = full.find(t.var);
          if (it == full.end()) {
            if (unknown >= 0) { skip = true; break; }
            unknown = t.var;
            coeff = t.coeff;
          } else acc += t.coeff * it->second;
        }
        if (skip || unknown < 0) continue;
        full[unknown] = (c.rhs - acc) / coeff;
        progress = true;
      }
    }
    double obj = m.objective.constant;
    for (const auto& t : m.objective.terms) obj += t.coeff * full.at(t.var);
    if (!best.feasible || (m.objective.maximize ? obj > best.objective : obj < best.objective)) {
      best.feasible = true;
      best.objective = obj;
      best.values = full;
    }
  }
  return best;
}

}  // namespace fmclp::model
