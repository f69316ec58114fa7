#pragma once

#include <map>
#include <string>
#include <vector>

#include "fmclp/fairness.hpp"
#include "fmclp/types.hpp"

namespace fmclp::model {

enum class VarKind { Binary, Continuous };

struct Var {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lo = 0;
  double hi = 0;  // +inf allowed
  friend bool operator==(const Var&, const Var&) = default;
};

enum class Sense { LE, EQ, GE };

struct LinTerm {
  int var = -1;
  double coeff = 0;
  friend bool operator==(const LinTerm&, const LinTerm&) = default;
};

struct LinCon {
  std::vector<LinTerm> terms;
  Sense sense = Sense::LE;
  double rhs = 0;
  std::string tag;
  friend bool operator==(const LinCon&, const LinCon&) = default;
};

/* SecondOrder: t >= ||u||_2.  RotatedSO: 2*t*s >= ||u||_2^2 with t,s >= 0. */
enum class ConeKind { SecondOrder, RotatedSO };

struct ConeCon {
  ConeKind kind = ConeKind::SecondOrder;
  int t = -1;
  int s = -1;  // RotatedSO only
  std::vector<int> u;
  std::string tag;
  friend bool operator==(const ConeCon&, const ConeCon&) = default;
};

struct Objective {
  bool maximize = true;
  std::vector<LinTerm> terms;
  double constant = 0;
  std::string kind = "linear";  // "linear" or "log_pwl"
  friend bool operator==(const Objective&, const Objective&) = default;
};

/* Cluster-infeasibility cut: sum_{i in members} x_{i,k} <= |members|-1 for
 * every slot k. Stored as the index set; rows materialize on export. */
struct CutRecord {
  std::vector<int> members;
  friend bool operator==(const CutRecord&, const CutRecord&) = default;
};

struct ModelIR {
  std::vector<Var> vars;
  std::vector<LinCon> lincons;
  std::vector<ConeCon> conecons;
  Objective objective;
  std::vector<CutRecord> cuts;
  std::map<std::string, std::string> metadata;

  int add_var(std::string name, VarKind kind, double lo, double hi);
  int var_index(const std::string& name) const;  // -1 if absent
  void validate() const;
  friend bool operator==(const ModelIR&, const ModelIR&) = default;
};

/* Covering-assignment model over the instance's finite candidate set. */
ModelIR build_discrete(const Instance& inst, const FairnessSpec& spec, int p, double R,
                       int pwl_breakpoints = 32);

/* Planar/any-d Euclidean big-M model with facility coordinate variables. */
ModelIR build_continuous(const Instance& inst, const FairnessSpec& spec, int p, double R,
                         int pwl_breakpoints = 32);

/* Assignment-only model whose geometry lives in cluster cuts. */
ModelIR build_continuous_cut_model(const Instance& inst, const FairnessSpec& spec, int p,
                                   double R, const std::vector<std::vector<int>>& initial_cuts,
                                   int pwl_breakpoints = 32);

/* Links zvar to wvar^(1-alpha) through rotated cones (alpha != 1):
 * alpha < 1 encodes Z <= W^(1-alpha), alpha > 1 encodes Z >= W^(1-alpha)
 * (equivalently Z^q * W^p >= 1). alpha = 0 degenerates to the row Z = W.
 * Returns the indices of the cones added. */
std::vector<int> decompose_power(ModelIR& m, int zvar, int wvar, const Rational& alpha);

/* Rows materialized from the cut records (one per cut per slot). */
std::vector<LinCon> cut_rows(const ModelIR& m);

std::string export_json(const ModelIR& m);
ModelIR import_json(const std::string& text);

/* LP text; refuses models with cone constraints. Cut records are expanded. */
std::string export_lp(const ModelIR& m);

/* Minimal reader for the LP text emitted above; used to validate exports. */
ModelIR parse_lp(const std::string& text);

/* Names of required symbols (metadata keys / variable prefixes) that are
 * missing from the model; empty result means the audit passed. */
std::vector<std::string> provenance_audit(const ModelIR& m);

/* Feasibility of the model under the given partial assignment: variables
 * fixed by bounds, singleton equality rows, and cone tops are propagated
 * (cones maximally), then every constraint is checked. Throws if the
 * propagation cannot reach all variables. */
bool completion_feasible(const ModelIR& m, std::map<int, double> given, double tol = 1e-9);

struct IrBruteResult {
  bool feasible = false;
  double objective = 0;
  std::map<int, double> values;
};

/* Exhaustive 0/1 enumeration of the binary variables for cone-free models
 * whose continuous variables are pinned by equality rows. */
IrBruteResult ir_brute_force_binaries(const ModelIR& m, long long cap = (1LL << 22));

}  // namespace fmclp::model
