#pragma once

#include <string>
#include <vector>

#include "fmclp/rational.hpp"
#include "fmclp/types.hpp"

namespace fmclp {

enum class OwaFamily { W, C, K, D, G, H, Custom };

std::string family_name(OwaFamily f);
OwaFamily parse_family(const std::string& s);

/* Nonincreasing weights on the ascending-sorted coverage vector.
 * lambda_j in [0,1], sum 1; lambda_1 pairs with the smallest coverage. */
struct OwaWeights {
  OwaFamily family = OwaFamily::Custom;
  std::vector<double> lambda;
  int k = 0;                      // K family only
  Rational beta_mix{1, 2};        // D family only

  int p() const { return static_cast<int>(lambda.size()); }
  void validate() const;
};

/* k <= 0 selects the default k = ceil(p/2). beta_mix must lie in [0,1]. */
OwaWeights owa_family(OwaFamily f, int p, int k = 0, const Rational& beta_mix = Rational(1, 2));
OwaWeights owa_custom(std::vector<double> lambda);

/* Same weights as exact rationals; sums to exactly 1 by construction. */
std::vector<Rational> owa_family_exact(OwaFamily f, int p, int k = 0,
                                       const Rational& beta_mix = Rational(1, 2));

/* orness(lambda) = sum_j (p-j)/(p-1) * lambda_j; 1 = pure min, 1/2 = average. */
double orness(const OwaWeights& w);
Rational orness_exact(const std::vector<Rational>& lambda);

/* alpha >= 0, exact rational. alpha = 0 is the plain sum, alpha -> larger is
 * more inequality-averse, alpha = 1 is the log limit. */
struct FairnessSpec {
  OwaWeights weights;
  Rational alpha{0, 1};

  void validate() const;
  std::string to_json() const;
  static FairnessSpec from_json(const std::string& text);
};

/* Unweighted alpha-fair value of W (all entries >= 0):
 * (1/(1-alpha)) sum W_j^(1-alpha) for alpha != 1, sum log W_j for alpha = 1.
 * -inf when alpha >= 1 and some W_j = 0. */
ExtReal alpha_fair(const std::vector<double>& W, const Rational& alpha);

/* OWA-weighted alpha-fair value: weights pair with W sorted ascending. */
ExtReal fair_owa(const std::vector<double>& W, const FairnessSpec& spec);

enum class FitLoss { MaxEntropy, MinVariance };

/* Weights of the given orness beta in [1/2, 1]; beta < 1/2 would force
 * increasing weights and is rejected. MaxEntropy yields a geometric
 * sequence (bisection on the ratio); MinVariance an affine sequence with a
 * clipped tail (active set on nonnegativity). */
OwaWeights fit_weights(int p, double beta, FitLoss loss);

struct AxiomsReport {
  struct Entry {
    std::string axiom;
    bool passed = true;
    std::string counterexample;  // empty when passed
  };
  std::vector<Entry> entries;
  bool all_passed = true;
};

/* Sampled battery: symmetry, monotonicity, continuity, midpoint concavity. */
AxiomsReport axioms_check(const FairnessSpec& spec, int trials = 400, std::uint64_t seed = 1);

}  // namespace fmclp
