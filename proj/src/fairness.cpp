#include "fmclp/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

namespace fmclp {

std::string family_name(OwaFamily f) {
  switch (f) {
    case OwaFamily::W: return "W";
    case OwaFamily::C: return "C";
    case OwaFamily::K: return "K";
    case OwaFamily::D: return "D";
    case OwaFamily::G: return "G";
    case OwaFamily::H: return "H";
    case OwaFamily::Custom: return "Custom";
  }
  throw std::logic_error("family_name");
}

OwaFamily parse_family(const std::string& s) {
  if (s == "W") return OwaFamily::W;
  if (s == "C") return OwaFamily::C;
  if (s == "K") return OwaFamily::K;
  if (s == "D") return OwaFamily::D;
  if (s == "G") return OwaFamily::G;
  if (s == "H") return OwaFamily::H;
  if (s == "Custom") return OwaFamily::Custom;
  throw std::invalid_argument("unknown OWA family: " + s);
}

void OwaWeights::validate() const {
  if (lambda.empty()) throw std::invalid_argument("weights: empty");
  double sum = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    double v = lambda[j];
    if (!(v >= -1e-15) || v > 1 + 1e-12) throw std::invalid_argument("weights: entry outside [0,1]");
    if (j > 0 && v > lambda[j - 1] + 1e-12) throw std::invalid_argument("weights: not nonincreasing");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("weights: sum != 1");
}

std::vector<Rational> owa_family_exact(OwaFamily f, int p, int k, const Rational& beta_mix) {
  if (p < 1) throw std::invalid_argument("weights: p must be >= 1");
  std::vector<Rational> lam(p);
  switch (f) {
    case OwaFamily::W:
      for (int j = 0; j < p; ++j) lam[j] = Rational(1, p);
      break;
    case OwaFamily::C:
      lam[0] = Rational(1);
      break;
    case OwaFamily::K: {
      if (k <= 0) k = (p + 1) / 2;
      if (k > p) throw std::invalid_argument("weights: k must be in [1, p]");
      for (int j = 0; j < k; ++j) lam[j] = Rational(1, k);
      break;
    }
    case OwaFamily::D: {
      if (beta_mix < Rational(0) || beta_mix > Rational(1))
        throw std::invalid_argument("weights: beta_mix must lie in [0,1]");
      Rational denom = Rational(1) + Rational(p - 1) * beta_mix;
      lam[0] = Rational(1) / denom;
      for (int j = 1; j < p; ++j) lam[j] = beta_mix / denom;
      break;
    }
    case OwaFamily::G:
      for (int j = 1; j <= p; ++j) lam[j - 1] = Rational(2 * (p - j) + 1, (std::int64_t)p * p);
      break;
    case OwaFamily::H: {
      std::vector<Rational> harm(p + 1);  // harm[j] = H(j), H(0) = 0
      for (int j = 1; j <= p; ++j) harm[j] = harm[j - 1] + Rational(1, j);
      for (int j = 1; j <= p; ++j) lam[j - 1] = (harm[p] - harm[j - 1]) * Rational(1, p);
      break;
    }
    case OwaFamily::Custom:
      throw std::invalid_argument("weights: Custom has no closed form");
  }
  return lam;
}

OwaWeights owa_family(OwaFamily f, int p, int k, const Rational& beta_mix) {
  OwaWeights w;
  w.family = f;
  w.k = (f == OwaFamily::K && k <= 0) ? (p + 1) / 2 : k;
  w.beta_mix = beta_mix;
  auto exact = owa_family_exact(f, p, k, beta_mix);
  w.lambda.resize(exact.size());
  for (std::size_t j = 0; j < exact.size(); ++j) w.lambda[j] = exact[j].to_double();
  w.validate();
  return w;
}

OwaWeights owa_custom(std::vector<double> lambda) {
  OwaWeights w;
  w.family = OwaFamily::Custom;
  w.lambda = std::move(lambda);
  w.validate();
  return w;
}

double orness(const OwaWeights& w) {
  const int p = w.p();
  if (p < 2) throw std::invalid_argument("orness: needs p >= 2");
  double s = 0;
  for (int j = 1; j <= p; ++j) s += double(p - j) / double(p - 1) * w.lambda[j - 1];
  return s;
}

Rational orness_exact(const std::vector<Rational>& lambda) {
  const int p = static_cast<int>(lambda.size());
  if (p < 2) throw std::invalid_argument("orness: needs p >= 2");
  Rational s(0);
  for (int j = 1; j <= p; ++j) s = s + Rational(p - j, p - 1) * lambda[j - 1];
  return s;
}

void FairnessSpec::validate() const {
  weights.validate();
  if (alpha < Rational(0)) throw std::invalid_argument("alpha must be >= 0");
}

ExtReal alpha_fair(const std::vector<double>& W, const Rational& alpha) {
  if (W.empty()) throw std::invalid_argument("alpha_fair: empty vector");
  if (alpha < Rational(0)) throw std::invalid_argument("alpha_fair: alpha must be >= 0");
  for (double w : W)
    if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("alpha_fair: entries must be finite and >= 0");
  if (alpha == Rational(1)) {
    double s = 0;
    for (double w : W) {
      if (w == 0) return ExtReal::neg_inf();
      s += std::log(w);
    }
    return ExtReal(s);
  }
  const double a = alpha.to_double();
  if (alpha > Rational(1)) {
    for (double w : W)
      if (w == 0) return ExtReal::neg_inf();
  }
  if (alpha == Rational(0)) {
    double s = 0;
    for (double w : W) s += w;
    return ExtReal(s);
  }
  double s = 0;
  for (double w : W) s += std::pow(w, 1.0 - a);
  return ExtReal(s / (1.0 - a));
}

ExtReal fair_owa(const std::vector<double>& W, const FairnessSpec& spec) {
  spec.validate();
  if (W.size() != spec.weights.lambda.size())
    throw std::invalid_argument("fair_owa: W size must match weights");
  for (double w : W)
    if (!(w >= 0) || !std::isfinite(w)) throw std::invalid_argument("fair_owa: entries must be finite and >= 0");
  std::vector<double> s = W;
  std::stable_sort(s.begin(), s.end());
  const auto& lam = spec.weights.lambda;
  if (spec.alpha == Rational(0)) {
    double v = 0;
    for (std::size_t j = 0; j < s.size(); ++j) v += lam[j] * s[j];
    return ExtReal(v);
  }
  if (spec.alpha >= Rational(1) && s[0] == 0) return ExtReal::neg_inf();
  if (spec.alpha == Rational(1)) {
    double v = 0;
    for (std::size_t j = 0; j < s.size(); ++j) v += lam[j] * std::log(s[j]);
    return ExtReal(v);
  }
  const double a = spec.alpha.to_double();
  double v = 0;
  for (std::size_t j = 0; j < s.size(); ++j) v += lam[j] * std::pow(s[j], 1.0 - a);
  return ExtReal(v / (1.0 - a));
}

namespace {

double orness_of_ratio(int p, double q) {
  // weights proportional to q^(j-1)
  double num = 0, den = 0, pw = 1;
  for (int j = 1; j <= p; ++j) {
    num += double(p - j) / double(p - 1) * pw;
    den += pw;
    pw *= q;
  }
  return num / den;
}

OwaWeights finish_fit(std::vector<double> lam) {
  double sum = 0;
  for (double v : lam) sum += v;
  for (double& v : lam) v /= sum;
  for (double& v : lam)
    if (v < 0 && v > -1e-15) v = 0;
  OwaWeights w = owa_custom(std::move(lam));
  return w;
}

}  // namespace

OwaWeights fit_weights(int p, double beta, FitLoss loss) {
  if (p < 2) throw std::invalid_argument("fit_weights: p must be >= 2");
  if (!(beta >= 0) || !(beta <= 1)) throw std::invalid_argument("fit_weights: orness must lie in [0,1]");
  if (beta < 0.5)
    throw std::invalid_argument("fit_weights: orness below 1/2 needs increasing weights; not representable");
  if (beta == 0.5) {
    std::vector<double> lam(p, 1.0 / p);
    return finish_fit(std::move(lam));
  }
  if (beta == 1.0) {
    std::vector<double> lam(p, 0.0);
    lam[0] = 1.0;
    return finish_fit(std::move(lam));
  }
  if (loss == FitLoss::MaxEntropy) {
    // Entropy-maximal weights with fixed orness form a geometric sequence;
    // orness is strictly decreasing in the ratio q, with q=1 at orness 1/2.
    double lo = 1e-16, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (orness_of_ratio(p, mid) > beta) lo = mid; else hi = mid;
    }
    double q = 0.5 * (lo + hi);
    std::vector<double> lam(p);
    double pw = 1;
    for (int j = 0; j < p; ++j) { lam[j] = pw; pw *= q; }
    OwaWeights w = finish_fit(std::move(lam));
    if (std::fabs(orness(w) - beta) > 1e-8) throw std::runtime_error("fit_weights: bisection failed");
    return w;
  }
  // MinVariance: lambda_j = mu + nu * d_j on a free prefix, zero tail.
  for (int f = p; f >= 1; --f) {
    double S1 = 0, S2 = 0;
    for (int j = 1; j <= f; ++j) {
      double d = double(p - j) / double(p - 1);
      S1 += d;
      S2 += d * d;
    }
    double det = f * S2 - S1 * S1;
    double mu, nu;
    if (f == 1) {
      if (std::fabs(beta - 1.0) > 1e-12) continue;
      mu = 1; nu = 0;
    } else {
      if (det <= 0) continue;
      mu = (S2 - S1 * beta) / det;
      nu = (f * beta - S1) / det;
    }
    std::vector<double> lam(p, 0.0);
    bool ok = true;
    for (int j = 1; j <= f; ++j) {
      double d = double(p - j) / double(p - 1);
      lam[j - 1] = mu + nu * d;
      if (lam[j - 1] < -1e-12) { ok = false; break; }
    }
    if (!ok) continue;
    OwaWeights w = finish_fit(std::move(lam));
    if (std::fabs(orness(w) - beta) > 1e-8) continue;
    return w;
  }
  throw std::runtime_error("fit_weights: no feasible active set");
}

std::string FairnessSpec::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = family_name(weights.family);
  j["p"] = weights.p();
  j["alpha"] = alpha.str();
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (weights.family == OwaFamily::K) params["k"] = weights.k;
  if (weights.family == OwaFamily::D) params["beta_mix"] = weights.beta_mix.str();
  if (weights.family == OwaFamily::Custom) params["lambda"] = weights.lambda;
  j["params"] = std::move(params);
  return j.dump();
}

FairnessSpec FairnessSpec::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  FairnessSpec spec;
  spec.alpha = parse_rational(j.at("alpha").get<std::string>());
  OwaFamily fam = parse_family(j.at("family").get<std::string>());
  int p = j.at("p").get<int>();
  nlohmann::json params = j.value("params", nlohmann::json::object());
  if (fam == OwaFamily::Custom) {
    spec.weights = owa_custom(params.at("lambda").get<std::vector<double>>());
  } else {
    int k = params.value("k", 0);
    Rational bm = params.contains("beta_mix") ? parse_rational(params["beta_mix"].get<std::string>())
                                              : Rational(1, 2);
    spec.weights = owa_family(fam, p, k, bm);
  }
  spec.validate();
  return spec;
}

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int p, bool allow_zero) {
  std::vector<double> w(p);
  for (int j = 0; j < p; ++j) {
    double u = double(rng() >> 11) * 0x1p-53;
    w[j] = allow_zero && u < 0.15 ? 0.0 : 0.05 + 10.0 * u;
  }
  return w;
}

std::string vec_str(const std::vector<double>& w) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ")";
  return os.str();
}

}  // namespace

AxiomsReport axioms_check(const FairnessSpec& spec, int trials, std::uint64_t seed) {
  spec.validate();
  const int p = spec.weights.p();
  std::mt19937_64 rng(seed);
  AxiomsReport rep;
  AxiomsReport::Entry sym{"symmetry", true, ""}, mono{"monotonicity", true, ""},
      cont{"continuity", true, ""}, conc{"concavity", true, ""};
  for (int t = 0; t < trials; ++t) {
    std::vector<double> W = random_vec(rng, p, true);
    // symmetry: any permutation has the same value
    std::vector<double> Wp = W;
    for (int j = p - 1; j > 0; --j) std::swap(Wp[j], Wp[rng() % (j + 1)]);
    if (sym.passed && fair_owa(W, spec) != fair_owa(Wp, spec)) {
      sym.passed = false;
      sym.counterexample = vec_str(W);
    }
    // monotonicity: raising one entry never lowers the value
    std::vector<double> Wup = W;
    Wup[t % p] += 0.5 + double(rng() >> 11) * 0x1p-53;
    if (mono.passed && fair_owa(Wup, spec) < fair_owa(W, spec)) {
      mono.passed = false;
      mono.counterexample = vec_str(W);
    }
    // continuity: small perturbation away from zero moves the value little
    std::vector<double> Wc = W, Wc2;
    for (double& v : Wc) v = std::max(v, 0.5);
    Wc2 = Wc;
    double l1 = 0;
    for (int j = 0; j < p; ++j) {
      double d = (double(rng() >> 11) * 0x1p-53 - 0.5) * 2e-6;
      Wc2[j] = std::max(0.25, Wc2[j] + d);
      l1 += std::fabs(Wc2[j] - Wc[j]);
    }
    double f1 = fair_owa(Wc, spec).value(), f2 = fair_owa(Wc2, spec).value();
    if (cont.passed && std::fabs(f1 - f2) > 100.0 * l1 + 1e-12) {
      cont.passed = false;
      cont.counterexample = vec_str(Wc);
    }
    // midpoint concavity
    std::vector<double> V = random_vec(rng, p, true), M(p);
    for (int j = 0; j < p; ++j) M[j] = 0.5 * (W[j] + V[j]);
    ExtReal fw = fair_owa(W, spec), fv = fair_owa(V, spec), fm = fair_owa(M, spec);
    if (conc.passed && fw.finite() && fv.finite()) {
      if (fm.is_neg_inf() || fm.value() < 0.5 * (fw.value() + fv.value()) - 1e-9) {
        conc.passed = false;
        conc.counterexample = vec_str(W) + " / " + vec_str(V);
      }
    }
  }
  rep.entries = {sym, mono, cont, conc};
  for (const auto& e : rep.entries) rep.all_passed = rep.all_passed && e.passed;
  return rep;
}

}  // namespace fmclp
