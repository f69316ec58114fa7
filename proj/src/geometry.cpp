#include "fmclp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fmclp {

double distance(const Point& a, const Point& b, const NormSpec& norm) {
  if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
  if (a.dim() == 0) throw std::invalid_argument("distance: empty points");
  switch (norm.kind) {
    case NormSpec::Kind::Euclidean: {
      double s = 0;
      for (std::size_t l = 0; l < a.dim(); ++l) {
        double d = a[l] - b[l];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case NormSpec::Kind::L1: {
      double s = 0;
      for (std::size_t l = 0; l < a.dim(); ++l) s += std::fabs(a[l] - b[l]);
      return s;
    }
    case NormSpec::Kind::LInf: {
      double s = 0;
      for (std::size_t l = 0; l < a.dim(); ++l) s = std::max(s, std::fabs(a[l] - b[l]));
      return s;
    }
    case NormSpec::Kind::LTau: {
      double s = 0;
      for (std::size_t l = 0; l < a.dim(); ++l) s += std::pow(std::fabs(a[l] - b[l]), norm.tau);
      return std::pow(s, 1.0 / norm.tau);
    }
  }
  throw std::logic_error("distance: unknown norm");
}

bool covers(const Ball& ball, const Point& a, double tol) {
  return distance(ball.center, a, ball.norm) <= ball.radius * (1.0 + tol) * (1.0 + kFpGuard);
}

bool within_radius(const Point& a, const Point& c, double R, const NormSpec& norm) {
  return distance(a, c, norm) <= R * (1.0 + kRadiusTol) * (1.0 + kFpGuard);
}

namespace {

double sq_dist(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t l = 0; l < a.dim(); ++l) {
    double d = a[l] - b[l];
    s += d * d;
  }
  return s;
}

struct EBall {
  Point c;
  double r2 = -1;  // r2 < 0 covers nothing
  bool contains(const Point& p) const {
    if (r2 < 0) return false;
    return sq_dist(c, p) <= r2 * (1.0 + 1e-12) + 1e-300;
  }
};

/* Smallest ball with every point of B on its boundary: the circumsphere with
 * center in the affine hull of B. Solved from the Gram system relative to
 * B[0]; fails (returns false) when B is affinely dependent. */
bool ball_on_boundary(const std::vector<const Point*>& B, EBall& out) {
  const std::size_t m = B.size();
  if (m == 0) { out = EBall{}; return true; }
  const std::size_t d = B[0]->dim();
  if (m == 1) { out.c = *B[0]; out.r2 = 0; return true; }
  const std::size_t k = m - 1;
  std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
  double scale = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0;
      for (std::size_t l = 0; l < d; ++l)
        dot += ((*B[i + 1])[l] - (*B[0])[l]) * ((*B[j + 1])[l] - (*B[0])[l]);
      A[i][j] = 2.0 * dot;
      scale = std::max(scale, std::fabs(A[i][j]));
    }
    A[i][k] = sq_dist(*B[i + 1], *B[0]);
  }
  if (scale == 0) return false;
  for (std::size_t col = 0; col < k; ++col) {  // gaussian elimination, partial pivoting
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-10 * scale) return false;
    std::swap(A[piv], A[col]);
    for (std::size_t r = col + 1; r < k; ++r) {
      double f = A[r][col] / A[col][col];
      for (std::size_t cc = col; cc <= k; ++cc) A[r][cc] -= f * A[col][cc];
    }
  }
  std::vector<double> x(k);
  for (std::size_t ri = k; ri-- > 0;) {
    double s = A[ri][k];
    for (std::size_t cc = ri + 1; cc < k; ++cc) s -= A[ri][cc] * x[cc];
    x[ri] = s / A[ri][ri];
  }
  out.c = *B[0];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < d; ++l) out.c[l] += x[i] * ((*B[i + 1])[l] - (*B[0])[l]);
  out.r2 = sq_dist(out.c, *B[0]);
  return true;
}

/* Fallback for (near-)degenerate boundary sets: smallest circumsphere of a
 * subset of B that still covers all of B. |B| <= d+1 so enumeration is tiny. */
EBall ball_of_set(const std::vector<const Point*>& B) {
  EBall best;
  const std::size_t m = B.size();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<const Point*> sub;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) sub.push_back(B[i]);
    EBall cand;
    if (!ball_on_boundary(sub, cand)) continue;
    if (best.r2 >= 0 && cand.r2 >= best.r2) continue;
    bool all = true;
    for (std::size_t i = 0; i < m && all; ++i) all = cand.contains(*B[i]);
    if (all) best = cand;
  }
  if (best.r2 < 0) throw std::runtime_error("one_center: degenerate boundary set");
  return best;
}

EBall trivial_ball(const std::vector<const Point*>& B) {
  EBall b;
  if (ball_on_boundary(B, b)) return b;
  return ball_of_set(B);
}

/* Welzl, recursive move-to-front variant over pts[0..n). */
EBall welzl(std::vector<const Point*>& pts, std::size_t n, std::vector<const Point*>& boundary,
            std::size_t dim, std::vector<const Point*>* support) {
  EBall d = trivial_ball(boundary);
  if (boundary.size() == dim + 1) {
    if (support) *support = boundary;
    return d;
  }
  if (support) *support = boundary;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.contains(*pts[i])) continue;
    boundary.push_back(pts[i]);
    d = welzl(pts, i, boundary, dim, support);
    boundary.pop_back();
    const Point* moved = pts[i];
    for (std::size_t j = i; j > 0; --j) pts[j] = pts[j - 1];
    pts[0] = moved;
  }
  return d;
}

OneCenterResult one_center_euclidean(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  const std::size_t d = pts[0].dim();
  std::vector<const Point*> work(n);
  for (std::size_t i = 0; i < n; ++i) work[i] = &pts[i];
  std::mt19937_64 rng(0x5eed5eedULL);  // fixed seed: deterministic output
  for (std::size_t i = n; i-- > 1;) {
    std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(work[i], work[j]);
  }
  std::vector<const Point*> boundary;
  std::vector<const Point*> support_ptrs;
  EBall ball = welzl(work, n, boundary, d, &support_ptrs);
  OneCenterResult res;
  res.center = ball.c;
  res.radius = std::sqrt(std::max(0.0, ball.r2));
  for (const Point* sp : support_ptrs)
    res.support.push_back(static_cast<int>(sp - pts.data()));
  std::sort(res.support.begin(), res.support.end());
  if (res.support.empty() && n > 0) res.support.push_back(0);  // n == 1
  return res;
}

OneCenterResult one_center_linf(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  const std::size_t d = pts[0].dim();
  std::vector<double> lo(d), hi(d);
  std::vector<int> argmin(d, 0), argmax(d, 0);
  for (std::size_t l = 0; l < d; ++l) { lo[l] = hi[l] = pts[0][l]; }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t l = 0; l < d; ++l) {
      if (pts[i][l] < lo[l]) { lo[l] = pts[i][l]; argmin[l] = static_cast<int>(i); }
      if (pts[i][l] > hi[l]) { hi[l] = pts[i][l]; argmax[l] = static_cast<int>(i); }
    }
  OneCenterResult res;
  res.center.coords.resize(d);
  double r = 0;
  std::size_t widest = 0;
  for (std::size_t l = 0; l < d; ++l) {
    res.center[l] = 0.5 * (lo[l] + hi[l]);
    double half = 0.5 * (hi[l] - lo[l]);
    if (half > r) { r = half; widest = l; }
  }
  res.radius = r;
  res.support = {argmin[widest], argmax[widest]};
  std::sort(res.support.begin(), res.support.end());
  res.support.erase(std::unique(res.support.begin(), res.support.end()), res.support.end());
  return res;
}

}  // namespace

OneCenterResult one_center(const std::vector<Point>& pts, const NormSpec& norm) {
  if (pts.empty()) throw std::invalid_argument("one_center: empty point set");
  const std::size_t d = pts[0].dim();
  for (const auto& p : pts)
    if (p.dim() != d) throw std::invalid_argument("one_center: dimension mismatch");
  switch (norm.kind) {
    case NormSpec::Kind::Euclidean:
      return one_center_euclidean(pts);
    case NormSpec::Kind::LInf:
      return one_center_linf(pts);
    case NormSpec::Kind::L1: {
      if (d != 2) throw std::invalid_argument("one_center: L1 supported for d=2 only");
      // |dx| + |dy| = max(|dx+dy|, |dx-dy|): rotate 45 degrees onto LInf.
      std::vector<Point> rot(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i)
        rot[i] = point2(pts[i][0] + pts[i][1], pts[i][0] - pts[i][1]);
      OneCenterResult r = one_center_linf(rot);
      double u = r.center[0], v = r.center[1];
      r.center = point2(0.5 * (u + v), 0.5 * (u - v));
      return r;
    }
    case NormSpec::Kind::LTau:
      throw std::invalid_argument("one_center: general tau norms not supported");
  }
  throw std::logic_error("one_center: unknown norm");
}

bool cluster_feasible(const std::vector<int>& q, const Instance& inst, double R) {
  if (q.empty()) return true;
  if (!(R > 0)) throw std::invalid_argument("cluster_feasible: R must be positive");
  std::vector<Point> pts;
  pts.reserve(q.size());
  for (int i : q) {
    if (i < 0 || static_cast<std::size_t>(i) >= inst.size())
      throw std::out_of_range("cluster_feasible: index out of range");
    pts.push_back(inst.points[i]);
  }
  return one_center(pts, inst.norm).radius <= R * (1.0 + kRadiusTol) * (1.0 + kFpGuard);
}

std::vector<std::vector<int>> incompatible_sets(const Instance& inst, double R, int size,
                                                bool minimal_only) {
  inst.validate();
  if (!(R > 0)) throw std::invalid_argument("incompatible_sets: R must be positive");
  if (size < 2) throw std::invalid_argument("incompatible_sets: size must be >= 2");
  const int n = static_cast<int>(inst.size());
  std::vector<std::vector<int>> found;
  std::vector<int> combo;
  // In minimal mode a set containing an already-found (smaller, infeasible)
  // set is implied by it and suppressed.
  auto contains_found = [&](const std::vector<int>& s) {
    for (const auto& f : found) {
      if (f.size() >= s.size()) continue;
      bool sub = true;
      std::size_t si = 0;
      for (int v : f) {
        while (si < s.size() && s[si] < v) ++si;
        if (si == s.size() || s[si] != v) { sub = false; break; }
      }
      if (sub) return true;
    }
    return false;
  };
  const int lo = minimal_only ? 2 : size;
  for (int sz = lo; sz <= size && sz <= n; ++sz) {
    combo.assign(sz, 0);
    for (int i = 0; i < sz; ++i) combo[i] = i;
    while (true) {
      if ((!minimal_only || !contains_found(combo)) && !cluster_feasible(combo, inst, R))
        found.push_back(combo);
      int pos = sz - 1;
      while (pos >= 0 && combo[pos] == n - sz + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (int i = pos + 1; i < sz; ++i) combo[i] = combo[i - 1] + 1;
    }
  }
  return found;
}

std::vector<Point> candidate_locations(const Instance& inst, double R) {
  inst.validate();
  if (inst.dim() != 2 || inst.norm.kind != NormSpec::Kind::Euclidean)
    throw std::invalid_argument("candidate_locations: planar Euclidean instances only");
  if (!(R > 0)) throw std::invalid_argument("candidate_locations: R must be positive");
  const double Ri = R * (1.0 + kRadiusTol);  // inflated: tangent pairs still meet
  std::vector<Point> out = inst.points;
  const int n = static_cast<int>(inst.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = inst.points[j][0] - inst.points[i][0];
      double dy = inst.points[j][1] - inst.points[i][1];
      double dd = std::sqrt(dx * dx + dy * dy);
      if (dd == 0 || dd > 2 * Ri) continue;
      double mx = 0.5 * (inst.points[i][0] + inst.points[j][0]);
      double my = 0.5 * (inst.points[i][1] + inst.points[j][1]);
      double h2 = Ri * Ri - 0.25 * dd * dd;
      double h = h2 > 0 ? std::sqrt(h2) : 0.0;
      double px = -dy / dd, py = dx / dd;
      out.push_back(point2(mx + h * px, my + h * py));
      if (h > 0) out.push_back(point2(mx - h * px, my - h * py));
    }
  std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  auto near = [](const Point& a, const Point& b) {
    return std::fabs(a[0] - b[0]) <= 1e-12 && std::fabs(a[1] - b[1]) <= 1e-12;
  };
  out.erase(std::unique(out.begin(), out.end(), near), out.end());
  return out;
}

}  // namespace fmclp
