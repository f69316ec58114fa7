#pragma once

#include <vector>

#include "fmclp/types.hpp"

namespace fmclp {

/* Relative tolerance used on every radius comparison in the library. */
inline constexpr double kRadiusTol = 1e-9;

/* Rounding guard stacked on top of kRadiusTol. Candidate locations sit at
 * distance exactly R*(1+kRadiusTol) from the points whose circles define
 * them; recomputing that distance can land a few ulps above the threshold,
 * which would silently drop the defining points from the candidate's
 * coverage. Far below kRadiusTol, so the semantic tolerance is unchanged. */
inline constexpr double kFpGuard = 1e-12;

/* The library-wide coverage predicate: distance(a, c) <= R with tolerance. */
bool within_radius(const Point& a, const Point& c, double R, const NormSpec& norm);

struct Ball {
  Point center;
  double radius = 0;
  NormSpec norm = NormSpec::euclidean();
};

struct OneCenterResult {
  Point center;
  double radius = 0;
  std::vector<int> support;  // indices into the input list, size <= d+1 for Euclidean
};

double distance(const Point& a, const Point& b, const NormSpec& norm);

/* True iff distance(ball.center, a) <= ball.radius * (1 + tol). */
bool covers(const Ball& ball, const Point& a, double tol = kRadiusTol);

/* Minimum enclosing ball. Supported: Euclidean (any d), LInf (any d),
 * L1 (d = 2 only, via the 45-degree rotation onto LInf). */
OneCenterResult one_center(const std::vector<Point>& pts, const NormSpec& norm);

/* True iff the points indexed by q all fit in one ball of radius R(1+kRadiusTol). */
bool cluster_feasible(const std::vector<int>& q, const Instance& inst, double R);

/* Index sets that cannot share one facility, lexicographic order.
 * Default: every infeasible subset of exactly `size` points (size = d+1 is
 * the natural choice in the plane; any larger set is infeasible iff one of
 * these is, so the list is a complete cut pool at that size).
 * minimal_only: instead return the minimal infeasible sets of size <= size;
 * a set is emitted only if every proper subset is feasible. */
std::vector<std::vector<int>> incompatible_sets(const Instance& inst, double R, int size = 3,
                                                bool minimal_only = false);

/* Finite dominating set for planar Euclidean coverage: the demand points plus
 * every intersection point of the circles of radius R*(1+kRadiusTol) around
 * pairs of demand points. Deduplicated, sorted lexicographically. */
std::vector<Point> candidate_locations(const Instance& inst, double R);

}  // namespace fmclp
