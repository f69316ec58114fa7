#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmclp/fairness.hpp"
#include "fmclp/geometry.hpp"
#include "fmclp/types.hpp"

namespace fmclp {

enum class SolveStatus { Optimal, Feasible, DegenerateMinusInfinity };
const char* status_name(SolveStatus s);

enum class SolveMode { BruteForce, BranchBound, CandidateSet, RowGeneration };
enum class SolveSpace { Discrete, ContinuousFDS };

struct SolveOptions {
  double time_limit = 7200.0;        // wall-clock seconds for one solve call
  double tol = 0.0;                  // accepted relative optimality gap
  SolveMode mode = SolveMode::BranchBound;
  long long brute_cap = 10'000'000;  // brute_force state budget
};

/* Optimal split of the covered demand among fixed open facilities.
 * W is reported in the order the facilities were given (not sorted). */
struct AllocationResult {
  std::vector<int> assignment;  // per demand point: facility position in the input list, or -1
  std::vector<double> W;
  ExtReal objective;            // fair_owa(W, spec)
};

AllocationResult allocate(const std::vector<Point>& open_facilities, const Instance& inst,
                          const FairnessSpec& spec, double R);

/* One row-generation separation: cluster Q (members) of slot `slot` was not
 * coverable by a single facility; the triggering assignment is recorded so the
 * violation can be re-checked. */
struct SeparationEvent {
  int round = 0;
  int slot = 0;
  std::vector<int> members;
  std::vector<int> incumbent_assignment;
};

struct CoverageSolution {
  SolveStatus status = SolveStatus::Optimal;
  ExtReal objective;
  std::vector<int> chosen;            // candidate indices in slot order; empty for row generation
  std::vector<Point> sites;           // facility positions in slot order
  std::vector<double> W;              // covered weight per slot, nondecreasing
  std::vector<int> assignment;        // per demand point: slot in [0,p) or -1
  double gap = 0.0;                   // (UB-LB)/max(|UB|,1e-12); 0 when Optimal
  std::string witness;                // set when status is DegenerateMinusInfinity
  std::vector<SeparationEvent> separation_log;
  long long nodes = 0;
  double seconds = 0.0;
  std::string instance_hash;
};

/* Exact solve over the instance's finite candidate set. Optimal ties are
 * broken toward the lexicographically smallest candidate index set. */
CoverageSolution solve_discrete(const Instance& inst, const FairnessSpec& spec, int p, double R,
                                const SolveOptions& opts = {});

/* Continuous planar solve through the finite dominating set
 * geometry::candidate_locations; facility positions are post-processed to the
 * 1-center of their assigned cluster. */
CoverageSolution solve_continuous_fds(const Instance& inst, const FairnessSpec& spec, int p,
                                      double R, const SolveOptions& opts = {});

/* Continuous planar solve by row generation: a geometry-free master assignment
 * problem plus cluster-feasibility cuts, warm-started with every infeasible
 * triple. Facility positions are recovered as cluster 1-centers. */
CoverageSolution solve_row_generation(const Instance& inst, const FairnessSpec& spec, int p,
                                      double R, const SolveOptions& opts = {});

/* Exhaustive oracle: every size-p candidate subset crossed with every
 * assignment of coverable points to their coverers. Throws when the state
 * count exceeds opts.brute_cap. */
CoverageSolution brute_force(const Instance& inst, const FairnessSpec& spec, int p, double R,
                             SolveSpace space, const SolveOptions& opts = {});

}  // namespace fmclp
