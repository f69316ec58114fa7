#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmclp/metrics.hpp"

namespace fmclp {

const char* space_name(SolveSpace s);      // "disc" / "cont"
SolveSpace parse_space(const std::string& s);

// One sweep over (n, p, R, space, family, alpha). The C family is paired with
// alpha = 0 only: its result does not depend on alpha, so other pairings are
// never enumerated.
struct ExperimentGrid {
  std::vector<int> n_values;
  std::vector<int> p_values;
  std::vector<double> R_values;
  std::vector<OwaFamily> families;
  std::vector<Rational> alphas;
  std::vector<SolveSpace> spaces;
  double time_limit = 7200.0;
  std::uint64_t seed = 0;  // recorded in the output metadata
  int threads = 0;         // 0 = hardware concurrency; FMCLP_THREADS overrides

  void validate() const;
  // (non-C families) * |alphas| + (1 if C is present): cells per
  // (n, p, R, space) combination.
  long long cells_per_combo() const;
  long long total_cells() const;
};

struct ResultRow {
  std::string instance;
  int n = 0;
  int p = 0;
  double R = 0.0;
  std::string space;
  std::string family;
  std::string alpha;      // exact rational text
  std::string status;     // solver status, or "Error"
  std::string objective;  // shortest round-trip number, "-inf", or empty on error
  std::optional<double> coverage_pct;
  std::vector<double> W;
  std::optional<double> pof;
  std::optional<double> poe;
  std::optional<double> gini;
  double cpu_seconds = 0.0;  // wall clock of the solve call only
  double gap = 0.0;
  bool pwl = false;  // true only for results obtained through an exported model
  std::string error;
};

std::string result_csv_header();
std::string result_csv_row(const ResultRow& row);
std::vector<ResultRow> parse_result_csv(const std::string& text,
                                        const std::string& origin = "<string>");
std::vector<ResultRow> read_result_csv(const std::string& path);

// Runs every cell of the grid on prefixes of `master` (first-n truncation,
// candidates = the truncated demand points). Baselines are solved once per
// (n, p, R, space) combination and shared by its cells. Cells run on a worker
// pool; rows come back in grid order and per-cell failures are recorded in
// the row, never thrown. When out_path is nonempty the rows are also written
// there as CSV with metadata comment lines.
std::vector<ResultRow> run_grid(const ExperimentGrid& grid, const Instance& master,
                                const std::string& out_path);

// Two plot-ready tables: optimality-gap buckets per (n, p, space) and average
// PoF / PoE / Gini per (family, alpha). Row order of the input never affects
// either table.
struct Summary {
  std::string gap_csv;
  std::string fairness_csv;
};
Summary summarize(const std::vector<ResultRow>& rows);

// Key=value grid configuration (one pair per line, '#' comments). Keys are
// documented in the README.
struct GridConfig {
  ExperimentGrid grid;
  std::string instance_path;  // load this file...
  int gen_n = 0;              // ...or generate (gen_n > 0 wins)
  int gen_d = 2;
  std::uint64_t gen_seed = 0;
  bool normalize = false;
  std::string out = "results.csv";
};
GridConfig parse_grid_config(const std::string& text, const std::string& origin = "<config>");

}  // namespace fmclp
