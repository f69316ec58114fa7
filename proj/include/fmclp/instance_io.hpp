#pragma once

#include <cstdint>
#include <string>

#include "fmclp/types.hpp"

namespace fmclp {

struct LoadOptions {
  // Keep only the first max_points demand rows (0 = keep all). Applied after
  // normalization, so the rescale always reflects the complete file.
  int max_points = 0;
  // Min-max rescale every coordinate to [0,1]; a zero-range coordinate maps
  // to 0.5.
  bool normalize = false;
};

// CSV instance format: optional '#' comment lines (name/seed/normalized are
// stored there), then a header whose last column is `w`, then one row per
// demand point. Decimal point, UTF-8, LF. Candidate locations are the demand
// points themselves; instances with a separate candidate set are built in
// code.
Instance load_instance(const std::string& path, const LoadOptions& opts = {});
Instance parse_instance_csv(const std::string& text, const LoadOptions& opts = {},
                            const std::string& origin = "<string>");

std::string instance_to_csv(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Deterministic random instance: coordinates uniform in the unit square,
// weights uniform in (0,1). Same (n, d, seed) always yields a byte-identical
// file.
Instance gen_instance(int n, int d, std::uint64_t seed);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace fmclp
