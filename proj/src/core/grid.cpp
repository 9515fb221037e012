#include "bdreg/core/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdreg {

void validate_grid(const Grid3 &grid) {
  for (int a = 0; a < 3; ++a) {
    if (grid.dims[a] < 1)
      throw std::invalid_argument("grid dims must be >= 1, got " + std::to_string(grid.dims[a]) +
                                  " on axis " + std::to_string(a));
    if (!(grid.spacing[a] > 0.0) || !std::isfinite(grid.spacing[a]))
      throw std::invalid_argument("grid spacing must be > 0 on axis " + std::to_string(a));
    if (!std::isfinite(grid.origin[a]))
      throw std::invalid_argument("grid origin must be finite on axis " + std::to_string(a));
  }
}

Grid3 coarsen_grid(const Grid3 &grid, int factor) {
  if (factor <= 1)
    return grid;
  Grid3 out = grid;
  for (int a = 0; a < 3; ++a) {
    const int n = grid.dims[a];
    int m = static_cast<int>(std::llround(static_cast<double>(n) / factor));
    m = std::max(m, std::min(n, 2));
    out.dims[a] = m;
    if (m > 1)
      out.spacing[a] = grid.spacing[a] * static_cast<double>(n - 1) / static_cast<double>(m - 1);
  }
  return out;
}

} // namespace bdreg
