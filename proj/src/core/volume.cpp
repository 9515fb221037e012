#include "bdreg/core/volume.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdreg {

void check_finite(const std::vector<float> &values, const char *what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument(std::string(what) + ": non-finite value at linear index " +
                                  std::to_string(i));
  }
}

Volume3 make_volume(const Grid3 &grid, std::vector<float> data) {
  validate_grid(grid);
  if (data.size() != grid.voxel_count())
    throw std::invalid_argument("volume data length " + std::to_string(data.size()) +
                                " does not match grid voxel count " +
                                std::to_string(grid.voxel_count()));
  check_finite(data, "volume data");
  return Volume3{grid, std::move(data)};
}

VectorField3 make_field(const Grid3 &grid, std::vector<float> ux, std::vector<float> uy,
                        std::vector<float> uz) {
  validate_grid(grid);
  const std::size_t n = grid.voxel_count();
  if (ux.size() != n || uy.size() != n || uz.size() != n)
    throw std::invalid_argument("field component length does not match grid voxel count " +
                                std::to_string(n));
  check_finite(ux, "field ux");
  check_finite(uy, "field uy");
  check_finite(uz, "field uz");
  return VectorField3{grid, std::move(ux), std::move(uy), std::move(uz)};
}

Volume3 make_constant_volume(const Grid3 &grid, float value) {
  validate_grid(grid);
  return Volume3{grid, std::vector<float>(grid.voxel_count(), value)};
}

VectorField3 make_zero_field(const Grid3 &grid) {
  validate_grid(grid);
  const std::size_t n = grid.voxel_count();
  return VectorField3{grid, std::vector<float>(n, 0.0f), std::vector<float>(n, 0.0f),
                      std::vector<float>(n, 0.0f)};
}

} // namespace bdreg
