#pragma once

#include <cstddef>
#include <vector>

#include "bdreg/core/grid.hpp"

namespace bdreg {

/// 3D scalar image. Values are 32-bit floats, stored x-fastest row-major
/// (offset = (k*ny + j)*nx + i). Treated as immutable after construction by
/// every public operation in the library.
struct Volume3 {
  Grid3 grid;
  std::vector<float> data;

  float at(int i, int j, int k) const { return data[grid.offset(i, j, k)]; }
  float &at(int i, int j, int k) { return data[grid.offset(i, j, k)]; }
  std::size_t size() const { return data.size(); }
};

/// Per-voxel displacement field in mm, one scalar array per component,
/// same layout and precision as Volume3. Convention: u maps a point in the
/// fixed (TP2) domain to its corresponding point in the moving (TP1) domain,
/// i.e. pull-back warping samples the moving image at x + u(x).
struct VectorField3 {
  Grid3 grid;
  std::vector<float> ux, uy, uz;

  Vec3 at(int i, int j, int k) const {
    const std::size_t o = grid.offset(i, j, k);
    return {ux[o], uy[o], uz[o]};
  }
  std::size_t size() const { return ux.size(); }
};

/// Validating constructor: data length must equal the grid's voxel count and
/// every value must be finite. The volume owns a copy of the data.
Volume3 make_volume(const Grid3 &grid, std::vector<float> data);

/// Same contract as make_volume, for 3-component fields.
VectorField3 make_field(const Grid3 &grid, std::vector<float> ux, std::vector<float> uy,
                        std::vector<float> uz);

Volume3 make_constant_volume(const Grid3 &grid, float value);
VectorField3 make_zero_field(const Grid3 &grid);

/// Throws std::invalid_argument when any value is non-finite.
void check_finite(const std::vector<float> &values, const char *what);

} // namespace bdreg
