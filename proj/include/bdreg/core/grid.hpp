#pragma once

#include <array>
#include <cstddef>

#include "bdreg/core/vec3.hpp"

namespace bdreg {

/// Regular 3D voxel lattice with physical spacing and origin, both in mm.
/// Voxel (i,j,k) sits at origin + (i*sx, j*sy, k*sz); this mapping is the
/// single source of truth for mm <-> voxel conversion everywhere.
struct Grid3 {
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
  }

  std::size_t offset(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i;
  }

  Vec3 index_to_mm(double i, double j, double k) const {
    return {origin[0] + i * spacing[0], origin[1] + j * spacing[1], origin[2] + k * spacing[2]};
  }

  Vec3 mm_to_index(const Vec3 &p) const {
    return {(p.x - origin[0]) / spacing[0], (p.y - origin[1]) / spacing[1],
            (p.z - origin[2]) / spacing[2]};
  }

  bool operator==(const Grid3 &) const = default;
};

/// Throws std::invalid_argument when dims < 1 or spacing <= 0.
void validate_grid(const Grid3 &grid);

/// Coarsened copy of `grid`: dims divided by `factor` (rounded, min 2 where
/// the input allows), spacing stretched so the physical extent is preserved.
/// factor == 1 returns `grid` unchanged.
Grid3 coarsen_grid(const Grid3 &grid, int factor);

} // namespace bdreg
