#pragma once

#include "bdreg/core/volume.hpp"

namespace bdreg {

enum class Interp { trilinear, cubic_bspline };

/// Replaces voxel values by interpolating cubic B-spline coefficients
/// (separable recursive prefilter, mirror boundaries) so that evaluating the
/// spline at the grid nodes reproduces the stored values.
Volume3 bspline_prefilter(const Volume3 &vol);

/// Trilinear sample at a continuous voxel coordinate (clamped to the grid).
float sample_trilinear_index(const Volume3 &vol, const Vec3 &idx);

/// Cubic B-spline evaluation of a prefiltered coefficient volume at a
/// continuous voxel coordinate (position clamped, mirror tap indexing).
float sample_bspline_index(const Volume3 &coeffs, const Vec3 &idx);

/// Sampler bound to one volume and one mode; prefilters once when cubic.
/// Out-of-domain points clamp to the boundary.
class Sampler {
public:
  Sampler(const Volume3 &vol, Interp mode);

  float at_mm(const Vec3 &p_mm) const;
  float at_index(const Vec3 &idx) const;

private:
  const Volume3 *vol_;
  Volume3 coeffs_; // empty in trilinear mode
  Interp mode_;
};

/// One-shot sample in physical coordinates. Cubic mode prefilters the whole
/// volume per call; use Sampler when sampling many points.
float sample(const Volume3 &vol, const Vec3 &p_mm, Interp mode);

/// Output voxel value = sample(vol, physical position of the target voxel).
/// An identical target grid returns the volume unchanged.
Volume3 resample_to_grid(const Volume3 &vol, const Grid3 &target, Interp mode);

/// Separable Gaussian blur with per-axis sigma in mm; kernels are clipped at
/// the boundary and renormalized so constants are preserved. Non-positive
/// sigmas leave the corresponding axis untouched.
Volume3 gaussian_smooth(const Volume3 &vol, const Vec3 &sigma_mm);

/// Continuous index of p_mm with near-integer snapping (1e-9 voxel), so that
/// positions computed from index_to_mm land back on exact nodes.
Vec3 mm_to_continuous_index(const Grid3 &grid, const Vec3 &p_mm);

} // namespace bdreg
