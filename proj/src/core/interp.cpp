#include "bdreg/core/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bdreg {

namespace {

inline double clampd(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Reflect an out-of-range tap index into [0, n-1] (period 2(n-1)).
inline int mirror_index(int i, int n) {
  if (n == 1)
    return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i >= n ? period - i : i;
}

inline void snap_to_node(double &v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(r)))
    v = r;
}

// Causal-filter start value for the cubic B-spline prefilter, mirror
// boundary. Exact closed form when the line is short enough, truncated
// geometric series otherwise.
double causal_init(const double *c, int n, double z) {
  const double tol = 1e-14;
  const int horizon = static_cast<int>(std::ceil(std::log(tol) / std::log(std::abs(z))));
  if (horizon < n) {
    double zn = z;
    double sum = c[0];
    for (int i = 1; i < horizon; ++i) {
      sum += zn * c[i];
      zn *= z;
    }
    return sum;
  }
  double zn = z;
  double iz = 1.0 / z;
  const double z2n = std::pow(z, n - 1);
  double sum = c[0] + z2n * c[n - 1];
  double z2ni = z2n * z2n * iz;
  for (int i = 1; i < n - 1; ++i) {
    sum += (zn + z2ni) * c[i];
    zn *= z;
    z2ni *= iz;
  }
  return sum / (1.0 - z2n * z2n);
}

// In-place conversion of one line of samples to interpolating cubic B-spline
// coefficients (pole sqrt(3)-2, gain 6).
void line_to_coeffs(double *c, int n) {
  if (n == 1)
    return;
  const double z = std::sqrt(3.0) - 2.0;
  for (int i = 0; i < n; ++i)
    c[i] *= 6.0;
  c[0] = causal_init(c, n, z);
  for (int i = 1; i < n; ++i)
    c[i] += z * c[i - 1];
  c[n - 1] = (z / (z * z - 1.0)) * (z * c[n - 2] + c[n - 1]);
  for (int i = n - 2; i >= 0; --i)
    c[i] = z * (c[i + 1] - c[i]);
}

// Cubic B-spline weights for taps floor(v)-1 .. floor(v)+2, f = frac(v).
inline void bspline_weights(double f, double w[4]) {
  const double f2 = f * f;
  const double f3 = f2 * f;
  w[0] = (1.0 - 3.0 * f + 3.0 * f2 - f3) / 6.0;
  w[1] = (4.0 - 6.0 * f2 + 3.0 * f3) / 6.0;
  w[2] = (1.0 + 3.0 * f + 3.0 * f2 - 3.0 * f3) / 6.0;
  w[3] = f3 / 6.0;
}

template <typename LineFn> void for_each_line(const Grid3 &g, int axis, LineFn &&fn) {
  const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
  if (axis == 0) {
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        fn(g.offset(0, j, k), std::size_t(1), nx);
  } else if (axis == 1) {
    for (int k = 0; k < nz; ++k)
      for (int i = 0; i < nx; ++i)
        fn(g.offset(i, 0, k), static_cast<std::size_t>(nx), ny);
  } else {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        fn(g.offset(i, j, 0), static_cast<std::size_t>(nx) * ny, nz);
  }
}

} // namespace

Volume3 bspline_prefilter(const Volume3 &vol) {
  std::vector<double> buf(vol.data.begin(), vol.data.end());
  std::vector<double> line;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = vol.grid.dims[axis];
    if (n < 2)
      continue;
    line.resize(n);
    for_each_line(vol.grid, axis, [&](std::size_t base, std::size_t stride, int len) {
      for (int i = 0; i < len; ++i)
        line[i] = buf[base + i * stride];
      line_to_coeffs(line.data(), len);
      for (int i = 0; i < len; ++i)
        buf[base + i * stride] = line[i];
    });
  }
  Volume3 out;
  out.grid = vol.grid;
  out.data.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    out.data[i] = static_cast<float>(buf[i]);
  return out;
}

float sample_trilinear_index(const Volume3 &vol, const Vec3 &idx) {
  const auto &d = vol.grid.dims;
  double cx = clampd(idx.x, 0.0, d[0] - 1.0);
  double cy = clampd(idx.y, 0.0, d[1] - 1.0);
  double cz = clampd(idx.z, 0.0, d[2] - 1.0);
  int i0 = std::min(static_cast<int>(cx), d[0] - 2);
  int j0 = std::min(static_cast<int>(cy), d[1] - 2);
  int k0 = std::min(static_cast<int>(cz), d[2] - 2);
  i0 = std::max(i0, 0);
  j0 = std::max(j0, 0);
  k0 = std::max(k0, 0);
  const double fx = d[0] > 1 ? cx - i0 : 0.0;
  const double fy = d[1] > 1 ? cy - j0 : 0.0;
  const double fz = d[2] > 1 ? cz - k0 : 0.0;
  const int i1 = std::min(i0 + 1, d[0] - 1);
  const int j1 = std::min(j0 + 1, d[1] - 1);
  const int k1 = std::min(k0 + 1, d[2] - 1);

  const double v000 = vol.at(i0, j0, k0), v100 = vol.at(i1, j0, k0);
  const double v010 = vol.at(i0, j1, k0), v110 = vol.at(i1, j1, k0);
  const double v001 = vol.at(i0, j0, k1), v101 = vol.at(i1, j0, k1);
  const double v011 = vol.at(i0, j1, k1), v111 = vol.at(i1, j1, k1);

  const double c00 = v000 + fx * (v100 - v000);
  const double c10 = v010 + fx * (v110 - v010);
  const double c01 = v001 + fx * (v101 - v001);
  const double c11 = v011 + fx * (v111 - v011);
  const double c0 = c00 + fy * (c10 - c00);
  const double c1 = c01 + fy * (c11 - c01);
  return static_cast<float>(c0 + fz * (c1 - c0));
}

float sample_bspline_index(const Volume3 &coeffs, const Vec3 &idx) {
  const auto &d = coeffs.grid.dims;
  const double cx = clampd(idx.x, 0.0, d[0] - 1.0);
  const double cy = clampd(idx.y, 0.0, d[1] - 1.0);
  const double cz = clampd(idx.z, 0.0, d[2] - 1.0);
  const int bx = static_cast<int>(std::floor(cx));
  const int by = static_cast<int>(std::floor(cy));
  const int bz = static_cast<int>(std::floor(cz));
  double wx[4], wy[4], wz[4];
  bspline_weights(cx - bx, wx);
  bspline_weights(cy - by, wy);
  bspline_weights(cz - bz, wz);

  int ix[4], iy[4], iz[4];
  for (int t = 0; t < 4; ++t) {
    ix[t] = mirror_index(bx - 1 + t, d[0]);
    iy[t] = mirror_index(by - 1 + t, d[1]);
    iz[t] = mirror_index(bz - 1 + t, d[2]);
  }

  double acc = 0.0;
  for (int c = 0; c < 4; ++c) {
    double accy = 0.0;
    for (int b = 0; b < 4; ++b) {
      double accx = 0.0;
      const std::size_t row = coeffs.grid.offset(0, iy[b], iz[c]);
      for (int a = 0; a < 4; ++a)
        accx += wx[a] * coeffs.data[row + ix[a]];
      accy += wy[b] * accx;
    }
    acc += wz[c] * accy;
  }
  return static_cast<float>(acc);
}

Vec3 mm_to_continuous_index(const Grid3 &grid, const Vec3 &p_mm) {
  Vec3 c = grid.mm_to_index(p_mm);
  snap_to_node(c.x);
  snap_to_node(c.y);
  snap_to_node(c.z);
  return c;
}

Sampler::Sampler(const Volume3 &vol, Interp mode) : vol_(&vol), mode_(mode) {
  if (mode_ == Interp::cubic_bspline)
    coeffs_ = bspline_prefilter(vol);
}

float Sampler::at_index(const Vec3 &idx) const {
  if (mode_ == Interp::trilinear)
    return sample_trilinear_index(*vol_, idx);
  return sample_bspline_index(coeffs_, idx);
}

float Sampler::at_mm(const Vec3 &p_mm) const {
  return at_index(mm_to_continuous_index(vol_->grid, p_mm));
}

float sample(const Volume3 &vol, const Vec3 &p_mm, Interp mode) {
  return Sampler(vol, mode).at_mm(p_mm);
}

Volume3 resample_to_grid(const Volume3 &vol, const Grid3 &target, Interp mode) {
  validate_grid(target);
  if (target == vol.grid)
    return vol;
  const Sampler s(vol, mode);
  Volume3 out;
  out.grid = target;
  out.data.resize(target.voxel_count());
  std::size_t o = 0;
  for (int k = 0; k < target.dims[2]; ++k)
    for (int j = 0; j < target.dims[1]; ++j)
      for (int i = 0; i < target.dims[0]; ++i, ++o) {
        const Vec3 p = target.index_to_mm(i, j, k);
        out.data[o] = s.at_mm(p);
      }
  return out;
}

Volume3 gaussian_smooth(const Volume3 &vol, const Vec3 &sigma_mm) {
  const double sig[3] = {sigma_mm.x, sigma_mm.y, sigma_mm.z};
  std::vector<double> buf(vol.data.begin(), vol.data.end());
  std::vector<double> tmp;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = vol.grid.dims[axis];
    const double sv = sig[axis] / vol.grid.spacing[axis]; // sigma in voxels
    if (sv <= 0.0 || n < 2)
      continue;
    const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sv)));
    std::vector<double> kernel(2 * r + 1);
    for (int t = -r; t <= r; ++t)
      kernel[t + r] = std::exp(-0.5 * (t / sv) * (t / sv));
    tmp.resize(n);
    for_each_line(vol.grid, axis, [&](std::size_t base, std::size_t stride, int len) {
      for (int i = 0; i < len; ++i) {
        double acc = 0.0, wsum = 0.0;
        const int lo = std::max(-r, -i);
        const int hi = std::min(r, len - 1 - i);
        for (int t = lo; t <= hi; ++t) {
          const double w = kernel[t + r];
          acc += w * buf[base + (i + t) * stride];
          wsum += w;
        }
        tmp[i] = acc / wsum;
      }
      for (int i = 0; i < len; ++i)
        buf[base + i * stride] = tmp[i];
    });
  }
  Volume3 out;
  out.grid = vol.grid;
  out.data.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    out.data[i] = static_cast<float>(buf[i]);
  return out;
}

} // namespace bdreg
