#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"

#include "bdreg/core/interp.hpp"
#include "bdreg/core/volume.hpp"
#include "test_util.hpp"

using namespace bdreg;
using namespace bdreg::testutil;

TEST_CASE("make_volume validates its input") {
  Grid3 g = unit_grid(2, 1, 1);

  SUBCASE("minimal construction") {
    auto v = make_volume(g, {1.0f, 2.0f});
    CHECK(v.at(0, 0, 0) == 1.0f);
    CHECK(v.at(1, 0, 0) == 2.0f);
  }
  SUBCASE("owns a copy of the data") {
    std::vector<float> src{1.0f, 2.0f};
    auto v = make_volume(g, src);
    src[0] = 99.0f;
    CHECK(v.at(0, 0, 0) == 1.0f);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(make_volume(g, {1.0f, 2.0f, 3.0f}), std::invalid_argument);
  }
  SUBCASE("non-finite input") {
    CHECK_THROWS_AS(make_volume(g, {1.0f, std::numeric_limits<float>::quiet_NaN()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_volume(g, {1.0f, std::numeric_limits<float>::infinity()}),
                    std::invalid_argument);
  }
  SUBCASE("bad grid") {
    Grid3 bad = g;
    bad.spacing[1] = 0.0;
    CHECK_THROWS_AS(make_volume(bad, {1.0f, 2.0f}), std::invalid_argument);
    bad = g;
    bad.dims[0] = 0;
    CHECK_THROWS_AS(make_volume(bad, {}), std::invalid_argument);
  }
}

TEST_CASE("mm <-> voxel round trip recovers indices exactly") {
  Grid3 g;
  g.dims = {7, 5, 3};
  g.spacing = {1.25, 0.7, 2.0};
  g.origin = {-3.5, 10.0, 0.25};
  for (int k = 0; k < g.dims[2]; ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const Vec3 p = g.index_to_mm(i, j, k);
        const Vec3 c = mm_to_continuous_index(g, p);
        CHECK(c.x == static_cast<double>(i));
        CHECK(c.y == static_cast<double>(j));
        CHECK(c.z == static_cast<double>(k));
      }
}

TEST_CASE("trilinear sampling") {
  Rng rng(42);
  Grid3 g;
  g.dims = {6, 5, 4};
  g.spacing = {1.5, 1.0, 2.5};
  g.origin = {3.0, -1.0, 2.0};
  const Volume3 v = random_volume(g, rng);

  SUBCASE("exact at grid nodes") {
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i)
          CHECK(sample(v, g.index_to_mm(i, j, k), Interp::trilinear) == v.at(i, j, k));
  }
  SUBCASE("linear midpoint") {
    Grid3 line = unit_grid(2, 1, 1);
    auto lv = make_volume(line, {1.0f, 3.0f});
    CHECK(sample(lv, {0.5, 0.0, 0.0}, Interp::trilinear) == doctest::Approx(2.0));
  }
  SUBCASE("exact on linear ramps at interior points") {
    const Volume3 ramp = volume_from_fn(g, [](const Vec3 &p) { return 0.5 * p.x - 0.25 * p.y + p.z; });
    Rng prng(7);
    for (int t = 0; t < 200; ++t) {
      const Vec3 idx{prng.uniform(0.0, g.dims[0] - 1.0), prng.uniform(0.0, g.dims[1] - 1.0),
                     prng.uniform(0.0, g.dims[2] - 1.0)};
      const Vec3 p = g.index_to_mm(idx.x, idx.y, idx.z);
      const double expect = 0.5 * p.x - 0.25 * p.y + p.z;
      CHECK(sample(ramp, p, Interp::trilinear) ==
            doctest::Approx(expect).epsilon(1e-5));
    }
  }
  SUBCASE("clamps outside the grid") {
    const Vec3 below = g.index_to_mm(-5.0, -2.0, -1.0);
    const Vec3 above = g.index_to_mm(20.0, 10.0, 9.0);
    CHECK(sample(v, below, Interp::trilinear) == v.at(0, 0, 0));
    CHECK(sample(v, above, Interp::trilinear) ==
          v.at(g.dims[0] - 1, g.dims[1] - 1, g.dims[2] - 1));
  }
}

TEST_CASE("cubic B-spline sampling") {
  SUBCASE("node identity after prefiltering") {
    Rng rng(11);
    Grid3 g;
    g.dims = {8, 7, 5};
    g.spacing = {1.0, 1.3, 0.8};
    g.origin = {0.0, 2.0, -1.0};
    const Volume3 v = random_volume(g, rng, 0.5f, 2.0f);
    const Sampler s(v, Interp::cubic_bspline);
    for (int k = 0; k < g.dims[2]; ++k)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int i = 0; i < g.dims[0]; ++i) {
          const double stored = v.at(i, j, k);
          const double got = s.at_mm(g.index_to_mm(i, j, k));
          CHECK(std::abs(got - stored) <= 1e-4 * std::abs(stored));
        }
  }
  SUBCASE("reproduces a linear ramp between nodes") {
    Grid3 g = unit_grid(16, 3, 3);
    const Volume3 ramp = volume_from_fn(g, [](const Vec3 &p) { return p.x; });
    // direct polynomial evaluation is the oracle: f(x) = x
    const double got = sample(ramp, {2.37, 1.0, 1.0}, Interp::cubic_bspline);
    CHECK(got == doctest::Approx(2.37).epsilon(1e-4));
  }
  SUBCASE("constant volume is reproduced everywhere") {
    Grid3 g = unit_grid(5, 5, 5);
    const Volume3 c = make_constant_volume(g, 3.25f);
    const Sampler s(c, Interp::cubic_bspline);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
      const Vec3 p{rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)};
      CHECK(s.at_mm(p) == doctest::Approx(3.25).epsilon(1e-6));
    }
  }
}

TEST_CASE("resample_to_grid") {
  Rng rng(5);
  Grid3 g;
  g.dims = {8, 8, 6};
  g.spacing = {1.0, 1.0, 1.5};
  g.origin = {0.0, 0.0, 0.0};
  const Volume3 v = random_volume(g, rng);

  SUBCASE("identity resample is bit-identical") {
    const Volume3 r = resample_to_grid(v, g, Interp::trilinear);
    CHECK(r.data == v.data);
  }
  SUBCASE("constants are reproduced on any grid") {
    const Volume3 c = make_constant_volume(g, 7.5f);
    Grid3 t;
    t.dims = {5, 9, 4};
    t.spacing = {1.7, 0.6, 2.0};
    t.origin = {0.3, 0.9, 0.4};
    const Volume3 r = resample_to_grid(c, t, Interp::trilinear);
    for (float x : r.data)
      CHECK(x == doctest::Approx(7.5).epsilon(1e-6));
  }
  SUBCASE("2x downsample of a linear ramp stays on the ramp") {
    Grid3 fine = unit_grid(17, 9, 9);
    const Volume3 ramp =
        volume_from_fn(fine, [](const Vec3 &p) { return 2.0 * p.x + 0.5 * p.y - p.z; });
    Grid3 coarse = fine;
    coarse.dims = {9, 5, 5};
    coarse.spacing = {2.0, 2.0, 2.0};
    const Volume3 r = resample_to_grid(ramp, coarse, Interp::trilinear);
    for (int k = 1; k < 4; ++k)
      for (int j = 1; j < 4; ++j)
        for (int i = 1; i < 8; ++i) {
          const Vec3 p = coarse.index_to_mm(i, j, k);
          const double expect = 2.0 * p.x + 0.5 * p.y - p.z;
          CHECK(r.at(i, j, k) == doctest::Approx(expect).epsilon(1e-4));
        }
  }
}

TEST_CASE("gaussian_smooth preserves constants and stays within range") {
  Grid3 g = unit_grid(12, 12, 8);
  const Volume3 c = make_constant_volume(g, 2.0f);
  const Volume3 sc = gaussian_smooth(c, {2.0, 2.0, 2.0});
  for (float x : sc.data)
    CHECK(x == doctest::Approx(2.0).epsilon(1e-9));

  Rng rng(9);
  const Volume3 v = random_volume(g, rng);
  const Volume3 sv = gaussian_smooth(v, {1.5, 1.5, 1.5});
  for (float x : sv.data) {
    CHECK(x >= -1e-6f);
    CHECK(x <= 1.0f + 1e-6f);
  }
}
