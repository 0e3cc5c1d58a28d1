#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctgibbs/geometry.hpp"
#include "ctgibbs/rng.hpp"

using namespace ctgibbs;

namespace {

FanBeamGeometry small_geom(int n) { return FanBeamGeometry::with_defaults(n); }

// Length of the segment src->dst clipped to the square [-half, half]^2,
// independent of the traversal code (Liang-Barsky).
double clipped_length(const Eigen::Vector2d& src, const Eigen::Vector2d& dst, double half) {
  const Eigen::Vector2d d = dst - src;
  double t0 = 0.0, t1 = 1.0;
  for (int ax = 0; ax < 2; ++ax) {
    if (d[ax] != 0.0) {
      double ta = (-half - src[ax]) / d[ax];
      double tb = (half - src[ax]) / d[ax];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    } else if (std::abs(src[ax]) >= half) {
      return 0.0;
    }
  }
  return t1 > t0 ? (t1 - t0) * d.norm() : 0.0;
}

}  // namespace

TEST_CASE("geometry defaults") {
  const auto g = small_geom(64);
  CHECK(g.p == 96);
  CHECK(g.fov == doctest::Approx(std::sqrt(2.0) * 450.0 * std::sin(std::atan(150.0 / 600.0))));
  CHECK_THROWS_AS(FanBeamGeometry{}.validate(), ConfigError);
}

TEST_CASE("ray through a grid row yields n chords of length fov/n") {
  const int n = 5;
  auto g = small_geom(n);
  Ray ray;
  // horizontal ray through the center of row 2
  const double y = -0.5 * g.fov + 2.5 * g.pixel_size();
  ray.source = {-2.0 * g.fov, y};
  ray.det = {2.0 * g.fov, y};
  const auto cells = trace_ray(ray, g);
  REQUIRE(cells.size() == static_cast<std::size_t>(n));
  for (const auto& [idx, len] : cells) {
    CHECK(len == doctest::Approx(g.fov / n).epsilon(1e-12));
    CHECK(idx % n == 2);  // row 2 of every column
  }
}

TEST_CASE("ray outside the square is empty") {
  auto g = small_geom(4);
  Ray ray;
  ray.source = {-2.0 * g.fov, 0.9 * g.fov};
  ray.det = {2.0 * g.fov, 0.9 * g.fov};
  CHECK(trace_ray(ray, g).empty());
}

TEST_CASE("chord lengths sum to the clipped segment length") {
  auto g = small_geom(4);
  Rng rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    Ray ray;
    const double phi = 2.0 * M_PI * rng.uniform();
    ray.source = 2.0 * g.fov * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    ray.det = g.fov * Eigen::Vector2d(rng.uniform() - 0.5, rng.uniform() - 0.5) * 3.0;
    // keep the endpoint outside the square
    if (std::abs(ray.det.x()) < 0.5 * g.fov && std::abs(ray.det.y()) < 0.5 * g.fov) {
      ray.det *= 2.0;
    }
    double total = 0.0;
    for (const auto& [idx, len] : trace_ray(ray, g)) {
      CHECK(len >= 0.0);
      total += len;
    }
    const double expected = clipped_length(ray.source, ray.det, 0.5 * g.fov);
    CHECK(total == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("rays from make_ray start and end outside the image square") {
  auto g = small_geom(16);
  for (double theta : {0.0, 0.7, 2.2, 4.9}) {
    for (int tau : {0, g.p / 2, g.p - 1}) {
      const Ray ray = make_ray(g, theta, tau);
      CHECK(ray.source.norm() == doctest::Approx(g.dso));
      CHECK(ray.source.cwiseAbs().maxCoeff() > 0.5 * g.fov);
      CHECK(ray.det.cwiseAbs().maxCoeff() > 0.5 * g.fov);
    }
  }
  CHECK_THROWS_AS(make_ray(g, 0.0, g.p), DataError);
}

TEST_CASE("forward projection basics") {
  auto g = small_geom(6);
  const Vec angles = nominal_angle_grid(5);

  SUBCASE("zero image projects to zero") {
    const Sinogram s = forward_project(Vec::Zero(g.pixels()), g, angles);
    CHECK(s.norm() == 0.0);
  }

  SUBCASE("one-pixel image matches trace_ray accumulation") {
    Vec x = Vec::Zero(g.pixels());
    const Eigen::Index pix = 2 + 3 * g.n;
    x[pix] = 1.0;
    const Vec col = forward_project_angle(x, g, angles[1]);
    for (int tau = 0; tau < g.p; ++tau) {
      double expected = 0.0;
      for (const auto& [idx, len] : trace_ray(make_ray(g, angles[1], tau), g)) {
        if (idx == pix) expected += len;
      }
      CHECK(col[tau] == doctest::Approx(expected).epsilon(1e-14));
    }
  }

  SUBCASE("single-angle block equals the full projection column") {
    Rng rng(3);
    const Vec x = randn_vec(g.pixels(), rng);
    const Sinogram s = forward_project(x, g, angles);
    for (Eigen::Index i = 0; i < angles.size(); ++i) {
      CHECK((s.col(i) - forward_project_angle(x, g, angles[i])).lpNorm<Eigen::Infinity>() <=
            1e-14);
    }
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(forward_project(Vec::Zero(g.pixels() + 1), g, angles), DataError);
  }
}

TEST_CASE("back projection is the exact adjoint") {
  auto g = small_geom(8);
  const Vec angles = nominal_angle_grid(7);
  Rng rng(17);

  SUBCASE("zero sinogram maps to zero") {
    CHECK(back_project(Sinogram::Zero(g.p, angles.size()), g, angles).norm() == 0.0);
  }

  SUBCASE("unit sinogram entry recovers the ray chords") {
    Sinogram r = Sinogram::Zero(g.p, angles.size());
    r(4, 2) = 1.0;
    const Vec bp = back_project(r, g, angles);
    Vec expected = Vec::Zero(g.pixels());
    for (const auto& [idx, len] : trace_ray(make_ray(g, angles[2], 4), g)) {
      expected[idx] += len;
    }
    CHECK((bp - expected).lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("dot-product identity") {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = randn_vec(g.pixels(), rng);
      Sinogram r(g.p, angles.size());
      for (Eigen::Index j = 0; j < r.size(); ++j) r.data()[j] = rng.normal();
      const Sinogram ax = forward_project(x, g, angles);
      const Vec atr = back_project(r, g, angles);
      const double lhs = (ax.array() * r.array()).sum();
      const double rhs = x.dot(atr);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * ax.norm() * r.norm());
    }
  }
}

TEST_CASE("linearity with a fixed accumulation order") {
  auto g = small_geom(6);
  const Vec angles = nominal_angle_grid(3);
  Rng rng(5);
  const Vec x = randn_vec(g.pixels(), rng);
  const Vec y = randn_vec(g.pixels(), rng);
  const double alpha = 1.375;  // exactly representable
  const Sinogram lhs = forward_project(alpha * x + y, g, angles);
  const Sinogram rhs = alpha * forward_project(x, g, angles) + forward_project(y, g, angles);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * rhs.lpNorm<Eigen::Infinity>());
}

TEST_CASE("nonnegative images project to nonnegative sinograms") {
  auto g = small_geom(9);
  Rng rng(11);
  Vec x(g.pixels());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform();
  const Sinogram s = forward_project(x, g, nominal_angle_grid(6));
  CHECK(s.minCoeff() >= 0.0);
}

TEST_CASE("quarter-turn rotation consistency for a radial image") {
  auto g = small_geom(12);
  Vec x(g.pixels());
  const double h = g.pixel_size();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double cx = -0.5 * g.fov + (j + 0.5) * h;
      const double cy = -0.5 * g.fov + (i + 0.5) * h;
      const double r2 = cx * cx + cy * cy;
      x[i + static_cast<Eigen::Index>(j) * g.n] = std::exp(-r2 / (0.1 * g.fov * g.fov));
    }
  }
  const double theta = 0.37;
  const Vec base = forward_project_angle(x, g, theta);
  for (int k = 1; k < 4; ++k) {
    const Vec rotated = forward_project_angle(x, g, theta + k * M_PI_2);
    CHECK((rotated - base).lpNorm<Eigen::Infinity>() <=
          1e-10 * base.lpNorm<Eigen::Infinity>());
  }
}
