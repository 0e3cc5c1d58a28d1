#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ctgibbs/regularizers.hpp"
#include "ctgibbs/rng.hpp"

using namespace ctgibbs;

namespace {

// Dense D with -1/+1 on the diagonal/superdiagonal and a zero last row.
Mat dense_line_diff(int n) {
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) {
    d(i, i) = -1.0;
    d(i, i + 1) = 1.0;
  }
  return d;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat dense_diff(int direction, int n) {
  const Mat d = dense_line_diff(n);
  const Mat id = Mat::Identity(n, n);
  return direction == 1 ? kron(id, d) : kron(d, id);
}

// Anisotropic TV by direct double loop over the reshaped image.
double naive_tv(const Vec& x, int n) {
  double tv = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) tv += std::abs(x[i + 1 + j * n] - x[i + j * n]);
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i < n; ++i) tv += std::abs(x[i + (j + 1) * n] - x[i + j * n]);
  }
  return tv;
}

}  // namespace

TEST_CASE("apply_diff matches the stacked line operator") {
  SUBCASE("constant image is annihilated") {
    const Vec v = Vec::Constant(49, 3.25);
    CHECK(apply_diff(1, v).norm() == 0.0);
    CHECK(apply_diff(2, v).norm() == 0.0);
  }

  SUBCASE("2x2 hand-computed case") {
    Vec v(4);
    v << 0, 1, 2, 3;
    Vec expected(4);
    expected << 1, 0, 1, 0;
    CHECK((apply_diff(1, v) - expected).norm() == 0.0);
  }

  SUBCASE("matches dense Kronecker assembly") {
    Rng rng(2);
    for (int n : {3, 5, 8}) {
      const Vec v = randn_vec(n * n, rng);
      for (int dir : {1, 2}) {
        const Mat d = dense_diff(dir, n);
        CHECK((apply_diff(dir, v) - d * v).lpNorm<Eigen::Infinity>() <= 1e-14);
        CHECK((apply_diff_transpose(dir, v) - d.transpose() * v).lpNorm<Eigen::Infinity>() <=
              1e-14);
      }
    }
  }

  SUBCASE("l1 norms add up to the naive TV") {
    Rng rng(7);
    const int n = 6;
    const Vec v = randn_vec(n * n, rng);
    const double tv = apply_diff(1, v).lpNorm<1>() + apply_diff(2, v).lpNorm<1>();
    CHECK(tv == doctest::Approx(naive_tv(v, n)).epsilon(1e-13));
    CHECK(tv_l1(v) == doctest::Approx(naive_tv(v, n)).epsilon(1e-13));
  }

  SUBCASE("length errors") {
    CHECK_THROWS_AS(apply_diff(1, Vec::Zero(5)), DataError);
    CHECK_THROWS_AS(apply_diff(3, Vec::Zero(4)), ConfigError);
  }
}

TEST_CASE("smoothed_abs") {
  CHECK(smoothed_abs(0.0, 1e-6) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(smoothed_abs(3.0, 1e-300) == doctest::Approx(3.0));
  CHECK(smoothed_abs(4.0, 9.0) == doctest::Approx(5.0));
  CHECK(smoothed_abs(-4.0, 9.0) == doctest::Approx(5.0));
  CHECK_THROWS_AS(smoothed_abs(1.0, 0.0), ConfigError);
}

TEST_CASE("compute_weights") {
  const double eps = 1e-6;

  SUBCASE("flat image gives eps^(-1/2) everywhere") {
    const auto w = compute_weights(Vec::Zero(16), eps);
    CHECK((w.w1.array() - 1e3).abs().maxCoeff() <= 1e-9);
    CHECK((w.w2.array() - 1e3).abs().maxCoeff() <= 1e-9);
  }

  SUBCASE("a jump of height h weighs 1/sqrt(h^2+eps)") {
    const int n = 4;
    Vec x = Vec::Zero(n * n);
    const double h = 2.5;
    x[1] = h;  // jump between rows 0 and 1 of column 0
    const auto w = compute_weights(x, eps);
    CHECK(w.w1[0] == doctest::Approx(1.0 / std::sqrt(h * h + eps)).epsilon(1e-14));
  }

  SUBCASE("matches dense evaluation on a 3x3 grid") {
    Rng rng(5);
    const int n = 3;
    const Vec x = randn_vec(n * n, rng);
    const auto w = compute_weights(x, eps);
    for (int dir : {1, 2}) {
      const Vec dx = dense_diff(dir, n) * x;
      const Vec expected = (dx.array().square() + eps).rsqrt();
      const Vec& got = dir == 1 ? w.w1 : w.w2;
      CHECK((got - expected).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
    CHECK((w.w1.array() > 0.0).all());
    CHECK((w.w1.array() <= 1.0 / std::sqrt(eps)).all());
  }
}

TEST_CASE("apply_L") {
  const double eps = 1e-6;
  Rng rng(11);

  SUBCASE("constants are in the null space") {
    const int n = 5;
    const auto w = compute_weights(randn_vec(n * n, rng), eps);
    CHECK(apply_L(w, Vec::Constant(n * n, 2.0)).lpNorm<Eigen::Infinity>() <= 1e-12);
  }

  SUBCASE("matches dense assembly on a 3x3 grid") {
    const int n = 3;
    const Vec x = randn_vec(n * n, rng);
    const auto w = compute_weights(x, eps);
    const Mat d1 = dense_diff(1, n);
    const Mat d2 = dense_diff(2, n);
    const Mat dense_l = d1.transpose() * w.w1.asDiagonal() * d1 +
                        d2.transpose() * w.w2.asDiagonal() * d2;
    const Vec v = randn_vec(n * n, rng);
    CHECK((apply_L(w, v) - dense_l * v).lpNorm<Eigen::Infinity>() <=
          1e-13 * dense_l.lpNorm<Eigen::Infinity>());
  }

  SUBCASE("symmetric and positive semidefinite") {
    const int n = 6;
    const auto w = compute_weights(randn_vec(n * n, rng), eps);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec u = randn_vec(n * n, rng);
      const Vec v = randn_vec(n * n, rng);
      const double uv = u.dot(apply_L(w, v));
      const double vu = v.dot(apply_L(w, u));
      CHECK(std::abs(uv - vu) <= 1e-12 * std::max(std::abs(uv), 1.0));
      CHECK(v.dot(apply_L(w, v)) >= 0.0);
    }
  }

  SUBCASE("quadratic form identity") {
    const int n = 5;
    const Vec x = randn_vec(n * n, rng);
    const auto w = compute_weights(x, eps);
    const double direct = (apply_diff(1, x).array().square() /
                           (apply_diff(1, x).array().square() + eps).sqrt())
                              .sum() +
                          (apply_diff(2, x).array().square() /
                           (apply_diff(2, x).array().square() + eps).sqrt())
                              .sum();
    CHECK(quad_form_L(w, x) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(x.dot(apply_L(w, x)) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("smoothed TV sandwich") {
  Rng rng(13);
  const int n = 7;
  const double eps = 1e-6;
  const double d = n * n;
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = randn_vec(n * n, rng);
    const double exact = tv_l1(x);
    const double smooth = smoothed_tv(x, eps);
    CHECK(smooth >= exact);
    CHECK(smooth <= exact + 2.0 * d * std::sqrt(eps));
  }
}
