#include "ctgibbs/regularizers.hpp"

#include <cmath>

namespace ctgibbs {

namespace {

void check_direction(int direction) {
  if (direction != 1 && direction != 2) {
    throw ConfigError("difference direction must be 1 or 2");
  }
}

}  // namespace

Vec apply_diff(int direction, const Eigen::Ref<const Vec>& v) {
  check_direction(direction);
  const int n = image_side(v.size());
  Vec out = Vec::Zero(v.size());
  if (direction == 1) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index base = static_cast<Eigen::Index>(j) * n;
      for (int i = 0; i < n - 1; ++i) out[base + i] = v[base + i + 1] - v[base + i];
    }
  } else {
    for (int j = 0; j < n - 1; ++j) {
      const Eigen::Index base = static_cast<Eigen::Index>(j) * n;
      for (int i = 0; i < n; ++i) out[base + i] = v[base + n + i] - v[base + i];
    }
  }
  return out;
}

Vec apply_diff_transpose(int direction, const Eigen::Ref<const Vec>& u) {
  check_direction(direction);
  const int n = image_side(u.size());
  Vec out = Vec::Zero(u.size());
  if (direction == 1) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index base = static_cast<Eigen::Index>(j) * n;
      out[base] = -u[base];
      for (int i = 1; i < n - 1; ++i) out[base + i] = u[base + i - 1] - u[base + i];
      if (n > 1) out[base + n - 1] = u[base + n - 2];
    }
  } else {
    for (int i = 0; i < n; ++i) out[i] = -u[i];
    for (int j = 1; j < n - 1; ++j) {
      const Eigen::Index base = static_cast<Eigen::Index>(j) * n;
      for (int i = 0; i < n; ++i) out[base + i] = u[base - n + i] - u[base + i];
    }
    if (n > 1) {
      const Eigen::Index base = static_cast<Eigen::Index>(n - 1) * n;
      for (int i = 0; i < n; ++i) out[base + i] = u[base - n + i];
    }
  }
  return out;
}

double smoothed_abs(double t, double eps) {
  if (!(eps > 0.0)) throw ConfigError("smoothing constant eps must be > 0");
  return std::sqrt(t * t + eps);
}

DiffWeights compute_weights(const Eigen::Ref<const Vec>& x, double eps) {
  if (!(eps > 0.0)) throw ConfigError("smoothing constant eps must be > 0");
  DiffWeights w;
  w.eps = eps;
  const Vec d1 = apply_diff(1, x);
  const Vec d2 = apply_diff(2, x);
  w.w1 = (d1.array().square() + eps).rsqrt().matrix();
  w.w2 = (d2.array().square() + eps).rsqrt().matrix();
  return w;
}

Vec apply_L(const DiffWeights& w, const Eigen::Ref<const Vec>& v) {
  if (v.size() != w.w1.size() || v.size() != w.w2.size()) {
    throw DataError("weight/vector length mismatch");
  }
  const Vec d1 = apply_diff(1, v);
  const Vec d2 = apply_diff(2, v);
  return apply_diff_transpose(1, (w.w1.array() * d1.array()).matrix()) +
         apply_diff_transpose(2, (w.w2.array() * d2.array()).matrix());
}

double quad_form_L(const DiffWeights& w, const Eigen::Ref<const Vec>& v) {
  if (v.size() != w.w1.size() || v.size() != w.w2.size()) {
    throw DataError("weight/vector length mismatch");
  }
  const Vec d1 = apply_diff(1, v);
  const Vec d2 = apply_diff(2, v);
  return (w.w1.array() * d1.array().square()).sum() +
         (w.w2.array() * d2.array().square()).sum();
}

double tv_l1(const Eigen::Ref<const Vec>& x) {
  return apply_diff(1, x).lpNorm<1>() + apply_diff(2, x).lpNorm<1>();
}

double smoothed_tv(const Eigen::Ref<const Vec>& x, double eps) {
  if (!(eps > 0.0)) throw ConfigError("smoothing constant eps must be > 0");
  const Vec d1 = apply_diff(1, x);
  const Vec d2 = apply_diff(2, x);
  return (d1.array().square() + eps).sqrt().sum() + (d2.array().square() + eps).sqrt().sum();
}

}  // namespace ctgibbs
