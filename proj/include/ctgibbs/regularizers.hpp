#pragma once

#include "ctgibbs/types.hpp"

namespace ctgibbs {

// First-order finite differences with Neumann boundary handling: along each
// image line the last difference is zero.  Direction 1 differentiates within
// a stacked column (row index i), direction 2 across columns (index j).

// Diagonals of the weight matrices 1/sqrt((D x)^2 + eps), plus the smoothing
// constant they were built with.  Every entry lies in (0, 1/sqrt(eps)].
struct DiffWeights {
  Vec w1;
  Vec w2;
  double eps = 0.0;
};

// D1 v or D2 v.
Vec apply_diff(int direction, const Eigen::Ref<const Vec>& v);

// D1^T u or D2^T u.
Vec apply_diff_transpose(int direction, const Eigen::Ref<const Vec>& u);

// sqrt(t^2 + eps); upper bound on |t| that tightens as eps -> 0.
double smoothed_abs(double t, double eps);

DiffWeights compute_weights(const Eigen::Ref<const Vec>& x, double eps);

// L v with L = D1^T W1 D1 + D2^T W2 D2; symmetric positive semidefinite.
Vec apply_L(const DiffWeights& w, const Eigen::Ref<const Vec>& v);

// v^T L v evaluated without forming L v.
double quad_form_L(const DiffWeights& w, const Eigen::Ref<const Vec>& v);

// ||D1 x||_1 + ||D2 x||_1 (exact, non-smoothed).
double tv_l1(const Eigen::Ref<const Vec>& x);

// sum_i sqrt((D1 x)_i^2 + eps) + sum_i sqrt((D2 x)_i^2 + eps).
double smoothed_tv(const Eigen::Ref<const Vec>& x, double eps);

}  // namespace ctgibbs
