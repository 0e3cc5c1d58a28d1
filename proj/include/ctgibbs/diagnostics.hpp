#pragma once

#include <utility>

#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Post-processing of MCMC output: autocorrelation-based effective sample
// sizes, jump distances, reconstruction error, pixelwise image statistics.

struct IactResult {
  double tau = 1.0;
  bool degenerate = false;  // constant chain
};

// Integrated autocorrelation time 1 + 2 sum_j rho_j, truncated by the initial
// positive sequence rule on autocovariance pairs.  Requires length >= 10.
// May return values below 1 for anticorrelated chains.
IactResult iact(const Eigen::Ref<const Vec>& chain);

// ceil(n / max(tau, 1)); chains shorter than 10 count as uncorrelated.
double ess(const Eigen::Ref<const Vec>& chain);

// Mean squared jump between consecutive states (columns of `chain`).
double msj(const Eigen::Ref<const Mat>& chain);

// Same with each component difference wrapped to (-pi, pi].
double msj_angles(const Eigen::Ref<const Mat>& chain);

// ||x - x_true|| / ||x_true||.
double rel_error(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& x_true);

// Pixelwise sample mean and unbiased sample standard deviation over the
// columns of the d x n_kept sample matrix.  Requires >= 2 samples.
std::pair<Vec, Vec> posterior_image_stats(const Eigen::Ref<const Mat>& samples);

// Running means c_k = mean(chain[0..k]).
Vec cumulative_mean(const Eigen::Ref<const Vec>& chain);

// Circular mean atan2(mean sin, mean cos) wrapped to [0, 2 pi); safe for
// chains hugging the 0/2 pi seam.
double circular_mean(const Eigen::Ref<const Vec>& angles);

// Per-angle circular mean and standard deviation of the wrapped deviations,
// over the columns of the q x n_kept angle chain.
std::pair<Vec, Vec> angle_chain_stats(const Eigen::Ref<const Mat>& theta_chain);

}  // namespace ctgibbs
