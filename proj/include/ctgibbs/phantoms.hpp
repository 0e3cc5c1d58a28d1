#pragma once

#include <cstdint>

#include "ctgibbs/geometry.hpp"
#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Seeded ground-truth generators and the noisy-data simulator.  All outputs
// are deterministic functions of their seed; internally each generator pulls
// from fixed Rng substream tags (documented per function) so the pipeline
// stages cannot perturb one another.

// Ground truth bundle for one experiment.
struct ExperimentTruth {
  ImageGrid x_true;
  Vec theta_true;       // perturbed (actual) angles
  Vec nominal_angles;   // planned grid a
  double sigma_obs = 0.0;
  double lambda_true = 0.0;  // 1 / sigma_obs^2
  Sinogram sinogram;    // clean projection plus white noise
};

// Piecewise-constant phantom: Voronoi tessellation of n_grains sites inside
// the inscribed disk, one uniform value in [0.2, 1] per cell, background 0.
// Substreams: 0 sites, 1 values.
ImageGrid grains_phantom(int n, int n_grains, std::uint64_t seed);

struct PpowerOptions {
  double blur_sigma = 4.0;  // Gaussian blur std, pixels
  double power = 2.0;       // exponent applied to the normalized field
  double zero_frac = 0.6;   // target fraction of exactly-zero pixels
};

// Diagnostics captured while building a ppower phantom, for property tests.
struct PpowerDebug {
  double noise_inf = 0.0;   // max |raw noise|
  double field_max = 0.0;   // max of the rectified blurred field
  double kernel_tv = 0.0;   // total variation of the 1-D blur kernel
};

// Smooth blobs on an exactly-zero background: seeded white noise, separable
// Gaussian blur, rectification, normalization, power, quantile threshold.
// Substream: 0 noise.
ImageGrid ppower_phantom(int n, std::uint64_t seed, const PpowerOptions& opts = {},
                         PpowerDebug* debug = nullptr);

// theta_i = wrap(a_i + e_i), e_i ~ N(0, sigma_true_deg^2) in degrees.
// Substream: 0.
Vec perturb_angles(const Eigen::Ref<const Vec>& a, double sigma_true_deg,
                   std::uint64_t seed);

// b = A(theta_true) x_true + e with e ~ N(0, sigma_obs^2 I) and
// sigma_obs = noise_level * ||A(theta_true) x_true|| / sqrt(m).
// Substream: 0 noise.
ExperimentTruth simulate_sinogram(const ImageGrid& x_true,
                                  const Eigen::Ref<const Vec>& theta_true,
                                  const Eigen::Ref<const Vec>& nominal_angles,
                                  double noise_level, const FanBeamGeometry& geom,
                                  std::uint64_t seed);

}  // namespace ctgibbs
