#include "ctgibbs/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctgibbs/rng.hpp"

namespace ctgibbs {

ImageGrid grains_phantom(int n, int n_grains, std::uint64_t seed) {
  if (n < 8) throw ConfigError("grains_phantom requires n >= 8");
  if (n_grains < 1) throw ConfigError("grains_phantom requires n_grains >= 1");

  Rng base(seed);
  Rng site_rng = base.substream(0);
  Rng value_rng = base.substream(1);

  // Sites in pixel coordinates, rejection-sampled inside the inscribed disk.
  const double radius = 0.5 * n;
  std::vector<Eigen::Vector2d> sites;
  sites.reserve(n_grains);
  while (static_cast<int>(sites.size()) < n_grains) {
    const double sx = site_rng.uniform() * n;
    const double sy = site_rng.uniform() * n;
    if (std::hypot(sx - radius, sy - radius) <= radius) sites.emplace_back(sx, sy);
  }
  std::vector<double> values(n_grains);
  for (auto& v : values) v = 0.2 + 0.8 * value_rng.uniform();

  ImageGrid img(n, Vec::Zero(static_cast<Eigen::Index>(n) * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double cx = j + 0.5;
      const double cy = i + 0.5;
      if (std::hypot(cx - radius, cy - radius) > radius) continue;
      int best = 0;
      double best_d2 = (sites[0] - Eigen::Vector2d(cx, cy)).squaredNorm();
      for (int s = 1; s < n_grains; ++s) {
        const double d2 = (sites[s] - Eigen::Vector2d(cx, cy)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = s;
        }
      }
      img.values[i + static_cast<Eigen::Index>(j) * n] = values[best];
    }
  }
  return img;
}

namespace {

// Truncated, normalized 1-D Gaussian kernel.
std::vector<double> gauss_kernel(double sigma) {
  const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> k(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    k[i + half] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    sum += k[i + half];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable blur with replicated boundary, along one axis of the n x n field.
void blur_axis(Mat& field, const std::vector<double>& kernel, bool along_rows) {
  const int n = static_cast<int>(field.rows());
  const int half = static_cast<int>(kernel.size() / 2);
  Mat out(n, n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int t = -half; t <= half; ++t) {
        int c = std::clamp(a + t, 0, n - 1);
        acc += kernel[t + half] * (along_rows ? field(c, b) : field(b, c));
      }
      (along_rows ? out(a, b) : out(b, a)) = acc;
    }
  }
  field = out;
}

}  // namespace

ImageGrid ppower_phantom(int n, std::uint64_t seed, const PpowerOptions& opts,
                         PpowerDebug* debug) {
  if (n < 8) throw ConfigError("ppower_phantom requires n >= 8");
  if (!(opts.blur_sigma > 0.0) || !(opts.power >= 1.0) || opts.zero_frac < 0.0 ||
      opts.zero_frac >= 1.0) {
    throw ConfigError("invalid ppower options");
  }

  Rng noise_rng = Rng(seed).substream(0);
  Mat field(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) field(i, j) = noise_rng.normal();
  }
  const double noise_inf = field.cwiseAbs().maxCoeff();

  const std::vector<double> kernel = gauss_kernel(opts.blur_sigma);
  blur_axis(field, kernel, true);
  blur_axis(field, kernel, false);

  field = field.cwiseMax(0.0);
  const double field_max = field.maxCoeff();
  if (field_max <= 0.0) throw NumericalError("ppower field collapsed to zero");
  field /= field_max;
  field = field.array().pow(opts.power).matrix();

  // Zero out everything below the zero_frac quantile.
  Vec flat = field.reshaped();
  std::vector<double> sorted(flat.data(), flat.data() + flat.size());
  std::sort(sorted.begin(), sorted.end());
  const auto cut = static_cast<std::size_t>(opts.zero_frac * sorted.size());
  const double threshold = cut < sorted.size() ? sorted[cut] : sorted.back();
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    if (flat[i] < threshold) flat[i] = 0.0;
  }

  if (debug) {
    debug->noise_inf = noise_inf;
    debug->field_max = field_max;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < kernel.size(); ++i) tv += std::abs(kernel[i + 1] - kernel[i]);
    debug->kernel_tv = tv + kernel.front() + kernel.back();
  }
  return ImageGrid(n, std::move(flat));
}

Vec perturb_angles(const Eigen::Ref<const Vec>& a, double sigma_true_deg,
                   std::uint64_t seed) {
  if (sigma_true_deg < 0.0) throw ConfigError("sigma_true_deg must be >= 0");
  Rng rng = Rng(seed).substream(0);
  Vec theta(a.size());
  const double sigma_rad = sigma_true_deg * M_PI / 180.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    theta[i] = wrap_two_pi(a[i] + sigma_rad * rng.normal());
  }
  return theta;
}

ExperimentTruth simulate_sinogram(const ImageGrid& x_true,
                                  const Eigen::Ref<const Vec>& theta_true,
                                  const Eigen::Ref<const Vec>& nominal_angles,
                                  double noise_level, const FanBeamGeometry& geom,
                                  std::uint64_t seed) {
  x_true.validate();
  if (!(noise_level > 0.0)) throw ConfigError("noise_level must be > 0");
  if (theta_true.size() != nominal_angles.size()) {
    throw DataError("theta_true/nominal angle count mismatch");
  }

  ExperimentTruth truth;
  truth.x_true = x_true;
  truth.theta_true = theta_true;
  truth.nominal_angles = nominal_angles;

  const Sinogram clean = forward_project(x_true.values, geom, theta_true);
  const double m = static_cast<double>(clean.size());
  const double clean_norm = clean.norm();
  if (clean_norm == 0.0) throw DataError("clean sinogram is identically zero");

  truth.sigma_obs = noise_level * clean_norm / std::sqrt(m);
  truth.lambda_true = 1.0 / (truth.sigma_obs * truth.sigma_obs);

  Rng rng = Rng(seed).substream(0);
  truth.sinogram = clean;
  for (Eigen::Index j = 0; j < clean.cols(); ++j) {
    for (Eigen::Index i = 0; i < clean.rows(); ++i) {
      truth.sinogram(i, j) += truth.sigma_obs * rng.normal();
    }
  }
  return truth;
}

}  // namespace ctgibbs
