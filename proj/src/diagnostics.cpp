#include "ctgibbs/diagnostics.hpp"

#include <cmath>

namespace ctgibbs {

IactResult iact(const Eigen::Ref<const Vec>& chain) {
  const Eigen::Index n = chain.size();
  if (n < 10) throw DataError("iact requires a chain of length >= 10");

  const double mean = chain.mean();
  const Vec centered = chain.array() - mean;
  const double c0 = centered.squaredNorm() / n;
  if (c0 == 0.0) return {1.0, true};

  auto rho = [&](Eigen::Index lag) {
    if (lag >= n) return 0.0;
    return centered.head(n - lag).dot(centered.tail(n - lag)) / (n * c0);
  };

  // tau = 2 * sum_k Gamma_k - 1 with Gamma_k = rho_{2k} + rho_{2k+1},
  // truncated at the first nonpositive pair.
  double pair_sum = 0.0;
  for (Eigen::Index k = 0; 2 * k < n; ++k) {
    const double gamma = rho(2 * k) + rho(2 * k + 1);
    if (k > 0 && gamma <= 0.0) break;
    pair_sum += gamma;
  }
  return {2.0 * pair_sum - 1.0, false};
}

double ess(const Eigen::Ref<const Vec>& chain) {
  const Eigen::Index n = chain.size();
  if (n <= 1) return static_cast<double>(n);
  const double tau = n < 10 ? 1.0 : iact(chain).tau;
  return std::ceil(n / std::max(tau, 1.0));
}

namespace {

double msj_impl(const Eigen::Ref<const Mat>& chain, bool wrap) {
  const Eigen::Index n = chain.cols();
  if (n < 2) throw DataError("msj requires at least 2 states");
  double acc = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    if (wrap) {
      double step = 0.0;
      for (Eigen::Index i = 0; i < chain.rows(); ++i) {
        const double d = wrap_pi(chain(i, j) - chain(i, j - 1));
        step += d * d;
      }
      acc += step;
    } else {
      acc += (chain.col(j) - chain.col(j - 1)).squaredNorm();
    }
  }
  return acc / static_cast<double>(n - 1);
}

}  // namespace

double msj(const Eigen::Ref<const Mat>& chain) { return msj_impl(chain, false); }

double msj_angles(const Eigen::Ref<const Mat>& chain) { return msj_impl(chain, true); }

double rel_error(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& x_true) {
  const double denom = x_true.norm();
  if (denom == 0.0) throw DataError("rel_error requires a nonzero reference");
  if (x.size() != x_true.size()) throw DataError("rel_error length mismatch");
  return (x - x_true).norm() / denom;
}

std::pair<Vec, Vec> posterior_image_stats(const Eigen::Ref<const Mat>& samples) {
  const Eigen::Index n = samples.cols();
  if (n < 2) throw DataError("posterior_image_stats requires >= 2 samples");
  Vec mean = samples.rowwise().mean();
  Vec var = Vec::Zero(samples.rows());
  for (Eigen::Index j = 0; j < n; ++j) {
    var += (samples.col(j) - mean).array().square().matrix();
  }
  var /= static_cast<double>(n - 1);
  return {std::move(mean), var.array().sqrt().matrix()};
}

Vec cumulative_mean(const Eigen::Ref<const Vec>& chain) {
  Vec out(chain.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < chain.size(); ++i) {
    acc += chain[i];
    out[i] = acc / static_cast<double>(i + 1);
  }
  return out;
}

double circular_mean(const Eigen::Ref<const Vec>& angles) {
  if (angles.size() == 0) throw DataError("circular_mean of empty chain");
  const double s = angles.array().sin().mean();
  const double c = angles.array().cos().mean();
  return wrap_two_pi(std::atan2(s, c));
}

std::pair<Vec, Vec> angle_chain_stats(const Eigen::Ref<const Mat>& theta_chain) {
  const Eigen::Index q = theta_chain.rows();
  const Eigen::Index n = theta_chain.cols();
  if (n < 2) throw DataError("angle_chain_stats requires >= 2 samples");
  Vec mean(q), std_dev(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const double mu = circular_mean(theta_chain.row(i).transpose());
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = wrap_pi(theta_chain(i, j) - mu);
      acc += d * d;
    }
    mean[i] = mu;
    std_dev[i] = std::sqrt(acc / static_cast<double>(n - 1));
  }
  return {std::move(mean), std::move(std_dev)};
}

}  // namespace ctgibbs
