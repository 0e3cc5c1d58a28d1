#include "ctgibbs/densities.hpp"

#include <cmath>

#include "ctgibbs/geometry.hpp"

namespace ctgibbs {

double log_bessel_i0(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw NumericalError("log_bessel_i0 requires finite kappa >= 0");
  }
  if (kappa < 20.0) {
    // I0(z) = sum_k (z^2/4)^k / (k!)^2, safe from overflow in this range.
    const double w = 0.25 * kappa * kappa;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= w / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::log(sum);
  }
  // ln I0 = kappa - ln(2 pi kappa)/2 + ln(sum_k c_k / kappa^k) with
  // c_k = ((2k-1)!!)^2 / (k! 8^k); seven terms keep the truncation error
  // below 1e-10 at the switch point.
  const double inv = 1.0 / kappa;
  const double c5 = 893025.0 / 3932160.0;
  const double c6 = 108056025.0 / 188743680.0;
  const double c7 = 18261468225.0 / 10569646080.0;
  double corr = c7;
  for (const double c : {c6, c5, 11025.0 / 98304.0, 225.0 / 3072.0, 9.0 / 128.0, 0.125, 1.0}) {
    corr = c + inv * corr;
  }
  return kappa - 0.5 * std::log(2.0 * M_PI * kappa) + std::log(corr);
}

double log_likelihood(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                      double lambda, const Eigen::Ref<const Sinogram>& b,
                      const FanBeamGeometry& geom) {
  if (!(lambda > 0.0)) throw NumericalError("lambda must be > 0");
  if (b.rows() != geom.p || b.cols() != theta.size()) {
    throw DataError("sinogram dimensions do not match geometry/angles");
  }
  const double m = static_cast<double>(b.size());
  const double r2 = (forward_project(x, geom, theta) - b).squaredNorm();
  return 0.5 * m * std::log(lambda / (2.0 * M_PI)) - 0.5 * lambda * r2;
}

double log_prior_x(const Eigen::Ref<const Vec>& x, double delta) {
  if (!(delta > 0.0)) throw NumericalError("delta must be > 0");
  const double d = static_cast<double>(x.size());
  return d * std::log(0.5 * delta) - delta * tv_l1(x);
}

double log_prior_theta(const AngleState& state, double kappa) {
  if (!(kappa > 0.0)) throw NumericalError("kappa must be > 0");
  if (state.theta.size() != state.a.size()) throw DataError("theta/a length mismatch");
  const double q = static_cast<double>(state.theta.size());
  const double cos_sum = (state.theta - state.a).array().cos().sum();
  return -q * (std::log(2.0 * M_PI) + log_bessel_i0(kappa)) + kappa * cos_sum;
}

double log_hyperprior(double t, double beta) {
  if (!(beta > 0.0)) throw NumericalError("beta must be > 0");
  return std::log(beta) - beta * t;
}

double log_target(const Eigen::Ref<const Vec>& x, const AngleState& angles,
                  const HyperState& hyper, double beta,
                  const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom) {
  hyper.validate();
  return log_likelihood(x, angles.theta, hyper.lambda, b, geom) +
         log_prior_x(x, hyper.delta) + log_prior_theta(angles, hyper.kappa) +
         log_hyperprior(hyper.lambda, beta) + log_hyperprior(hyper.delta, beta) +
         log_hyperprior(hyper.kappa, beta);
}

double cost_J(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
              double lambda, double delta, double eps,
              const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom) {
  if (!(lambda > 0.0) || !(delta > 0.0)) throw NumericalError("lambda, delta must be > 0");
  const double r2 = (forward_project(x, geom, theta) - b).squaredNorm();
  return 0.5 * lambda * r2 + delta * smoothed_tv(x, eps);
}

Vec grad_J(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
           double lambda, double delta, double eps, const Eigen::Ref<const Sinogram>& b,
           const FanBeamGeometry& geom) {
  const Sinogram residual = forward_project(x, geom, theta) - b;
  const DiffWeights w = compute_weights(x, eps);
  return lambda * back_project(residual, geom, theta) + delta * apply_L(w, x);
}

Vec apply_hessian(const DiffWeights& w, const Eigen::Ref<const Vec>& v, double lambda,
                  double delta, const FanBeamGeometry& geom,
                  const Eigen::Ref<const Vec>& theta) {
  const Sinogram av = forward_project(v, geom, theta);
  return lambda * back_project(av, geom, theta) + delta * apply_L(w, v);
}

Vec apply_hessian(const Eigen::Ref<const Vec>& xbar, const Eigen::Ref<const Vec>& v,
                  double lambda, double delta, double eps, const FanBeamGeometry& geom,
                  const Eigen::Ref<const Vec>& theta) {
  return apply_hessian(compute_weights(xbar, eps), v, lambda, delta, geom, theta);
}

double log_cond_theta_component(int i, double theta_i, const Eigen::Ref<const Vec>& x,
                                double lambda, double kappa,
                                const Eigen::Ref<const Vec>& a,
                                const Eigen::Ref<const Sinogram>& sinogram,
                                const FanBeamGeometry& geom) {
  if (i < 0 || i >= sinogram.cols() || i >= a.size()) {
    throw DataError("angle component index out of range");
  }
  const Vec proj = forward_project_angle(x, geom, theta_i);
  const double r2 = (proj - sinogram.col(i)).squaredNorm();
  return -0.5 * lambda * r2 + kappa * std::cos(theta_i - a[i]);
}

double log_cond_kappa(double kappa, const Eigen::Ref<const Vec>& theta,
                      const Eigen::Ref<const Vec>& a, double beta) {
  if (theta.size() != a.size()) throw DataError("theta/a length mismatch");
  const double q = static_cast<double>(theta.size());
  const double cos_sum = (theta - a).array().cos().sum();
  return -q * log_bessel_i0(kappa) - kappa * (beta - cos_sum);
}

}  // namespace ctgibbs
