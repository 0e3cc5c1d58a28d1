#pragma once

#include "ctgibbs/regularizers.hpp"
#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Log-density factors of the joint posterior over (x, theta, lambda, delta,
// kappa), their derivatives, and the smoothed cost used by the quasi-Newton
// machinery.  Cheaply computable normalization constants are included;
// Metropolis ratios only ever consume differences.

// ln I0(kappa), overflow-free: power series below kappa = 20, otherwise the
// exponentially scaled asymptotic expansion ln J0(kappa) + kappa.
double log_bessel_i0(double kappa);

// (m/2) ln(lambda/(2 pi)) - (lambda/2) ||A(theta) x - b||^2.
double log_likelihood(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                      double lambda, const Eigen::Ref<const Sinogram>& b,
                      const FanBeamGeometry& geom);

// d ln(delta/2) - delta (||D1 x||_1 + ||D2 x||_1), exact l1 norms.
double log_prior_x(const Eigen::Ref<const Vec>& x, double delta);

// -q ln(2 pi I0(kappa)) + kappa sum_i cos(theta_i - a_i).
double log_prior_theta(const AngleState& state, double kappa);

// ln(beta) - beta t, the exponential hyperprior.
double log_hyperprior(double t, double beta);

// Sum of all factor log densities up to one additive constant; used for
// conditional-consistency checks and diagnostics.
double log_target(const Eigen::Ref<const Vec>& x, const AngleState& angles,
                  const HyperState& hyper, double beta,
                  const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom);

// (lambda/2) ||A(theta) x - b||^2 + delta * smoothed_tv(x, eps).
double cost_J(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
              double lambda, double delta, double eps,
              const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom);

// lambda A^T (A x - b) + delta L(x) x with weights recomputed at x.
Vec grad_J(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
           double lambda, double delta, double eps, const Eigen::Ref<const Sinogram>& b,
           const FanBeamGeometry& geom);

// (lambda A^T A + delta L(xbar)) v, matrix-free.
Vec apply_hessian(const Eigen::Ref<const Vec>& xbar, const Eigen::Ref<const Vec>& v,
                  double lambda, double delta, double eps, const FanBeamGeometry& geom,
                  const Eigen::Ref<const Vec>& theta);

// Same action with precomputed weights.
Vec apply_hessian(const DiffWeights& w, const Eigen::Ref<const Vec>& v, double lambda,
                  double delta, const FanBeamGeometry& geom,
                  const Eigen::Ref<const Vec>& theta);

// Single-angle conditional for theta_i, up to a constant independent of it:
// -(lambda/2) ||A(theta_i) x - s_i||^2 + kappa cos(theta_i - a_i), where s_i
// is column i of the sinogram.
double log_cond_theta_component(int i, double theta_i, const Eigen::Ref<const Vec>& x,
                                double lambda, double kappa,
                                const Eigen::Ref<const Vec>& a,
                                const Eigen::Ref<const Sinogram>& sinogram,
                                const FanBeamGeometry& geom);

// -q ln I0(kappa) - kappa (beta - sum_i cos(theta_i - a_i)).
double log_cond_kappa(double kappa, const Eigen::Ref<const Vec>& theta,
                      const Eigen::Ref<const Vec>& a, double beta);

}  // namespace ctgibbs
