#pragma once

#include <vector>

#include "ctgibbs/densities.hpp"
#include "ctgibbs/geometry.hpp"
#include "ctgibbs/regularizers.hpp"
#include "ctgibbs/rng.hpp"
#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Gaussian sampling of the image conditional through perturbed least squares:
// a draw is the CGLS solution of min ||M x - y||_2 with the rows of M made of
// the scaled projector and the weighted difference operators, and y the data
// block plus standard normal noise.

enum class CglsStatus { max_iterations, tolerance_reached, breakdown };

struct CglsResult {
  Vec x;
  int iters = 0;
  CglsStatus status = CglsStatus::max_iterations;
  std::vector<double> normal_residuals;  // ||M^T (y - M x_k)||, one per iteration
  std::vector<double> ls_residuals;      // ||y - M x_k||, non-increasing in k
};

// CGLS from the zero vector.  Stops after n_iter iterations or when the
// normal-equations residual falls below tol relative to its initial value.
// The least-squares residual decreases monotonically; the normal-equations
// residual (the stopping quantity) may oscillate on ill-conditioned systems.
// A zero-curvature search direction is reported as breakdown.
template <class Op>
CglsResult cgls_solve(const Op& M, const Eigen::Ref<const Vec>& y, int n_iter, double tol) {
  if (n_iter < 1) throw ConfigError("cgls_solve requires n_iter >= 1");
  if (y.size() != M.rows()) throw DataError("cgls right-hand side has wrong length");

  CglsResult res;
  res.x = Vec::Zero(M.cols());
  Vec r = y;
  Vec s = M.apply_transpose(r);
  Vec p = s;
  double gamma = s.squaredNorm();
  const double s0 = std::sqrt(gamma);
  if (s0 == 0.0) {
    res.status = CglsStatus::tolerance_reached;
    return res;
  }

  for (int k = 0; k < n_iter; ++k) {
    const Vec w = M.apply(p);
    const double curvature = w.squaredNorm();
    if (curvature == 0.0) {
      res.status = CglsStatus::breakdown;
      return res;
    }
    const double alpha = gamma / curvature;
    res.x += alpha * p;
    r -= alpha * w;
    s = M.apply_transpose(r);
    const double gamma_next = s.squaredNorm();
    res.iters = k + 1;
    res.normal_residuals.push_back(std::sqrt(gamma_next));
    res.ls_residuals.push_back(r.norm());
    if (std::sqrt(gamma_next) <= tol * s0) {
      res.status = CglsStatus::tolerance_reached;
      return res;
    }
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
  }
  res.status = CglsStatus::max_iterations;
  return res;
}

// Rows [sqrt(lambda) A; sqrt(delta) W1^(1/2) D1; sqrt(delta) W2^(1/2) D2]
// applied matrix-free; M^T M equals the approximate Hessian at the state the
// weights were computed from.
class StackedOperator {
 public:
  StackedOperator(const FanBeamGeometry& geom, const Eigen::Ref<const Vec>& theta,
                  double lambda, double delta, const DiffWeights& w);

  Eigen::Index rows() const { return m_ + 2 * d_; }
  Eigen::Index cols() const { return d_; }

  Vec apply(const Eigen::Ref<const Vec>& v) const;
  Vec apply_transpose(const Eigen::Ref<const Vec>& r) const;

 private:
  const FanBeamGeometry& geom_;
  Vec theta_;
  double sqrt_lambda_;
  double sqrt_delta_;
  Vec sqrt_w1_;
  Vec sqrt_w2_;
  Eigen::Index m_;
  Eigen::Index d_;
};

// Solution of the perturbed least-squares problem with perturbation xi_bar
// (length m + 2d).  xi_bar = 0 reproduces one lagged-diffusivity step.
CglsResult laplace_solve(const Eigen::Ref<const Vec>& xbar,
                         const Eigen::Ref<const Vec>& theta, double lambda, double delta,
                         double eps, int n_cgls, double tol,
                         const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom,
                         const Eigen::Ref<const Vec>& xi_bar);

// One draw from the local Gaussian approximation anchored at xbar.
Vec laplace_draw(const Eigen::Ref<const Vec>& xbar, const Eigen::Ref<const Vec>& theta,
                 double lambda, double delta, double eps, int n_cgls, double tol,
                 const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom,
                 Rng& rng, int* cgls_iters = nullptr);

struct MapResult {
  Vec x;
  std::vector<double> cost_history;  // J at the start and after each outer step
};

// Lagged-diffusivity fixed point: repeatedly solves the frozen-weight
// quadratic with the unperturbed right-hand side, starting from x = 0.
MapResult map_lagged_diffusivity(const Eigen::Ref<const Vec>& theta, double lambda,
                                 double delta, double eps, int n_outer, int n_cgls,
                                 double tol, const Eigen::Ref<const Sinogram>& b,
                                 const FanBeamGeometry& geom);

// Independence-sampler acceptance probability for a proposed x_star given the
// previous state, with the proposal Gaussian anchored at x_prev for both
// terms (determinants cancel).  Optional diagnostic; the production sampler
// keeps every draw.
double is_acceptance(const Eigen::Ref<const Vec>& x_prev,
                     const Eigen::Ref<const Vec>& x_star,
                     const Eigen::Ref<const Vec>& theta, double lambda, double delta,
                     double eps, const Eigen::Ref<const Sinogram>& b,
                     const FanBeamGeometry& geom, int n_cgls, double tol);

}  // namespace ctgibbs
