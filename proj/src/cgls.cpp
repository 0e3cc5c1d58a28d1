#include "ctgibbs/cgls.hpp"

#include <cmath>

namespace ctgibbs {

StackedOperator::StackedOperator(const FanBeamGeometry& geom,
                                 const Eigen::Ref<const Vec>& theta, double lambda,
                                 double delta, const DiffWeights& w)
    : geom_(geom),
      theta_(theta),
      sqrt_lambda_(std::sqrt(lambda)),
      sqrt_delta_(std::sqrt(delta)),
      sqrt_w1_(w.w1.array().sqrt().matrix()),
      sqrt_w2_(w.w2.array().sqrt().matrix()),
      m_(geom.rays(theta.size())),
      d_(geom.pixels()) {
  if (!(lambda >= 0.0) || !(delta >= 0.0)) {
    throw NumericalError("stacked operator requires lambda, delta >= 0");
  }
  if (w.w1.size() != d_ || w.w2.size() != d_) {
    throw DataError("difference weights do not match image size");
  }
}

Vec StackedOperator::apply(const Eigen::Ref<const Vec>& v) const {
  if (v.size() != d_) throw DataError("operator input has wrong length");
  Vec out(rows());
  const Sinogram av = forward_project(v, geom_, theta_);
  out.head(m_) = sqrt_lambda_ * av.reshaped();
  out.segment(m_, d_) = sqrt_delta_ * (sqrt_w1_.array() * apply_diff(1, v).array()).matrix();
  out.tail(d_) = sqrt_delta_ * (sqrt_w2_.array() * apply_diff(2, v).array()).matrix();
  return out;
}

Vec StackedOperator::apply_transpose(const Eigen::Ref<const Vec>& r) const {
  if (r.size() != rows()) throw DataError("operator input has wrong length");
  const auto r_sino = r.head(m_).reshaped(geom_.p, theta_.size());
  Vec out = sqrt_lambda_ * back_project(r_sino, geom_, theta_);
  out += sqrt_delta_ *
         apply_diff_transpose(1, (sqrt_w1_.array() * r.segment(m_, d_).array()).matrix());
  out += sqrt_delta_ *
         apply_diff_transpose(2, (sqrt_w2_.array() * r.tail(d_).array()).matrix());
  return out;
}

CglsResult laplace_solve(const Eigen::Ref<const Vec>& xbar,
                         const Eigen::Ref<const Vec>& theta, double lambda, double delta,
                         double eps, int n_cgls, double tol,
                         const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom,
                         const Eigen::Ref<const Vec>& xi_bar) {
  const DiffWeights w = compute_weights(xbar, eps);
  const StackedOperator M(geom, theta, lambda, delta, w);
  if (xi_bar.size() != M.rows()) throw DataError("perturbation has wrong length");
  Vec y = xi_bar;
  y.head(b.size()) += std::sqrt(lambda) * b.reshaped();
  return cgls_solve(M, y, n_cgls, tol);
}

Vec laplace_draw(const Eigen::Ref<const Vec>& xbar, const Eigen::Ref<const Vec>& theta,
                 double lambda, double delta, double eps, int n_cgls, double tol,
                 const Eigen::Ref<const Sinogram>& b, const FanBeamGeometry& geom,
                 Rng& rng, int* cgls_iters) {
  const Eigen::Index rows = b.size() + 2 * geom.pixels();
  const Vec xi = randn_vec(rows, rng);
  CglsResult res = laplace_solve(xbar, theta, lambda, delta, eps, n_cgls, tol, b, geom, xi);
  if (res.status == CglsStatus::breakdown) {
    throw NumericalError("CGLS breakdown while drawing from the Gaussian approximation");
  }
  if (cgls_iters) *cgls_iters = res.iters;
  return std::move(res.x);
}

MapResult map_lagged_diffusivity(const Eigen::Ref<const Vec>& theta, double lambda,
                                 double delta, double eps, int n_outer, int n_cgls,
                                 double tol, const Eigen::Ref<const Sinogram>& b,
                                 const FanBeamGeometry& geom) {
  if (n_outer < 1) throw ConfigError("map_lagged_diffusivity requires n_outer >= 1");
  MapResult out;
  out.x = Vec::Zero(geom.pixels());
  const Vec zero_xi = Vec::Zero(b.size() + 2 * geom.pixels());
  out.cost_history.push_back(cost_J(out.x, theta, lambda, delta, eps, b, geom));
  for (int k = 0; k < n_outer; ++k) {
    CglsResult step =
        laplace_solve(out.x, theta, lambda, delta, eps, n_cgls, tol, b, geom, zero_xi);
    if (step.status == CglsStatus::breakdown) {
      throw NumericalError("CGLS breakdown in lagged-diffusivity iteration");
    }
    out.x = std::move(step.x);
    out.cost_history.push_back(cost_J(out.x, theta, lambda, delta, eps, b, geom));
  }
  return out;
}

double is_acceptance(const Eigen::Ref<const Vec>& x_prev,
                     const Eigen::Ref<const Vec>& x_star,
                     const Eigen::Ref<const Vec>& theta, double lambda, double delta,
                     double eps, const Eigen::Ref<const Sinogram>& b,
                     const FanBeamGeometry& geom, int n_cgls, double tol) {
  if (!x_prev.allFinite() || !x_star.allFinite()) {
    throw NumericalError("is_acceptance requires finite states");
  }
  const DiffWeights w = compute_weights(x_prev, eps);
  const StackedOperator M(geom, theta, lambda, delta, w);

  // Unperturbed solve for the proposal mean.
  Vec y0 = Vec::Zero(M.rows());
  y0.head(b.size()) = std::sqrt(lambda) * b.reshaped();
  CglsResult mean = cgls_solve(M, y0, n_cgls, tol);
  if (mean.status == CglsStatus::breakdown) {
    throw NumericalError("CGLS breakdown in is_acceptance mean solve");
  }

  auto log_pi1 = [&](const Eigen::Ref<const Vec>& v) {
    const double r2 = (forward_project(v, geom, theta) - b).squaredNorm();
    return -0.5 * lambda * r2 - delta * tv_l1(v);
  };
  auto quad_form = [&](const Vec& v) { return M.apply(v - mean.x).squaredNorm(); };

  const double log_ratio = log_pi1(x_star) - log_pi1(x_prev) +
                           0.5 * (quad_form(x_star) - quad_form(x_prev));
  return std::min(1.0, std::exp(log_ratio));
}

}  // namespace ctgibbs
