#include "ctgibbs/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ctgibbs/densities.hpp"

namespace ctgibbs {

void GibbsConfig::validate() const {
  if (n_s < 1) throw ConfigError("n_s must be >= 1");
  if (burn_in_frac < 0.0 || burn_in_frac >= 1.0) throw ConfigError("burn_in_frac must be in [0, 1)");
  if (thinning < 1) throw ConfigError("thinning must be >= 1");
  if (n_cgls < 1) throw ConfigError("n_cgls must be >= 1");
  if (nbar_s < 1) throw ConfigError("nbar_s must be >= 1");
  if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(kappa_step > 0.0)) throw ConfigError("kappa_step must be > 0");
  if (!(cgls_tol >= 0.0)) throw ConfigError("cgls_tol must be >= 0");
}

int GibbsConfig::burn_in() const { return static_cast<int>(burn_in_frac * n_s); }

int GibbsConfig::kept() const { return (n_s - burn_in()) / thinning; }

double GibbsConfig::resolved_sigma_theta(const Eigen::Ref<const Vec>& nominal) const {
  if (sigma_theta >= 0.0) return sigma_theta;
  if (nominal.size() < 2) return 0.05 * 2.0 * M_PI;
  return 0.05 * (nominal[1] - nominal[0]);
}

void GibbsData::validate() const {
  geom.validate();
  if (sinogram.rows() != geom.p || sinogram.cols() != nominal_angles.size()) {
    throw DataError("sinogram dimensions do not match geometry/angles");
  }
  if (!sinogram.allFinite()) throw DataError("sinogram contains non-finite entries");
}

long GibbsChain::total_model_calls() const {
  return std::accumulate(model_calls.begin(), model_calls.end(), 0L);
}

Vec sample_x(const Eigen::Ref<const Vec>& x_prev, const Eigen::Ref<const Vec>& theta,
             double lambda, double delta, const GibbsConfig& cfg, const GibbsData& data,
             Rng& rng, long* model_calls) {
  int iters = 0;
  Vec x = laplace_draw(x_prev, theta, lambda, delta, cfg.eps, cfg.n_cgls, cfg.cgls_tol,
                       data.sinogram, data.geom, rng, &iters);
  if (model_calls) *model_calls += 2L * iters;
  return x;
}

ThetaSweepResult sample_theta(const Eigen::Ref<const Vec>& theta_prev,
                              const Eigen::Ref<const Vec>& x, double lambda, double kappa,
                              double sigma_theta, int nbar_s, bool random_scan,
                              const GibbsData& data, Rng& rng, long* model_calls) {
  const Eigen::Index q = theta_prev.size();
  const Vec& a = data.nominal_angles;
  if (q != a.size()) throw DataError("theta/nominal angle count mismatch");

  ThetaSweepResult res;
  res.theta = theta_prev;
  res.accepts = Eigen::VectorXi::Zero(q);

  // Projections at the current angles; one column replaced per acceptance.
  res.proj = forward_project(x, data.geom, res.theta);
  if (model_calls) *model_calls += 1;

  Vec misfit(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    misfit[i] = (res.proj.col(i) - data.sinogram.col(i)).squaredNorm();
  }

  std::vector<Eigen::Index> order(q);
  std::iota(order.begin(), order.end(), 0);

  for (int sweep = 0; sweep < nbar_s; ++sweep) {
    if (random_scan) {
      for (Eigen::Index i = q - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.uniform() * (i + 1));
        std::swap(order[i], order[std::min(j, i)]);
      }
    }
    for (const Eigen::Index i : order) {
      const double proposal = wrap_two_pi(res.theta[i] + sigma_theta * rng.normal());
      const Vec col = forward_project_angle(x, data.geom, proposal);
      const double misfit_new = (col - data.sinogram.col(i)).squaredNorm();
      const double log_alpha = -0.5 * lambda * (misfit_new - misfit[i]) +
                               kappa * (std::cos(proposal - a[i]) - std::cos(res.theta[i] - a[i]));
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      if (std::log(u) < log_alpha) {
        res.theta[i] = proposal;
        res.proj.col(i) = col;
        misfit[i] = misfit_new;
        res.accepts[i] += 1;
      }
    }
    if (model_calls) *model_calls += 1;
  }
  return res;
}

double sample_lambda(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                     const GibbsData& data, double beta, Rng& rng,
                     const Sinogram* cached_proj, long* model_calls) {
  double residual2 = 0.0;
  if (cached_proj) {
    residual2 = (*cached_proj - data.sinogram).squaredNorm();
  } else {
    residual2 = (forward_project(x, data.geom, theta) - data.sinogram).squaredNorm();
    if (model_calls) *model_calls += 1;
  }
  const double shape = 0.5 * static_cast<double>(data.sinogram.size()) + 1.0;
  const double rate = 0.5 * residual2 + beta;
  return rng.gamma(shape, rate);
}

double sample_delta(const Eigen::Ref<const Vec>& x, double beta, double eps, Rng& rng) {
  const DiffWeights w = compute_weights(x, eps);
  const double shape = static_cast<double>(x.size()) + 1.0;
  const double rate = quad_form_L(w, x) + beta;
  return rng.gamma(shape, rate);
}

KappaResult sample_kappa(double kappa_prev, const Eigen::Ref<const Vec>& theta,
                         const Eigen::Ref<const Vec>& a, double beta, int nbar_s,
                         double step, Rng& rng) {
  if (!(kappa_prev > 0.0)) throw NumericalError("kappa must be > 0");
  const double cos_sum = (theta - a).array().cos().sum();
  const double q = static_cast<double>(theta.size());

  // Target on k' = ln(kappa), Jacobian term +k' included.
  auto log_density = [&](double log_kappa) {
    const double kappa = std::exp(log_kappa);
    return -q * log_bessel_i0(kappa) - kappa * (beta - cos_sum) + log_kappa;
  };

  KappaResult res;
  double log_kappa = std::log(kappa_prev);
  double current = log_density(log_kappa);
  for (int it = 0; it < nbar_s; ++it) {
    const double proposal = log_kappa + step * rng.normal();
    const double candidate = log_density(proposal);
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    if (std::log(u) < candidate - current) {
      log_kappa = proposal;
      current = candidate;
      res.accepts += 1;
    }
  }
  res.kappa = std::exp(log_kappa);
  return res;
}

GibbsState default_init(const GibbsData& data) {
  data.validate();
  GibbsState state;
  const Vec bp = back_project(data.sinogram, data.geom, data.nominal_angles);
  const Vec scale = back_project(Sinogram::Ones(data.sinogram.rows(), data.sinogram.cols()),
                                 data.geom, data.nominal_angles);
  state.x = Vec::Zero(data.geom.pixels());
  const double floor = 1e-12 * scale.maxCoeff();
  for (Eigen::Index j = 0; j < state.x.size(); ++j) {
    if (scale[j] > floor) state.x[j] = bp[j] / scale[j];
  }
  state.theta = data.nominal_angles;
  state.hyper = HyperState{1.0, 1.0, 1.0};
  return state;
}

GibbsChain run(const GibbsConfig& cfg, const GibbsData& data, const GibbsState& init) {
  cfg.validate();
  data.validate();
  init.hyper.validate();
  const Eigen::Index q = data.nominal_angles.size();
  const Eigen::Index d = data.geom.pixels();
  if (init.x.size() != d || init.theta.size() != q) {
    throw DataError("initial state dimensions do not match data");
  }

  Rng master(cfg.seed);
  Rng rng_x = master.substream(1);
  Rng rng_theta = master.substream(2);
  Rng rng_lambda = master.substream(3);
  Rng rng_delta = master.substream(4);
  Rng rng_kappa = master.substream(5);

  const int n_burn = cfg.burn_in();
  const int n_kept = cfg.kept();
  const double sigma_theta = cfg.resolved_sigma_theta(data.nominal_angles);

  GibbsChain chain;
  chain.x.resize(d, n_kept);
  chain.theta.resize(q, n_kept);
  chain.lambda.resize(n_kept);
  chain.delta.resize(n_kept);
  chain.kappa.resize(n_kept);
  chain.model_calls.reserve(cfg.n_s);
  chain.theta_accepts = Eigen::VectorXi::Zero(q);
  chain.n_s = cfg.n_s;
  chain.n_burn = n_burn;
  chain.thinning = cfg.thinning;

  GibbsState state = init;
  double kappa_step = cfg.kappa_step;
  Eigen::Index kept = 0;

  for (int j = 1; j <= cfg.n_s; ++j) {
    long calls = 0;
    try {
      // x | theta, lambda, delta
      const Vec x_prev = std::move(state.x);
      state.x = sample_x(x_prev, state.theta, state.hyper.lambda, state.hyper.delta, cfg,
                         data, rng_x, &calls);
      if (cfg.is_check) {
        chain.is_accept_sum +=
            is_acceptance(x_prev, state.x, state.theta, state.hyper.lambda,
                          state.hyper.delta, cfg.eps, data.sinogram, data.geom, cfg.n_cgls,
                          cfg.cgls_tol);
        chain.is_checks += 1;
      }

      // theta | x, lambda, kappa
      std::optional<Sinogram> proj_cache;
      if (cfg.update_angles && q > 0) {
        ThetaSweepResult res =
            sample_theta(state.theta, state.x, state.hyper.lambda, state.hyper.kappa,
                         sigma_theta, cfg.nbar_s, cfg.random_scan, data, rng_theta, &calls);
        state.theta = std::move(res.theta);
        proj_cache = std::move(res.proj);
        chain.theta_accepts += res.accepts;
        chain.theta_proposals += cfg.nbar_s;
      }

      if (cfg.update_hypers) {
        // lambda | x, theta
        state.hyper.lambda =
            sample_lambda(state.x, state.theta, data, cfg.beta, rng_lambda,
                          proj_cache ? &*proj_cache : nullptr, &calls);
        // delta | x
        state.hyper.delta = sample_delta(state.x, cfg.beta, cfg.eps, rng_delta);
        // kappa | theta
        KappaResult kres = sample_kappa(state.hyper.kappa, state.theta, data.nominal_angles,
                                        cfg.beta, cfg.nbar_s, kappa_step, rng_kappa);
        state.hyper.kappa = kres.kappa;
        chain.kappa_accepts += kres.accepts;
        chain.kappa_proposals += cfg.nbar_s;
        if (cfg.adapt_kappa && j <= n_burn) {
          const double rate = static_cast<double>(kres.accepts) / cfg.nbar_s;
          kappa_step *= std::exp(std::pow(j, -0.6) * (rate - 0.44));
          kappa_step = std::clamp(kappa_step, 1e-3, 10.0);
        }
      }

      if (!state.x.allFinite() || !state.theta.allFinite()) {
        throw NumericalError("non-finite state");
      }
      state.hyper.validate();
    } catch (const std::exception& e) {
      throw NumericalError("Gibbs iteration " + std::to_string(j) + " failed: " + e.what());
    }

    chain.model_calls.push_back(calls);
    if (j > n_burn && (j - n_burn) % cfg.thinning == 0 && kept < n_kept) {
      chain.x.col(kept) = state.x;
      chain.theta.col(kept) = state.theta;
      chain.lambda[kept] = state.hyper.lambda;
      chain.delta[kept] = state.hyper.delta;
      chain.kappa[kept] = state.hyper.kappa;
      ++kept;
    }
  }
  return chain;
}

GibbsChain run(const GibbsConfig& cfg, const GibbsData& data) {
  return run(cfg, data, default_init(data));
}

}  // namespace ctgibbs
