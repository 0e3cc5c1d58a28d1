#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctgibbs/cgls.hpp"
#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Hybrid Gibbs sweep over (x, theta, lambda, delta, kappa).  Per iteration:
// one unadjusted Gaussian draw for x, nbar_s single-component random-walk
// Metropolis sweeps for theta, closed-form gamma draws for lambda and delta,
// and nbar_s random-walk Metropolis steps on ln(kappa).  The loop is strictly
// sequential; theta sees the new x, lambda the new (x, theta), delta the new
// x, kappa the new theta.

struct GibbsConfig {
  int n_s = 2000;               // total iterations
  double burn_in_frac = 0.2;    // discarded fraction
  int thinning = 2;             // keep every thinning-th post-burn-in state
  int n_cgls = 10;              // inner least-squares iterations per x-draw
  int nbar_s = 10;              // within-Gibbs sweeps for theta and kappa
  double eps = 1e-6;            // l1 smoothing constant
  double beta = 1e-4;           // hyperprior rate
  double sigma_theta = -1.0;    // per-component proposal std (radians);
                                // negative: 0.05 * nominal angle spacing
  double kappa_step = 0.1;      // initial proposal std on ln(kappa)
  bool adapt_kappa = true;      // tune kappa_step toward 0.44 during burn-in
  double cgls_tol = 1e-10;      // relative normal-residual safety stop
  bool update_angles = true;    // false: fixed-nominal-angles mode
  bool update_hypers = true;    // false: freeze (lambda, delta, kappa)
  bool random_scan = false;     // randomize theta sweep order
  bool is_check = false;        // record independence-sampler acceptance
  std::uint64_t seed = 1;

  void validate() const;
  int burn_in() const;
  int kept() const;  // floor((n_s - burn_in) / thinning)
  double resolved_sigma_theta(const Eigen::Ref<const Vec>& nominal) const;
};

struct GibbsData {
  FanBeamGeometry geom;
  Sinogram sinogram;    // p x q
  Vec nominal_angles;   // length q

  void validate() const;
};

struct GibbsState {
  Vec x;
  Vec theta;
  HyperState hyper;
};

// Append-only record of the kept states plus run counters.
//
// model_calls counts full-projection equivalents per iteration: 2 per inner
// least-squares iteration, 1 for building the per-angle projection cache of
// the theta step, 1 per theta sweep, and 1 for lambda only when no cache is
// available to reuse.  With angle updates on and no early CGLS stop this is
// 2*n_cgls + nbar_s + 1 per iteration.  Diagnostic-only solves (is_check) are
// not counted.
struct GibbsChain {
  Mat x;       // d x kept
  Mat theta;   // q x kept
  Vec lambda;  // kept
  Vec delta;
  Vec kappa;

  std::vector<long> model_calls;   // one entry per iteration
  Eigen::VectorXi theta_accepts;   // accepted proposals per component
  long theta_proposals = 0;        // proposals per component
  long kappa_accepts = 0;
  long kappa_proposals = 0;
  double is_accept_sum = 0.0;      // sum of recorded acceptance probabilities
  long is_checks = 0;

  int n_s = 0;
  int n_burn = 0;
  int thinning = 1;

  Eigen::Index kept() const { return lambda.size(); }
  long total_model_calls() const;
};

// x-step: one unadjusted Gaussian draw anchored at the previous state.
// Adds 2 * (iterations used) to *model_calls.
Vec sample_x(const Eigen::Ref<const Vec>& x_prev, const Eigen::Ref<const Vec>& theta,
             double lambda, double delta, const GibbsConfig& cfg, const GibbsData& data,
             Rng& rng, long* model_calls);

struct ThetaSweepResult {
  Vec theta;
  Sinogram proj;             // per-angle projections at the returned theta
  Eigen::VectorXi accepts;   // accepted proposals per component
};

// nbar_s single-component Metropolis sweeps.  Adds 1 (cache build) plus 1 per
// sweep to *model_calls.  Angles are stored wrapped to [0, 2 pi).
ThetaSweepResult sample_theta(const Eigen::Ref<const Vec>& theta_prev,
                              const Eigen::Ref<const Vec>& x, double lambda, double kappa,
                              double sigma_theta, int nbar_s, bool random_scan,
                              const GibbsData& data, Rng& rng, long* model_calls);

// Gamma draw for the noise precision.  Reuses *cached_proj when given,
// otherwise projects once and adds 1 to *model_calls.
double sample_lambda(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& theta,
                     const GibbsData& data, double beta, Rng& rng,
                     const Sinogram* cached_proj, long* model_calls);

// Gamma draw for the prior inverse scale; no projector calls.
double sample_delta(const Eigen::Ref<const Vec>& x, double beta, double eps, Rng& rng);

struct KappaResult {
  double kappa = 1.0;
  int accepts = 0;
};

// nbar_s random-walk Metropolis steps on ln(kappa), von Mises-data target
// with the change-of-variables term included.
KappaResult sample_kappa(double kappa_prev, const Eigen::Ref<const Vec>& theta,
                         const Eigen::Ref<const Vec>& a, double beta, int nbar_s,
                         double step, Rng& rng);

// Cheap non-zero start: column-scaled backprojection, theta at the nominal
// angles, unit hyperparameters.
GibbsState default_init(const GibbsData& data);

GibbsChain run(const GibbsConfig& cfg, const GibbsData& data, const GibbsState& init);
GibbsChain run(const GibbsConfig& cfg, const GibbsData& data);

}  // namespace ctgibbs
