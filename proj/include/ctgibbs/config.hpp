#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ctgibbs/gibbs.hpp"
#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Run configuration, parsed from a sectioned key = value text file:
//
//   [problem]
//   phantom = grains | ppower          (grains)
//   n = <int>                          (64)    image side
//   n_grains = <int>                   (50)
//   ppower_blur = <float>              (4.0)   blur std, pixels
//   ppower_power = <float>             (2.0)
//   ppower_zero_frac = <float>         (0.6)
//   q = <int>                          (90)    view angle count
//   noise_level = <float>              (0.01)  relative noise
//   sigma_true_deg = <float>           (0.5)   true-angle perturbation std
//   seed = <uint64>                    (1)     data seed
//
//   [geometry]
//   dso = <float>                      (450)
//   dod = <float>                      (150)
//   det_len = <float>                  (300)
//   p = <int>                          (0 -> ceil(1.5 n))
//   fov = <float>                      (0 -> largest fully visible square)
//
//   [sampler]
//   n_s, burn_in_frac, thinning, n_cgls, nbar_s, eps, beta, kappa_step,
//   adapt_kappa, cgls_tol, random_scan, is_check    (see GibbsConfig)
//   sigma_theta_deg = <float>          (negative -> 5% of nominal spacing)
//   mode = uncertain-angles | fixed-nominal-angles  (uncertain-angles)
//   seed = <uint64>                    (derived from problem seed if absent)
//
//   [output]
//   dir = <path>                       (out)   relative paths resolve under
//                                              $CTGIBBS_OUTPUT_ROOT when set
//
// Blank lines and lines starting with '#' are ignored.  Unknown sections or
// keys are rejected, as are duplicate keys.
struct RunConfig {
  std::string phantom = "grains";
  int n = 64;
  int n_grains = 50;
  double ppower_blur = 4.0;
  double ppower_power = 2.0;
  double ppower_zero_frac = 0.6;
  int q = 90;
  double noise_level = 0.01;
  double sigma_true_deg = 0.5;
  std::uint64_t seed = 1;

  double dso = 450.0;
  double dod = 150.0;
  double det_len = 300.0;
  int p = 0;
  double fov = 0.0;

  GibbsConfig gibbs;
  double sigma_theta_deg = -1.0;
  std::string mode = "uncertain-angles";
  bool sampler_seed_set = false;

  std::string output_dir = "out";

  static RunConfig load(const std::filesystem::path& path);

  FanBeamGeometry geometry() const;
  GibbsConfig sampler_config() const;  // with mode/sigma/seed resolved
  void validate() const;
};

// Applies CTGIBBS_OUTPUT_ROOT to relative directories.
std::filesystem::path resolve_output_dir(const std::string& dir);

}  // namespace ctgibbs
