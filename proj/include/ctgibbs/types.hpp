#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "ctgibbs/errors.hpp"

namespace ctgibbs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Projection data, one column per view angle (p detector bins x q angles).
// The vectorized form b stacks the columns, so b[tau + i*p] = S(tau, i).
using Sinogram = Eigen::MatrixXd;

// Fan-beam scanner constants.  The X-ray source moves on a circle of radius
// dso around the origin.  A flat detector of total length det_len with p
// equispaced element centers sits at distance dod behind the origin,
// perpendicular to the source-origin axis.  The reconstruction domain is the
// square [-fov/2, fov/2]^2 discretized into n x n pixels.
struct FanBeamGeometry {
  double dso = 450.0;
  double dod = 150.0;
  double det_len = 300.0;
  int p = 0;
  int n = 0;
  double fov = 0.0;

  // Side length of the largest square that every source position sees in
  // full: sqrt(2) * dso * sin(atan(det_len/2 / (dso + dod))).
  static double default_fov(double dso, double dod, double det_len);

  // Scanner constants 450/150/300 with p = ceil(1.5 n) and the default fov.
  static FanBeamGeometry with_defaults(int n_pixels);

  Eigen::Index pixels() const { return static_cast<Eigen::Index>(n) * n; }
  Eigen::Index rays(Eigen::Index q) const { return static_cast<Eigen::Index>(p) * q; }
  double pixel_size() const { return fov / n; }

  void validate() const;
};

// Attenuation image on an n x n grid, stored column-stacked: entry (i, j) of
// the array lives at values[i + j*n], i the row index, j the column index.
// Row i corresponds to the y-coordinate, column j to the x-coordinate.
struct ImageGrid {
  int n = 0;
  Vec values;

  ImageGrid() = default;
  ImageGrid(int side, Vec v) : n(side), values(std::move(v)) {}

  void validate() const;
};

// A single source-to-detector-element line.
struct Ray {
  double angle = 0.0;   // source azimuth, radians
  int det_index = 0;    // detector element, [0, p)
  Eigen::Vector2d source = Eigen::Vector2d::Zero();
  Eigen::Vector2d det = Eigen::Vector2d::Zero();
};

// Hyperparameter triple: noise precision, prior inverse scale, von Mises
// concentration.  All strictly positive.
struct HyperState {
  double lambda = 1.0;
  double delta = 1.0;
  double kappa = 1.0;

  void validate() const;
};

// View angles theta and their nominal (prior location) angles a, radians.
struct AngleState {
  Vec theta;
  Vec a;
};

// Wraps an angle to [0, 2*pi).
inline double wrap_two_pi(double t) {
  const double two_pi = 2.0 * M_PI;
  double u = std::fmod(t, two_pi);
  if (u < 0.0) u += two_pi;
  if (u >= two_pi) u = 0.0;
  return u;
}

// Signed angular difference wrapped to [-pi, pi].
inline double wrap_pi(double t) { return std::remainder(t, 2.0 * M_PI); }

// Side length n of a column-stacked n x n image vector; rejects non-square
// lengths.
int image_side(Eigen::Index d);

// Nominal angle grid a_i = i * 2*pi/q, i = 0..q-1.
Vec nominal_angle_grid(int q);

}  // namespace ctgibbs
