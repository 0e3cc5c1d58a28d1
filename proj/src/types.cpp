#include "ctgibbs/types.hpp"

#include <cmath>

namespace ctgibbs {

double FanBeamGeometry::default_fov(double dso, double dod, double det_len) {
  const double half_fan = std::atan(0.5 * det_len / (dso + dod));
  return std::sqrt(2.0) * dso * std::sin(half_fan);
}

FanBeamGeometry FanBeamGeometry::with_defaults(int n_pixels) {
  FanBeamGeometry g;
  g.n = n_pixels;
  g.p = static_cast<int>(std::ceil(1.5 * n_pixels));
  g.fov = default_fov(g.dso, g.dod, g.det_len);
  g.validate();
  return g;
}

void FanBeamGeometry::validate() const {
  if (!(dso > 0.0) || !(dod > 0.0) || !(det_len > 0.0) || !(fov > 0.0) || p < 1 || n < 1) {
    throw ConfigError("fan-beam geometry requires dso, dod, det_len, fov > 0 and p, n >= 1");
  }
}

void ImageGrid::validate() const {
  if (n < 1 || values.size() != static_cast<Eigen::Index>(n) * n) {
    throw DataError("image vector length does not match n^2");
  }
  if (!values.allFinite()) throw DataError("image contains non-finite entries");
}

void HyperState::validate() const {
  const bool ok = lambda > 0.0 && delta > 0.0 && kappa > 0.0 && std::isfinite(lambda) &&
                  std::isfinite(delta) && std::isfinite(kappa);
  if (!ok) throw NumericalError("hyperparameters must be strictly positive and finite");
}

int image_side(Eigen::Index d) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  if (static_cast<Eigen::Index>(n) * n != d) {
    throw DataError("vector length " + std::to_string(d) + " is not a square number");
  }
  return n;
}

Vec nominal_angle_grid(int q) {
  if (q < 1) throw ConfigError("angle count q must be >= 1");
  Vec a(q);
  for (int i = 0; i < q; ++i) a[i] = 2.0 * M_PI * i / q;
  return a;
}

}  // namespace ctgibbs
