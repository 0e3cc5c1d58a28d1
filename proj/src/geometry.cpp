#include "ctgibbs/geometry.hpp"

#include <cmath>

namespace ctgibbs {

Ray make_ray(const FanBeamGeometry& geom, double theta, int det_index) {
  if (det_index < 0 || det_index >= geom.p) {
    throw DataError("detector index out of range");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Eigen::Vector2d axis(c, s);       // origin -> source direction
  const Eigen::Vector2d tangent(-s, c);   // detector axis

  Ray ray;
  ray.angle = theta;
  ray.det_index = det_index;
  ray.source = geom.dso * axis;
  const double offset = (det_index + 0.5) * (geom.det_len / geom.p) - 0.5 * geom.det_len;
  ray.det = -geom.dod * axis + offset * tangent;
  return ray;
}

std::vector<std::pair<Eigen::Index, double>> trace_ray(const Ray& ray,
                                                       const FanBeamGeometry& geom) {
  std::vector<std::pair<Eigen::Index, double>> cells;
  detail::traverse_ray(ray, geom,
                       [&](Eigen::Index idx, double len) { cells.emplace_back(idx, len); });
  return cells;
}

Vec forward_project_angle(const Eigen::Ref<const Vec>& x, const FanBeamGeometry& geom,
                          double theta) {
  if (x.size() != geom.pixels()) {
    throw DataError("image vector length does not match geometry");
  }
  Vec col = Vec::Zero(geom.p);
  for (int tau = 0; tau < geom.p; ++tau) {
    const Ray ray = make_ray(geom, theta, tau);
    double acc = 0.0;
    detail::traverse_ray(ray, geom,
                         [&](Eigen::Index idx, double len) { acc += len * x[idx]; });
    col[tau] = acc;
  }
  return col;
}

Sinogram forward_project(const Eigen::Ref<const Vec>& x, const FanBeamGeometry& geom,
                         const Eigen::Ref<const Vec>& angles) {
  Sinogram out(geom.p, angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    out.col(i) = forward_project_angle(x, geom, angles[i]);
  }
  return out;
}

Vec back_project(const Eigen::Ref<const Sinogram>& r, const FanBeamGeometry& geom,
                 const Eigen::Ref<const Vec>& angles) {
  if (r.rows() != geom.p || r.cols() != angles.size()) {
    throw DataError("sinogram dimensions do not match geometry/angles");
  }
  Vec out = Vec::Zero(geom.pixels());
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    for (int tau = 0; tau < geom.p; ++tau) {
      const double w = r(tau, i);
      if (w == 0.0) continue;
      const Ray ray = make_ray(geom, angles[i], tau);
      detail::traverse_ray(ray, geom,
                           [&](Eigen::Index idx, double len) { out[idx] += w * len; });
    }
  }
  return out;
}

}  // namespace ctgibbs
