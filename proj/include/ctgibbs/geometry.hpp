#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "ctgibbs/types.hpp"

namespace ctgibbs {

// Matrix-free fan-beam projector.  Rays are zero-thickness lines from the
// source point to a detector element center; each system-matrix entry is the
// exact chord length of the ray inside a pixel, computed by parametric grid
// traversal.  All operations are pure and single-threaded; rays are processed
// in (angle, detector) lexicographic order and per-ray contributions are
// accumulated in traversal order, so results are reproducible bit for bit.

// Ray through detector element `det_index` at source azimuth `theta`.
Ray make_ray(const FanBeamGeometry& geom, double theta, int det_index);

// Every pixel crossed by the ray together with its chord length.  Pixels the
// segment does not cross are absent; a ray missing the image square yields an
// empty sequence.
std::vector<std::pair<Eigen::Index, double>> trace_ray(const Ray& ray,
                                                       const FanBeamGeometry& geom);

// S(tau, i) = sum_j chord(theta_i, tau, j) * x[j].
Sinogram forward_project(const Eigen::Ref<const Vec>& x, const FanBeamGeometry& geom,
                         const Eigen::Ref<const Vec>& angles);

// Single-angle block: column i of forward_project for angle theta.
Vec forward_project_angle(const Eigen::Ref<const Vec>& x, const FanBeamGeometry& geom,
                          double theta);

// Exact adjoint of forward_project, built from the same chords.
Vec back_project(const Eigen::Ref<const Sinogram>& r, const FanBeamGeometry& geom,
                 const Eigen::Ref<const Vec>& angles);

namespace detail {

// Walks the segment src -> dst across the n x n grid of physical side fov
// centered at the origin, invoking visit(flat_pixel_index, chord_length) for
// every crossed pixel in traversal order.  Pixel (i, j) -> index i + j*n with
// i the y-row and j the x-column.
template <class Visit>
void traverse_grid(const Eigen::Vector2d& src, const Eigen::Vector2d& dst, int n,
                   double fov, Visit&& visit) {
  const Eigen::Vector2d d = dst - src;
  const double seg_len = d.norm();
  if (seg_len == 0.0) return;

  const double half = 0.5 * fov;
  const double h = fov / n;

  // Clip the parameter interval [0, 1] against the image square.
  double t0 = 0.0;
  double t1 = 1.0;
  for (int ax = 0; ax < 2; ++ax) {
    if (d[ax] != 0.0) {
      double ta = (-half - src[ax]) / d[ax];
      double tb = (half - src[ax]) / d[ax];
      if (ta > tb) std::swap(ta, tb);
      if (ta > t0) t0 = ta;
      if (tb < t1) t1 = tb;
    } else if (src[ax] <= -half || src[ax] >= half) {
      return;
    }
  }
  if (t0 >= t1) return;

  const Eigen::Vector2d entry = src + t0 * d;
  auto cell = [&](double coord) {
    int c = static_cast<int>(std::floor((coord + half) / h));
    if (c < 0) c = 0;
    if (c >= n) c = n - 1;
    return c;
  };
  int jx = cell(entry.x());
  int iy = cell(entry.y());

  const int step_x = d.x() > 0.0 ? 1 : -1;
  const int step_y = d.y() > 0.0 ? 1 : -1;

  // Parameter of the next pixel-boundary crossing along each axis.
  const double inf = std::numeric_limits<double>::infinity();
  double tx = inf, dtx = inf;
  if (d.x() != 0.0) {
    const double next_plane = -half + (jx + (step_x > 0 ? 1 : 0)) * h;
    tx = (next_plane - src.x()) / d.x();
    dtx = h / std::abs(d.x());
  }
  double ty = inf, dty = inf;
  if (d.y() != 0.0) {
    const double next_plane = -half + (iy + (step_y > 0 ? 1 : 0)) * h;
    ty = (next_plane - src.y()) / d.y();
    dty = h / std::abs(d.y());
  }

  double t = t0;
  while (t < t1) {
    double t_next = tx < ty ? tx : ty;
    if (t_next > t1) t_next = t1;
    const double chord = (t_next - t) * seg_len;
    if (chord > 0.0) {
      visit(static_cast<Eigen::Index>(iy) + static_cast<Eigen::Index>(jx) * n, chord);
    }
    if (t_next >= t1) break;
    if (tx <= t_next) {
      jx += step_x;
      tx += dtx;
      if (jx < 0 || jx >= n) break;
    }
    if (ty <= t_next) {
      iy += step_y;
      ty += dty;
      if (iy < 0 || iy >= n) break;
    }
    t = t_next;
  }
}

template <class Visit>
void traverse_ray(const Ray& ray, const FanBeamGeometry& geom, Visit&& visit) {
  traverse_grid(ray.source, ray.det, geom.n, geom.fov, std::forward<Visit>(visit));
}

}  // namespace detail

}  // namespace ctgibbs
