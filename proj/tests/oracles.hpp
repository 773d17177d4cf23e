// Test-only reference computations, kept independent of the library paths
// they are used to check: principal angles through a different
// factorization route, naive projector algebra, and retraction-based
// central finite differences for gradient validation.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "grasstrack/manifold.hpp"
#include "grasstrack/objectives.hpp"
#include "grasstrack/scenarios.hpp"

namespace oracles {

using grasstrack::GrassmannPoint;
using grasstrack::Matrix;
using grasstrack::TangentVector;
using grasstrack::Trajectory;
using grasstrack::Vector;

inline GrassmannPoint random_point(std::mt19937_64& rng, int n, int d) {
  return grasstrack::orthonormalize(grasstrack::gaussian_matrix(rng, n, d));
}

inline TangentVector random_tangent(std::mt19937_64& rng,
                                    const GrassmannPoint& y, double norm) {
  TangentVector raw = grasstrack::tangent_project(
      y, grasstrack::gaussian_matrix(rng, y.ambient_dim(), y.subspace_dim()));
  return raw.scaled(norm / raw.norm());
}

/// Random d-by-d orthogonal matrix (QR of a Gaussian draw).
inline Matrix random_orthogonal(std::mt19937_64& rng, int d) {
  Matrix g = grasstrack::gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

inline Matrix projector(const GrassmannPoint& y) {
  return y.basis() * y.basis().transpose();
}

/// Principal angles through a route independent of the implementation:
/// sines from the SVD of (I - YY^T) Z, cosines from the eigendecomposition
/// of (Y^T Z)^T (Y^T Z), combined with atan2 for full-range precision.
inline Vector principal_angles(const GrassmannPoint& y,
                               const GrassmannPoint& z) {
  const int d = y.subspace_dim();
  Matrix residual = z.basis() - projector(y) * z.basis();
  Eigen::JacobiSVD<Matrix> svd(residual);
  Vector sines = svd.singularValues().reverse();  // ascending

  Matrix m = y.basis().transpose() * z.basis();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  Vector cosines =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();  // descending

  Vector angles(d);
  for (int i = 0; i < d; ++i) {
    angles(i) = std::atan2(std::clamp(sines(i), 0.0, 1.0),
                           std::clamp(cosines(i), 0.0, 1.0));
  }
  return angles;
}

inline double geodesic_distance(const GrassmannPoint& y,
                                const GrassmannPoint& z) {
  return oracles::principal_angles(y, z).norm();
}

inline double chordal_distance(const GrassmannPoint& y,
                               const GrassmannPoint& z) {
  return oracles::principal_angles(y, z).array().sin().matrix().norm();
}

/// Central finite difference of f along the geodesic through y with unit
/// direction dir: d/ds f(exp_y(s dir)) at s = 0.
inline double fd_directional(const std::function<double(const GrassmannPoint&)>& f,
                             const GrassmannPoint& y, const Matrix& dir,
                             double step) {
  const GrassmannPoint forward =
      grasstrack::exp_map(y, TangentVector(step * dir, y));
  const GrassmannPoint backward =
      grasstrack::exp_map(y, TangentVector(-step * dir, y));
  return (f(forward) - f(backward)) / (2.0 * step);
}

/// Largest relative disagreement between <grad, D> and the finite
/// difference of f along D, over n_dirs random unit tangent directions.
inline double max_gradient_mismatch(
    const std::function<double(const GrassmannPoint&)>& f,
    const GrassmannPoint& y, const TangentVector& grad, std::mt19937_64& rng,
    int n_dirs = 20, double step = 1e-6) {
  double worst = 0.0;
  const double floor = 1e-9 * (1.0 + grad.norm());
  for (int i = 0; i < n_dirs; ++i) {
    Matrix dir = random_tangent(rng, y, 1.0).direction();
    const double fd = fd_directional(f, y, dir, step);
    const double analytic = (grad.direction().array() * dir.array()).sum();
    const double denom = std::max({std::abs(fd), std::abs(analytic), floor});
    worst = std::max(worst, std::abs(fd - analytic) / denom);
  }
  return worst;
}

/// f over a trajectory with one index replaced, as a function of the
/// replacement point; the shape every regularizer FD check needs.
inline std::function<double(const GrassmannPoint&)> replace_index(
    const Trajectory& traj, int t,
    const std::function<double(const Trajectory&)>& objective) {
  return [&traj, t, objective](const GrassmannPoint& p) {
    std::vector<GrassmannPoint> points = traj.points();
    points[t] = p;
    return objective(Trajectory(std::move(points)));
  };
}

inline Trajectory random_trajectory(std::mt19937_64& rng, int n, int d, int count,
                                    double step_norm = 0.3) {
  std::vector<GrassmannPoint> points;
  points.push_back(random_point(rng, n, d));
  for (int t = 1; t < count; ++t) {
    points.push_back(grasstrack::exp_map(
        points.back(), random_tangent(rng, points.back(), step_norm)));
  }
  return Trajectory(std::move(points));
}

inline Trajectory constant_trajectory(const GrassmannPoint& y, int count) {
  return Trajectory(std::vector<GrassmannPoint>(count, y));
}

/// Equally spaced samples of the geodesic leaving y along h, including y.
inline Trajectory geodesic_samples(const GrassmannPoint& y,
                                   const TangentVector& h, int count) {
  std::vector<GrassmannPoint> points;
  for (int t = 0; t < count; ++t) {
    points.push_back(
        grasstrack::exp_map(y, h.scaled(static_cast<double>(t))));
  }
  return Trajectory(std::move(points));
}

}  // namespace oracles
