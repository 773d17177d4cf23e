#pragma once

#include <string>
#include <vector>

#include "grasstrack/manifold.hpp"

namespace grasstrack {

/// An ordered sequence of subspaces, one per data batch, all on the same
/// Grassmannian G(n, d).
class Trajectory {
 public:
  explicit Trajectory(std::vector<GrassmannPoint> points);

  int length() const { return static_cast<int>(points_.size()); }
  int ambient_dim() const { return points_.front().ambient_dim(); }
  int subspace_dim() const { return points_.front().subspace_dim(); }

  const GrassmannPoint& operator[](int t) const { return points_.at(t); }
  const std::vector<GrassmannPoint>& points() const { return points_; }

 private:
  std::vector<GrassmannPoint> points_;
};

/// An ordered sequence of data batches, each an n-by-B matrix of B samples.
class BatchSet {
 public:
  explicit BatchSet(std::vector<Matrix> batches);

  int length() const { return static_cast<int>(batches_.size()); }
  int ambient_dim() const { return static_cast<int>(batches_.front().rows()); }
  int batch_size() const { return static_cast<int>(batches_.front().cols()); }

  const Matrix& operator[](int t) const { return batches_.at(t); }
  const std::vector<Matrix>& batches() const { return batches_; }

 private:
  std::vector<Matrix> batches_;
};

/// Which trajectory-smoothness regularizer the objective carries.
/// VelocityGeodesicEvalOnly supports evaluation but has no gradient.
enum class RegularizerKind {
  PositionGeodesic,
  PositionChordal,
  VelocityChordal,
  VelocityGeodesicEvalOnly,
};

bool has_gradient(RegularizerKind kind);
std::string to_string(RegularizerKind kind);

/// Squared projection residual ||X - YY^T X||_F^2 of one batch.
double batch_loss(const GrassmannPoint& y, const Matrix& x);

/// Riemannian gradient of batch_loss: -2 (I - YY^T) X X^T Y.
TangentVector grad_batch(const GrassmannPoint& y, const Matrix& x);

/// Sum of squared geodesic distances between consecutive points,
/// sum_t ||log_{Y_t}(Y_{t+1})||_F^2.
double pos_reg_geodesic(const Trajectory& traj);

/// Gradient of pos_reg_geodesic at index t:
/// -2 (log_{Y_t}(Y_{t+1}) + log_{Y_t}(Y_{t-1})), dropping whichever
/// neighbor does not exist at the boundary.
TangentVector grad_pos_geodesic(const Trajectory& traj, int t);

/// Sum of squared projector differences between consecutive points,
/// sum_t ||Y_{t+1}Y_{t+1}^T - Y_t Y_t^T||_F^2 = 2 sum_t chordal^2. No SVD.
double pos_reg_chordal(const Trajectory& traj);

/// Gradient of pos_reg_chordal at index t:
/// -4 (I - Y_t Y_t^T)(Y_{t-1}Y_{t-1}^T + Y_{t+1}Y_{t+1}^T) Y_t with missing
/// neighbors dropped at the boundary.
TangentVector grad_pos_chordal(const Trajectory& traj, int t);

/// Sum of squared second differences of projectors,
/// sum_t ||P_{t+2} - 2 P_{t+1} + P_t||_F^2. Requires T >= 3.
double vel_reg_chordal(const Trajectory& traj);

/// Gradient of vel_reg_chordal at index t. In the interior this is
/// -4 (I - P_t)(4P_{t+1} + 4P_{t-1} - P_{t+2} - P_{t-2}) Y_t; near the
/// boundary only the contributions of second-difference terms that actually
/// exist are summed, so the gradient stays the exact derivative of the sum.
TangentVector grad_vel_chordal(const Trajectory& traj, int t);

/// Geodesic velocity regularizer, evaluation only:
/// sum_t ||log_{Y_{t+1}}(Y_{t+2}) + log_{Y_{t+1}}(Y_t)||_F^2. Zero exactly
/// when the points are equally spaced samples of one geodesic.
double vel_reg_geodesic_eval(const Trajectory& traj);

/// Value of the regularizer selected by kind.
double regularizer_value(const Trajectory& traj, RegularizerKind kind);

/// Full objective sum_t batch_loss(Y_t, X_t) + lambda * F({Y_t}).
double total_objective(const Trajectory& traj, const BatchSet& data,
                       double lambda, RegularizerKind kind);

/// Gradient of total_objective with respect to Y_t. Throws
/// UnsupportedGradient for VelocityGeodesicEvalOnly.
TangentVector total_gradient(const Trajectory& traj, const BatchSet& data,
                             double lambda, RegularizerKind kind, int t);

}  // namespace grasstrack
