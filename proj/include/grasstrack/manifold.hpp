#pragma once

#include <Eigen/Dense>
#include <utility>

#include "grasstrack/errors.hpp"

namespace grasstrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthonormality tolerance enforced on every subspace basis.
inline constexpr double kOrthonormalTol = 1e-10;
/// Tangency tolerance enforced on every tangent direction.
inline constexpr double kTangencyTol = 1e-10;
/// A basis whose Gram matrix drifts further than this from identity is
/// re-orthonormalized before being returned from a retraction.
inline constexpr double kReorthonormalizeTol = 1e-12;
/// The log map refuses pairs whose smallest Y^T Z singular value is below this.
inline constexpr double kInjectivityTol = 1e-10;
/// Relative singular-value cutoff for declaring a matrix rank deficient.
inline constexpr double kRankTol = 1e-12;

/// A point on the Grassmannian G(n, d): a d-dimensional linear subspace of
/// R^n, represented by an n-by-d basis with orthonormal columns. The
/// representative is not unique; two bases describe the same point whenever
/// their column spans agree.
class GrassmannPoint {
 public:
  /// Wraps an orthonormal basis. Throws NotOrthonormal if the Gram matrix
  /// deviates from identity by more than kOrthonormalTol in Frobenius norm,
  /// and DimensionMismatch unless 1 <= d < n.
  explicit GrassmannPoint(Matrix basis);

  const Matrix& basis() const { return basis_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int subspace_dim() const { return static_cast<int>(basis_.cols()); }

  bool same_shape(const GrassmannPoint& other) const {
    return ambient_dim() == other.ambient_dim() &&
           subspace_dim() == other.subspace_dim();
  }

 private:
  Matrix basis_;
};

/// A direction of travel anchored at a point: an n-by-d matrix H with
/// Y^T H = 0. Its Frobenius norm is the speed of subspace rotation in
/// radians per unit step.
class TangentVector {
 public:
  /// Throws DimensionMismatch on shape disagreement and NotTangent if
  /// ||Y^T H||_F exceeds kTangencyTol.
  TangentVector(Matrix direction, GrassmannPoint base);

  const Matrix& direction() const { return direction_; }
  const GrassmannPoint& base() const { return base_; }
  double norm() const { return direction_.norm(); }

  /// Same anchor, direction multiplied by s.
  TangentVector scaled(double s) const { return {direction_ * s, base_}; }

 private:
  Matrix direction_;
  GrassmannPoint base_;
};

/// The d canonical angles between two subspaces, in radians, each within
/// [0, pi/2], sorted ascending.
struct PrincipalAngles {
  Vector angles;
};

/// Result of one step of the constant-velocity dynamical model: the new
/// point together with the velocity parallel-transported to it.
struct GeodesicState {
  GrassmannPoint point;
  TangentVector velocity;
};

/// Orthonormal basis for the column space of M, preserving the column order
/// of M (Householder QR with a positive-diagonal sign convention). Throws
/// RankDeficient when the numerical rank of M is below its column count
/// (smallest singular value under kRankTol times the largest).
GrassmannPoint orthonormalize(const Matrix& m);

/// Principal angles theta_i = arccos(sigma_i(Y^T Z)), clamped into [0, 1]
/// before the arccosine to absorb rounding.
PrincipalAngles principal_angles(const GrassmannPoint& y,
                                 const GrassmannPoint& z);

/// Arc-length distance ||theta||_2 in radians. The angles are evaluated
/// from both their sines and cosines so the distance keeps full precision
/// for nearly identical subspaces, where arccos alone cannot.
double geodesic_distance(const GrassmannPoint& y, const GrassmannPoint& z);

/// Projection-F-norm distance ||sin theta||_2 = 2^{-1/2} ||ZZ^T - YY^T||_F,
/// evaluated from the projector difference; matrix products only, no SVD.
double chordal_distance(const GrassmannPoint& y, const GrassmannPoint& z);

/// ZZ^T - YY^T, the first-order surrogate for the log map.
Matrix projector_difference(const GrassmannPoint& y, const GrassmannPoint& z);

/// Projects an arbitrary n-by-d matrix onto the tangent space at Y:
/// (I - YY^T) G.
TangentVector tangent_project(const GrassmannPoint& y, const Matrix& g);

/// Follows the geodesic leaving Y with initial direction H for unit time.
/// With the thin SVD H = U S V^T the endpoint is
/// Y V cos(S) V^T + U sin(S) V^T, re-orthonormalized if column
/// orthonormality has drifted past kReorthonormalizeTol.
GrassmannPoint exp_map(const GrassmannPoint& y, const TangentVector& h);

/// Inverse of exp_map for pairs within the injectivity radius: the tangent
/// H at Y with exp_map(Y, H) spanning Z and ||H||_F equal to the geodesic
/// distance. Computed as L = (I - YY^T) Z (Y^T Z)^{-1}, thin SVD
/// L = U S V^T, H = U arctan(S) V^T. Throws OutsideInjectivityRadius when
/// the smallest singular value of Y^T Z is at or below kInjectivityTol.
TangentVector log_map(const GrassmannPoint& y, const GrassmannPoint& z);

/// One step of the constant-velocity model: the point advances along the
/// geodesic generated by H, and H is parallel-transported along that same
/// geodesic. Transport preserves ||H||_F and equals -log_{Y'}(Y).
GeodesicState geodesic_step(const GrassmannPoint& y, const TangentVector& h);

}  // namespace grasstrack
