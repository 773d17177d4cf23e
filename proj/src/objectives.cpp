#include "grasstrack/objectives.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace grasstrack {

namespace {

void require_index(const Trajectory& traj, int t) {
  if (t < 0 || t >= traj.length()) {
    throw std::out_of_range("trajectory index " + std::to_string(t) +
                            " out of range [0, " +
                            std::to_string(traj.length()) + ")");
  }
}

void require_batch_shape(const GrassmannPoint& y, const Matrix& x) {
  if (x.rows() != y.basis().rows()) {
    throw DimensionMismatch("batch has " + std::to_string(x.rows()) +
                            " rows, subspace lives in dimension " +
                            std::to_string(y.basis().rows()));
  }
}

TangentVector log_between(const Trajectory& traj, int from, int to) {
  try {
    return log_map(traj[from], traj[to]);
  } catch (const OutsideInjectivityRadius&) {
    throw OutsideInjectivityRadius(
        "trajectory points " + std::to_string(from) + " and " +
        std::to_string(to) + " are outside the injectivity radius");
  }
}

Matrix projector(const GrassmannPoint& y) {
  return y.basis() * y.basis().transpose();
}

}  // namespace

Trajectory::Trajectory(std::vector<GrassmannPoint> points)
    : points_(std::move(points)) {
  if (points_.empty()) {
    throw DimensionMismatch("trajectory must contain at least one point");
  }
  for (const GrassmannPoint& p : points_) {
    if (!p.same_shape(points_.front())) {
      throw DimensionMismatch("trajectory points live on different Grassmannians");
    }
  }
}

BatchSet::BatchSet(std::vector<Matrix> batches) : batches_(std::move(batches)) {
  if (batches_.empty()) {
    throw DimensionMismatch("batch set must contain at least one batch");
  }
  for (const Matrix& x : batches_) {
    if (x.rows() != batches_.front().rows() ||
        x.cols() != batches_.front().cols() || x.cols() < 1) {
      throw DimensionMismatch("batches must all share the same n x B shape");
    }
  }
}

bool has_gradient(RegularizerKind kind) {
  return kind != RegularizerKind::VelocityGeodesicEvalOnly;
}

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::PositionGeodesic: return "position-geodesic";
    case RegularizerKind::PositionChordal: return "position-chordal";
    case RegularizerKind::VelocityChordal: return "velocity-chordal";
    case RegularizerKind::VelocityGeodesicEvalOnly: return "velocity-geodesic";
  }
  return "unknown";
}

double batch_loss(const GrassmannPoint& y, const Matrix& x) {
  require_batch_shape(y, x);
  return (x - y.basis() * (y.basis().transpose() * x)).squaredNorm();
}

TangentVector grad_batch(const GrassmannPoint& y, const Matrix& x) {
  require_batch_shape(y, x);
  Matrix w = x * (x.transpose() * y.basis());  // X X^T Y without the n x n product
  Matrix direction = -2.0 * (w - y.basis() * (y.basis().transpose() * w));
  return {std::move(direction), y};
}

double pos_reg_geodesic(const Trajectory& traj) {
  double sum = 0.0;
  for (int t = 0; t + 1 < traj.length(); ++t) {
    const double step = log_between(traj, t, t + 1).norm();
    sum += step * step;
  }
  return sum;
}

TangentVector grad_pos_geodesic(const Trajectory& traj, int t) {
  require_index(traj, t);
  Matrix sum = Matrix::Zero(traj.ambient_dim(), traj.subspace_dim());
  if (t + 1 < traj.length()) sum += log_between(traj, t, t + 1).direction();
  if (t - 1 >= 0) sum += log_between(traj, t, t - 1).direction();
  return {-2.0 * sum, traj[t]};
}

double pos_reg_chordal(const Trajectory& traj) {
  double sum = 0.0;
  for (int t = 0; t + 1 < traj.length(); ++t) {
    sum += projector_difference(traj[t], traj[t + 1]).squaredNorm();
  }
  return sum;
}

TangentVector grad_pos_chordal(const Trajectory& traj, int t) {
  require_index(traj, t);
  const Matrix& y = traj[t].basis();
  Matrix s = Matrix::Zero(y.rows(), y.cols());
  for (int nb : {t - 1, t + 1}) {
    if (nb < 0 || nb >= traj.length()) continue;
    const Matrix& z = traj[nb].basis();
    s += z * (z.transpose() * y);  // P_nb Y_t
  }
  Matrix direction = -4.0 * (s - y * (y.transpose() * s));
  return {std::move(direction), traj[t]};
}

double vel_reg_chordal(const Trajectory& traj) {
  if (traj.length() < 3) {
    throw TrajectoryTooShort("velocity regularizer needs at least 3 points, got " +
                             std::to_string(traj.length()));
  }
  double sum = 0.0;
  for (int s = 0; s + 2 < traj.length(); ++s) {
    Matrix second_diff = projector(traj[s + 2]) - 2.0 * projector(traj[s + 1]) +
                         projector(traj[s]);
    sum += second_diff.squaredNorm();
  }
  return sum;
}

TangentVector grad_vel_chordal(const Trajectory& traj, int t) {
  if (traj.length() < 3) {
    throw TrajectoryTooShort("velocity regularizer needs at least 3 points, got " +
                             std::to_string(traj.length()));
  }
  require_index(traj, t);
  const int last_term = traj.length() - 3;
  const Matrix& y = traj[t].basis();
  // Each second-difference term ||P_s - 2 P_{s+1} + P_{s+2}||^2 containing
  // Y_t contributes 4 c_t (I - P_t) (sum of the other two weighted
  // projectors) Y_t, with weights (+1, -2, +1) across (s, s+1, s+2).
  auto weight = [](int offset) { return offset == 1 ? -2.0 : 1.0; };
  Matrix s_total = Matrix::Zero(y.rows(), y.cols());
  for (int s = t - 2; s <= t; ++s) {
    if (s < 0 || s > last_term) continue;
    const double c_t = weight(t - s);
    for (int u = s; u <= s + 2; ++u) {
      if (u == t) continue;
      const Matrix& z = traj[u].basis();
      s_total += (c_t * weight(u - s)) * (z * (z.transpose() * y));
    }
  }
  Matrix direction = 4.0 * (s_total - y * (y.transpose() * s_total));
  return {std::move(direction), traj[t]};
}

double vel_reg_geodesic_eval(const Trajectory& traj) {
  if (traj.length() < 3) {
    throw TrajectoryTooShort("velocity regularizer needs at least 3 points, got " +
                             std::to_string(traj.length()));
  }
  double sum = 0.0;
  for (int t = 0; t + 2 < traj.length(); ++t) {
    Matrix mismatch = log_between(traj, t + 1, t + 2).direction() +
                      log_between(traj, t + 1, t).direction();
    sum += mismatch.squaredNorm();
  }
  return sum;
}

double regularizer_value(const Trajectory& traj, RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::PositionGeodesic: return pos_reg_geodesic(traj);
    case RegularizerKind::PositionChordal: return pos_reg_chordal(traj);
    case RegularizerKind::VelocityChordal: return vel_reg_chordal(traj);
    case RegularizerKind::VelocityGeodesicEvalOnly:
      return vel_reg_geodesic_eval(traj);
  }
  throw std::invalid_argument("unknown regularizer kind");
}

double total_objective(const Trajectory& traj, const BatchSet& data,
                       double lambda, RegularizerKind kind) {
  if (traj.length() != data.length()) {
    throw DimensionMismatch("trajectory has " + std::to_string(traj.length()) +
                            " points but data has " +
                            std::to_string(data.length()) + " batches");
  }
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  double sum = 0.0;
  for (int t = 0; t < traj.length(); ++t) sum += batch_loss(traj[t], data[t]);
  if (lambda > 0.0) sum += lambda * regularizer_value(traj, kind);
  return sum;
}

TangentVector total_gradient(const Trajectory& traj, const BatchSet& data,
                             double lambda, RegularizerKind kind, int t) {
  if (traj.length() != data.length()) {
    throw DimensionMismatch("trajectory has " + std::to_string(traj.length()) +
                            " points but data has " +
                            std::to_string(data.length()) + " batches");
  }
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (!has_gradient(kind)) {
    throw UnsupportedGradient(
        "the geodesic velocity regularizer supports evaluation only");
  }
  require_index(traj, t);
  Matrix direction = grad_batch(traj[t], data[t]).direction();
  if (lambda > 0.0) {
    switch (kind) {
      case RegularizerKind::PositionGeodesic:
        direction += lambda * grad_pos_geodesic(traj, t).direction();
        break;
      case RegularizerKind::PositionChordal:
        direction += lambda * grad_pos_chordal(traj, t).direction();
        break;
      case RegularizerKind::VelocityChordal:
        direction += lambda * grad_vel_chordal(traj, t).direction();
        break;
      case RegularizerKind::VelocityGeodesicEvalOnly:
        break;  // unreachable, rejected above
    }
    // Re-project the combined direction: the lambda-scaled sum can push the
    // tangency residual of its parts past the TangentVector tolerance.
    const Matrix& y = traj[t].basis();
    direction -= y * (y.transpose() * direction);
  }
  return {std::move(direction), traj[t]};
}

}  // namespace grasstrack
