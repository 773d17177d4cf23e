#include "grasstrack/baselines.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace grasstrack {

namespace {

Matrix pool_batches(const BatchSet& data, int start, int count) {
  Matrix pooled(data.ambient_dim(), count * data.batch_size());
  for (int i = 0; i < count; ++i) {
    pooled.middleCols(i * data.batch_size(), data.batch_size()) =
        data[start + i];
  }
  return pooled;
}

}  // namespace

GrassmannPoint truncated_svd_subspace(const Matrix& samples, int d) {
  if (samples.cols() < d) {
    throw RankDeficient("need at least " + std::to_string(d) +
                        " pooled samples for a rank-" + std::to_string(d) +
                        " subspace estimate, got " +
                        std::to_string(samples.cols()));
  }
  Eigen::JacobiSVD<Matrix> svd(samples, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(d - 1) < kRankTol * sv(0)) {
    throw RankDeficient("pooled samples have numerical rank below " +
                        std::to_string(d));
  }
  return GrassmannPoint(svd.matrixU().leftCols(d));
}

Trajectory windowed_svd_track(const BatchSet& data, int d,
                              const WindowSpec& spec) {
  const int count = data.length();
  const int w = spec.window_batches;
  if (w < 1 || w > count) {
    throw std::invalid_argument("window_batches must be in [1, T]");
  }
  std::vector<GrassmannPoint> points;
  points.reserve(count);
  for (int t = 0; t < count; ++t) {
    const int start = std::clamp(t - (w - 1) / 2, 0, count - w);
    points.push_back(truncated_svd_subspace(pool_batches(data, start, w), d));
  }
  return Trajectory(std::move(points));
}

Trajectory single_geodesic_fit(const BatchSet& data, int d,
                               int endpoint_window) {
  const int count = data.length();
  if (endpoint_window < 1) {
    throw std::invalid_argument("endpoint_window must be >= 1");
  }
  if (count < 2 * endpoint_window) {
    throw TrajectoryTooShort("single geodesic fit needs T >= 2 * endpoint_window");
  }
  GrassmannPoint first =
      truncated_svd_subspace(pool_batches(data, 0, endpoint_window), d);
  GrassmannPoint last = truncated_svd_subspace(
      pool_batches(data, count - endpoint_window, endpoint_window), d);
  TangentVector h = log_map(first, last);

  std::vector<GrassmannPoint> points;
  points.reserve(count);
  for (int t = 0; t < count; ++t) {
    const double fraction =
        count > 1 ? static_cast<double>(t) / (count - 1) : 0.0;
    points.push_back(exp_map(first, h.scaled(fraction)));
  }
  return Trajectory(std::move(points));
}

}  // namespace grasstrack
