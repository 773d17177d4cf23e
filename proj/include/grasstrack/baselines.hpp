#pragma once

#include "grasstrack/objectives.hpp"

namespace grasstrack {

/// How many consecutive batches are pooled per windowed-SVD estimate.
struct WindowSpec {
  int window_batches = 2;
};

/// Basis of the dominant rank-d left singular subspace of a sample matrix.
/// Throws RankDeficient if there are fewer than d samples or the d-th
/// singular value vanishes numerically.
GrassmannPoint truncated_svd_subspace(const Matrix& samples, int d);

/// Memoryless tracker and RLS initializer: for each index t, pools the
/// window of window_batches consecutive batches positioned as centered on t
/// as the boundary allows (shifted inward so the window always holds
/// window_batches batches), and takes the top-d left singular vectors of
/// the pooled samples.
Trajectory windowed_svd_track(const BatchSet& data, int d,
                              const WindowSpec& spec = {});

/// Endpoint-geodesic baseline: estimates the subspaces of the first and
/// last endpoint_window batches (pooled), connects them with the log map,
/// and samples the resulting constant-speed geodesic uniformly across all
/// T indices. Requires T >= 2 * endpoint_window.
Trajectory single_geodesic_fit(const BatchSet& data, int d,
                               int endpoint_window);

}  // namespace grasstrack
