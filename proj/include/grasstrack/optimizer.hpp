#pragma once

#include <vector>

#include "grasstrack/objectives.hpp"

namespace grasstrack {

/// Settings for one regularized-least-squares descent run. The descent uses
/// a constant learning rate for a fixed number of iterations; there is no
/// line search or stopping criterion.
struct DescentConfig {
  double learning_rate = 1e-5;
  int iterations = 100;
  double lambda = 1000.0;
  RegularizerKind kind = RegularizerKind::PositionChordal;
  bool record_history = false;
  /// Evaluate per-index gradients on worker threads. Retraction still
  /// happens after a barrier, so iterates are unchanged.
  bool parallel = false;
  /// Thread count when parallel; 0 reads GRASSTRACK_THREADS, falling back
  /// to the hardware concurrency.
  int threads = 0;
};

/// Outcome of a descent run.
struct DescentReport {
  Trajectory trajectory;
  /// Objective after each iteration; length K when record_history was set.
  std::vector<double> objective_history;
  /// Largest per-index gradient Frobenius norm seen in each iteration.
  std::vector<double> max_gradient_norms;
  /// Wall-clock seconds spent in the descent loop itself (gradients plus
  /// retractions); history evaluation and initialization are excluded.
  double descent_seconds = 0.0;
  bool history_recorded = false;
};

/// Runs exactly cfg.iterations rounds of simultaneous Riemannian gradient
/// descent over all trajectory points: every iteration evaluates all T
/// gradients against the current trajectory snapshot, then retracts every
/// point at once with the exponential map,
/// Y_t <- exp_{Y_t}(-alpha * grad_t). Jacobi-style: no update ever observes
/// a neighbor already moved within the same iteration.
DescentReport rls_descend(const Trajectory& init, const BatchSet& data,
                          const DescentConfig& cfg);

/// Per-iteration objective values. Throws HistoryNotRecorded unless the run
/// was configured with record_history.
const std::vector<double>& objective_trace(const DescentReport& report);

}  // namespace grasstrack
