#include "grasstrack/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace grasstrack {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int resolve_threads(const DescentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("GRASSTRACK_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(t) for t in [0, count) on up to n_threads workers in disjoint
/// contiguous blocks. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(int count, int n_threads, Fn&& fn) {
  n_threads = std::min(n_threads, count);
  if (n_threads <= 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(n_threads);
  const int block = (count + n_threads - 1) / n_threads;
  for (int w = 0; w < n_threads; ++w) {
    const int begin = w * block;
    const int end = std::min(count, begin + block);
    workers.emplace_back([&, w, begin, end] {
      try {
        for (int t = begin; t < end; ++t) fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

DescentReport rls_descend(const Trajectory& init, const BatchSet& data,
                          const DescentConfig& cfg) {
  if (cfg.learning_rate <= 0.0) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("iteration count must be at least 1");
  }
  if (cfg.lambda < 0.0) {
    throw std::invalid_argument("lambda must be nonnegative");
  }
  if (!has_gradient(cfg.kind)) {
    throw UnsupportedGradient("regularizer " + to_string(cfg.kind) +
                              " supports evaluation only");
  }
  if (init.length() != data.length()) {
    throw DimensionMismatch("initialization has " +
                            std::to_string(init.length()) +
                            " points but data has " +
                            std::to_string(data.length()) + " batches");
  }

  const int count = init.length();
  const int n_threads = cfg.parallel ? resolve_threads(cfg) : 1;

  Trajectory current = init;
  std::vector<Matrix> gradients(count);
  std::vector<double> objective_history;
  std::vector<double> max_gradient_norms;
  max_gradient_norms.reserve(cfg.iterations);
  if (cfg.record_history) objective_history.reserve(cfg.iterations);

  double loop_seconds = 0.0;
  for (int k = 0; k < cfg.iterations; ++k) {
    const auto iter_start = Clock::now();

    parallel_for(count, n_threads, [&](int t) {
      gradients[t] =
          total_gradient(current, data, cfg.lambda, cfg.kind, t).direction();
    });

    double max_norm = 0.0;
    for (const Matrix& g : gradients) max_norm = std::max(max_norm, g.norm());

    std::vector<GrassmannPoint> next;
    next.reserve(count);
    for (int t = 0; t < count; ++t) {
      TangentVector step(-cfg.learning_rate * gradients[t], current[t]);
      next.push_back(exp_map(current[t], step));
    }
    current = Trajectory(std::move(next));

    loop_seconds += seconds_since(iter_start);
    max_gradient_norms.push_back(max_norm);
    if (cfg.record_history) {
      objective_history.push_back(
          total_objective(current, data, cfg.lambda, cfg.kind));
    }
  }

  DescentReport report{std::move(current), std::move(objective_history),
                       std::move(max_gradient_norms), loop_seconds,
                       cfg.record_history};
  return report;
}

const std::vector<double>& objective_trace(const DescentReport& report) {
  if (!report.history_recorded) {
    throw HistoryNotRecorded("descent was run without record_history");
  }
  return report.objective_history;
}

}  // namespace grasstrack
