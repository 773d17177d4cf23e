#include "grasstrack/scenarios.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace grasstrack {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  // into [-pi, pi)
  return a - 2.0 * kPi * std::floor((a + kPi) / (2.0 * kPi));
}

double reflect_into(double x, double lo, double hi) {
  while (x < lo || x > hi) {
    if (x > hi) x = 2.0 * hi - x;
    if (x < lo) x = 2.0 * lo - x;
  }
  return x;
}

}  // namespace

Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Trajectory random_geodesic_trajectory(const GeodesicScenarioConfig& cfg) {
  if (cfg.subspace_dim < 1 || cfg.subspace_dim >= cfg.ambient_dim) {
    throw DimensionMismatch("geodesic scenario needs 1 <= d < n");
  }
  if (cfg.batches < 1 || cfg.tangent_norm < 0.0) {
    throw std::invalid_argument("geodesic scenario needs T >= 1 and tangent_norm >= 0");
  }
  if (cfg.tangent_norm * cfg.batches >= kPi / 2.0) {
    std::cerr << "warning: tangent_norm * T = "
              << cfg.tangent_norm * cfg.batches
              << " reaches pi/2; distances to the start point will fold back\n";
  }

  std::mt19937_64 rng(cfg.seed);
  GrassmannPoint start =
      orthonormalize(gaussian_matrix(rng, cfg.ambient_dim, cfg.subspace_dim));
  TangentVector raw = tangent_project(
      start, gaussian_matrix(rng, cfg.ambient_dim, cfg.subspace_dim));
  Matrix step = Matrix::Zero(cfg.ambient_dim, cfg.subspace_dim);
  if (cfg.tangent_norm > 0.0 && raw.norm() > 0.0) {
    step = raw.direction() * (cfg.tangent_norm / raw.norm());
  }

  std::vector<GrassmannPoint> points;
  points.reserve(cfg.batches);
  for (int t = 0; t < cfg.batches; ++t) {
    points.push_back(exp_map(start, TangentVector(t * step, start)));
  }
  return Trajectory(std::move(points));
}

BatchSet synthesize_batches(const Trajectory& truth, int batch_size,
                            double sigma, std::uint64_t seed) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::vector<Matrix> batches;
  batches.reserve(truth.length());
  for (int t = 0; t < truth.length(); ++t) {
    Matrix coeffs = gaussian_matrix(rng, truth.subspace_dim(), batch_size);
    Matrix noise = gaussian_matrix(rng, truth.ambient_dim(), batch_size);
    batches.push_back(truth[t].basis() * coeffs + sigma * noise);
  }
  return BatchSet(std::move(batches));
}

std::vector<EmitterPath> emitter_random_walk(const ArrayScenarioConfig& cfg) {
  if (cfg.num_emitters < 1 || cfg.batches < 1) {
    throw std::invalid_argument("array scenario needs emitters >= 1 and T >= 1");
  }
  if (!(cfg.elevation_min < cfg.elevation_max) ||
      cfg.elevation_min <= -kPi / 2.0 || cfg.elevation_max >= kPi / 2.0) {
    throw std::invalid_argument(
        "elevation limits must satisfy -pi/2 < min < max < pi/2");
  }
  if (cfg.walk_step_std < 0.0) {
    throw std::invalid_argument("walk step std must be >= 0");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> az_init(-kPi, kPi);
  std::uniform_real_distribution<double> el_init(cfg.elevation_min,
                                                 cfg.elevation_max);
  std::normal_distribution<double> increment(0.0, 1.0);

  std::vector<EmitterPath> paths(cfg.num_emitters);
  for (EmitterPath& path : paths) {
    path.azimuth.resize(cfg.batches);
    path.elevation.resize(cfg.batches);
    path.azimuth(0) = az_init(rng);
    path.elevation(0) = el_init(rng);
    for (int t = 1; t < cfg.batches; ++t) {
      path.azimuth(t) =
          wrap_angle(path.azimuth(t - 1) + cfg.walk_step_std * increment(rng));
      path.elevation(t) =
          reflect_into(path.elevation(t - 1) + cfg.walk_step_std * increment(rng),
                       cfg.elevation_min, cfg.elevation_max);
    }
  }
  return paths;
}

Matrix array_positions(const ArrayScenarioConfig& cfg) {
  Matrix positions(cfg.receivers(), 3);
  const double x0 = 0.5 * (cfg.grid_cols - 1);
  const double y0 = 0.5 * (cfg.grid_rows - 1);
  for (int r = 0; r < cfg.grid_rows; ++r) {
    for (int c = 0; c < cfg.grid_cols; ++c) {
      const int i = r * cfg.grid_cols + c;
      positions(i, 0) = (c - x0) * cfg.spacing;
      positions(i, 1) = (r - y0) * cfg.spacing;
      positions(i, 2) = 0.0;
    }
  }
  return positions;
}

Eigen::RowVector3d wavevector_from_angles(double azimuth, double elevation) {
  return 2.0 * kPi *
         Eigen::RowVector3d(std::cos(elevation) * std::cos(azimuth),
                            std::cos(elevation) * std::sin(azimuth),
                            std::sin(elevation));
}

ComplexMatrix steering_matrix(const Matrix& positions,
                              const Matrix& wavevectors) {
  if (positions.cols() != 3 || wavevectors.cols() != 3) {
    throw DimensionMismatch("positions and wavevectors must have 3 columns");
  }
  for (Eigen::Index j = 0; j < wavevectors.rows(); ++j) {
    if (std::abs(wavevectors.row(j).norm() - 2.0 * kPi) > 1e-6) {
      throw std::invalid_argument(
          "wavevector magnitude must be 2*pi (wavelength-normalized units)");
    }
  }
  ComplexMatrix u(positions.rows(), wavevectors.rows());
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    for (Eigen::Index j = 0; j < wavevectors.rows(); ++j) {
      const double phase = positions.row(i).dot(wavevectors.row(j));
      u(i, j) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return u;
}

Trajectory array_truth_trajectory(const ArrayScenarioConfig& cfg) {
  const std::vector<EmitterPath> paths = emitter_random_walk(cfg);
  const Matrix positions = array_positions(cfg);

  std::vector<GrassmannPoint> points;
  points.reserve(cfg.batches);
  Matrix wavevectors(cfg.num_emitters, 3);
  for (int t = 0; t < cfg.batches; ++t) {
    for (int e = 0; e < cfg.num_emitters; ++e) {
      wavevectors.row(e) =
          wavevector_from_angles(paths[e].azimuth(t), paths[e].elevation(t));
    }
    ComplexMatrix u = steering_matrix(positions, wavevectors);
    Matrix realified(cfg.receivers(), cfg.subspace_dim());
    realified << u.real(), u.imag();
    try {
      points.push_back(orthonormalize(realified));
    } catch (const RankDeficient&) {
      throw RankDeficient(
          "emitter directions are degenerate at batch " + std::to_string(t) +
          "; the realified steering matrix loses rank");
    }
  }
  return Trajectory(std::move(points));
}

}  // namespace grasstrack
