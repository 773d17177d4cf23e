#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "grasstrack/objectives.hpp"

namespace grasstrack {

using ComplexMatrix = Eigen::MatrixXcd;

/// Standard-Gaussian matrix drawn from rng in a fixed (row-major) fill
/// order, so generation is reproducible for a given seed.
Matrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols);

/// Ground truth drifting along a single random geodesic on G(n, d):
/// Y_t = exp_{Y_0}(t * H_0) with ||H_0||_F = tangent_norm.
struct GeodesicScenarioConfig {
  int ambient_dim = 64;       // n
  int subspace_dim = 10;      // d
  int batches = 60;           // T
  double tangent_norm = 1e-2; // radians of subspace motion per batch
  double noise_sigma = 1e-2;
  int batch_size = 10;        // B
  std::uint64_t seed = 0;
};

/// Seeded ground-truth trajectory for the geodesic scenario. Y_0 is the
/// orthonormalization of a Gaussian matrix, H_0 a Gaussian tangent draw
/// rescaled to tangent_norm. Warns on stderr when tangent_norm * T reaches
/// pi/2, where distances to Y_0 start folding back.
Trajectory random_geodesic_trajectory(const GeodesicScenarioConfig& cfg);

/// Noisy batches X_t = Y_t A_t + sigma * N_t with A_t and N_t standard
/// Gaussian, drawn deterministically from the seed.
BatchSet synthesize_batches(const Trajectory& truth, int batch_size,
                            double sigma, std::uint64_t seed);

/// Narrowband beamforming scene: emitters drifting in angle in front of a
/// planar half-wavelength array. The tracked subspace is the realified
/// steering span, d = 2 * num_emitters.
struct ArrayScenarioConfig {
  int grid_rows = 8;
  int grid_cols = 8;
  double spacing = 0.5;         // element pitch in wavelengths
  int num_emitters = 5;
  int batches = 60;             // T
  int batch_size = 10;          // B
  double noise_sigma = 1e-2;
  double walk_step_std = 0.005; // radians per batch, azimuth and elevation
  double elevation_min = 0.05;  // reflection limits, inside (-pi/2, pi/2)
  double elevation_max = 1.52;
  std::uint64_t seed = 0;

  int receivers() const { return grid_rows * grid_cols; }
  int subspace_dim() const { return 2 * num_emitters; }
};

/// Angular track of one emitter over the scenario, radians. Azimuth is
/// wrapped to [-pi, pi); elevation stays within the configured limits.
struct EmitterPath {
  Vector azimuth;
  Vector elevation;
};

/// Seeded Gaussian-increment random walks for every emitter, elevation
/// reflected at the configured limits.
std::vector<EmitterPath> emitter_random_walk(const ArrayScenarioConfig& cfg);

/// Receiver coordinates in wavelengths: the grid centered at the origin in
/// the xy-plane, one row per element, row-major element order.
Matrix array_positions(const ArrayScenarioConfig& cfg);

/// Unit propagation direction for (azimuth, elevation) scaled by 2*pi, i.e.
/// the wavevector in wavelength-normalized units.
Eigen::RowVector3d wavevector_from_angles(double azimuth, double elevation);

/// Array response matrix: entry (i, j) = exp(j * r_i . k_j) for receiver
/// positions (rows of positions) and emitter wavevectors (rows of
/// wavevectors, each of magnitude 2*pi). All entries have unit modulus.
ComplexMatrix steering_matrix(const Matrix& positions,
                              const Matrix& wavevectors);

/// Ground-truth subspace trajectory of the array scene: for each batch,
/// the steering matrix U of the current emitter directions realified as
/// [Re U, Im U] and orthonormalized, a point on G(receivers, 2*emitters).
/// Throws RankDeficient when emitter directions coincide at some batch.
Trajectory array_truth_trajectory(const ArrayScenarioConfig& cfg);

}  // namespace grasstrack
