#pragma once

#include <stdexcept>

namespace grasstrack {

/// Base type for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (ambient or subspace dimensions differ).
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A matrix expected to have full column rank is numerically rank deficient.
struct RankDeficient : Error {
  using Error::Error;
};

/// A basis expected to be orthonormal is not, within tolerance.
struct NotOrthonormal : Error {
  using Error::Error;
};

/// A direction matrix is not in the tangent space of its anchor point.
struct NotTangent : Error {
  using Error::Error;
};

/// A tangent vector is anchored at a different point than the one supplied.
struct NotAnchored : Error {
  using Error::Error;
};

/// The logarithmic map is undefined: the two subspaces are too far apart.
struct OutsideInjectivityRadius : Error {
  using Error::Error;
};

/// The trajectory has too few points for the requested operation.
struct TrajectoryTooShort : Error {
  using Error::Error;
};

/// The selected regularizer supports evaluation only, not gradients.
struct UnsupportedGradient : Error {
  using Error::Error;
};

/// Per-iteration history was not recorded for this descent run.
struct HistoryNotRecorded : Error {
  using Error::Error;
};

/// An experiment configuration file is invalid.
struct ConfigError : Error {
  using Error::Error;
};

/// Reading or writing experiment files failed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace grasstrack
