#include "grasstrack/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace grasstrack {

namespace {

void require_same_shape(const GrassmannPoint& y, const GrassmannPoint& z) {
  if (!y.same_shape(z)) {
    throw DimensionMismatch(
        "subspace operands differ in shape: " +
        std::to_string(y.ambient_dim()) + "x" +
        std::to_string(y.subspace_dim()) + " vs " +
        std::to_string(z.ambient_dim()) + "x" +
        std::to_string(z.subspace_dim()));
  }
}

void require_anchored(const GrassmannPoint& y, const TangentVector& h) {
  const Matrix& a = y.basis();
  const Matrix& b = h.base().basis();
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      (a - b).cwiseAbs().maxCoeff() > 1e-12) {
    throw NotAnchored("tangent vector is anchored at a different point");
  }
}

/// Thin Q factor of a Householder QR, with columns flipped so the diagonal
/// of R is nonnegative. Keeps the column association of the input, so an
/// already-orthonormal matrix comes back essentially unchanged.
Matrix thin_qr_basis(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  Matrix r = qr.matrixQR()
                 .topLeftCorner(m.cols(), m.cols())
                 .triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// The (sigma, V) factors of the thin SVD H = U S V^T, obtained from the
/// eigendecomposition of the d-by-d Gram matrix H^T H. U never needs to be
/// formed: U f(S) V^T = H V (f(S)/S) V^T for any f with f(0)/0 -> finite.
struct TangentFactors {
  Vector sigma;
  Matrix v;
};

TangentFactors tangent_svd_factors(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.transpose() * h);
  return {es.eigenvalues().cwiseMax(0.0).cwiseSqrt(), es.eigenvectors()};
}

double sinc(double s) { return s > 1e-8 ? std::sin(s) / s : 1.0 - s * s / 6.0; }

/// Endpoint of the geodesic from Y with direction H, before any
/// re-orthonormalization: Y V cos(S) V^T + H V sinc(S) V^T.
Matrix geodesic_endpoint(const Matrix& y, const Matrix& h,
                         const TangentFactors& f) {
  Vector cos_s = f.sigma.array().cos();
  Vector sinc_s = f.sigma.unaryExpr([](double s) { return sinc(s); });
  return y * (f.v * cos_s.asDiagonal() * f.v.transpose()) +
         h * (f.v * sinc_s.asDiagonal() * f.v.transpose());
}

Matrix reorthonormalized_if_drifted(Matrix z) {
  Matrix gram = z.transpose() * z;
  gram.diagonal().array() -= 1.0;
  if (gram.norm() > kReorthonormalizeTol) z = thin_qr_basis(z);
  return z;
}

}  // namespace

GrassmannPoint::GrassmannPoint(Matrix basis) : basis_(std::move(basis)) {
  const auto n = basis_.rows();
  const auto d = basis_.cols();
  if (d < 1 || d >= n) {
    throw DimensionMismatch("basis must be n x d with 1 <= d < n, got " +
                            std::to_string(n) + "x" + std::to_string(d));
  }
  Matrix gram = basis_.transpose() * basis_;
  gram.diagonal().array() -= 1.0;
  if (gram.norm() > kOrthonormalTol) {
    throw NotOrthonormal("basis columns are not orthonormal (||Y^T Y - I||_F = " +
                         std::to_string(gram.norm()) + ")");
  }
}

TangentVector::TangentVector(Matrix direction, GrassmannPoint base)
    : direction_(std::move(direction)), base_(std::move(base)) {
  if (direction_.rows() != base_.basis().rows() ||
      direction_.cols() != base_.basis().cols()) {
    throw DimensionMismatch("tangent direction shape differs from its base");
  }
  const double residual = (base_.basis().transpose() * direction_).norm();
  if (residual > kTangencyTol) {
    throw NotTangent("direction is not tangent at its base (||Y^T H||_F = " +
                     std::to_string(residual) + ")");
  }
}

GrassmannPoint orthonormalize(const Matrix& m) {
  if (m.cols() < 1 || m.cols() >= m.rows()) {
    throw DimensionMismatch("orthonormalize expects n x d input with 1 <= d < n");
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(sv.size() - 1) < kRankTol * sv(0)) {
    throw RankDeficient("matrix has numerical column rank below " +
                        std::to_string(m.cols()));
  }
  return GrassmannPoint(thin_qr_basis(m));
}

PrincipalAngles principal_angles(const GrassmannPoint& y,
                                 const GrassmannPoint& z) {
  require_same_shape(y, z);
  Eigen::JacobiSVD<Matrix> svd(y.basis().transpose() * z.basis());
  // Singular values come out descending, so the angles are already ascending.
  Vector angles = svd.singularValues().unaryExpr([](double s) {
    return std::acos(std::clamp(s, 0.0, 1.0));
  });
  return {std::move(angles)};
}

double geodesic_distance(const GrassmannPoint& y, const GrassmannPoint& z) {
  require_same_shape(y, z);
  // Same angles as principal_angles, evaluated through atan2 of the sine
  // and cosine singular values. arccos alone loses half the digits of the
  // small angles, which breaks sub-rounding properties such as
  // chordal <= geodesic near zero separation.
  Matrix m = y.basis().transpose() * z.basis();
  Eigen::JacobiSVD<Matrix> svd_cos(m);
  Eigen::JacobiSVD<Matrix> svd_sin(z.basis() - y.basis() * m);
  const Vector& cosines = svd_cos.singularValues();  // descending
  const Vector& sines = svd_sin.singularValues();    // descending
  const auto d = cosines.size();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double angle = std::atan2(std::clamp(sines(d - 1 - i), 0.0, 1.0),
                                    std::clamp(cosines(i), 0.0, 1.0));
    sum += angle * angle;
  }
  return std::sqrt(sum);
}

double chordal_distance(const GrassmannPoint& y, const GrassmannPoint& z) {
  return projector_difference(y, z).norm() / std::numbers::sqrt2;
}

Matrix projector_difference(const GrassmannPoint& y, const GrassmannPoint& z) {
  require_same_shape(y, z);
  return z.basis() * z.basis().transpose() - y.basis() * y.basis().transpose();
}

TangentVector tangent_project(const GrassmannPoint& y, const Matrix& g) {
  if (g.rows() != y.basis().rows() || g.cols() != y.basis().cols()) {
    throw DimensionMismatch("matrix to project has wrong shape");
  }
  Matrix direction = g - y.basis() * (y.basis().transpose() * g);
  return {std::move(direction), y};
}

GrassmannPoint exp_map(const GrassmannPoint& y, const TangentVector& h) {
  require_anchored(y, h);
  TangentFactors f = tangent_svd_factors(h.direction());
  Matrix z = geodesic_endpoint(y.basis(), h.direction(), f);
  return GrassmannPoint(reorthonormalized_if_drifted(std::move(z)));
}

TangentVector log_map(const GrassmannPoint& y, const GrassmannPoint& z) {
  require_same_shape(y, z);
  Eigen::JacobiSVD<Matrix> svd_m(y.basis().transpose() * z.basis(),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd_m.singularValues();
  if (sv(sv.size() - 1) <= kInjectivityTol) {
    throw OutsideInjectivityRadius(
        "subspaces are outside the injectivity radius (min singular value of "
        "Y^T Z is " + std::to_string(sv(sv.size() - 1)) + ")");
  }
  Matrix m_inv = svd_m.matrixV() * sv.cwiseInverse().asDiagonal() *
                 svd_m.matrixU().transpose();
  Matrix w = z.basis() * m_inv;
  Matrix l = w - y.basis() * (y.basis().transpose() * w);
  Eigen::JacobiSVD<Matrix> svd_l(l, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector atan_s = svd_l.singularValues().array().atan();
  Matrix direction =
      svd_l.matrixU() * atan_s.asDiagonal() * svd_l.matrixV().transpose();
  return {std::move(direction), y};
}

GeodesicState geodesic_step(const GrassmannPoint& y, const TangentVector& h) {
  require_anchored(y, h);
  TangentFactors f = tangent_svd_factors(h.direction());
  GrassmannPoint next(
      reorthonormalized_if_drifted(geodesic_endpoint(y.basis(), h.direction(), f)));
  // Transported velocity (-Y V sin(S) + U cos(S)) S V^T, written without U:
  // U cos(S) S V^T = H V cos(S) V^T since U S = H V.
  Vector cos_s = f.sigma.array().cos();
  Vector s_sin_s = f.sigma.array() * f.sigma.array().sin();
  Matrix transported =
      h.direction() * (f.v * cos_s.asDiagonal() * f.v.transpose()) -
      y.basis() * (f.v * s_sin_s.asDiagonal() * f.v.transpose());
  TangentVector velocity(std::move(transported), next);
  return {std::move(next), std::move(velocity)};
}

}  // namespace grasstrack
