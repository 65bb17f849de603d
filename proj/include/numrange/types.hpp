#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace numrange {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using MatrixC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using VectorC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

// Error hierarchy. Every failure the library reports derives from Error so the
// CLI can map them onto exit codes in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ZeroPerturbation : public Error {
 public:
  ZeroPerturbation() : Error("zero perturbation") {}
};

class NothingToSteer : public Error {
 public:
  NothingToSteer() : Error("nothing to steer") {}
};

class TrackingCollision : public Error {
 public:
  TrackingCollision(double t, double step)
      : Error("tracking collision at t=" + std::to_string(t) + " (step " + std::to_string(step) +
              " below underflow)"),
        t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Default tolerances. Callers that ingest low-precision data relax
/// `unitarity` (the 6-decimal fixture uses 1e-4).
struct Tolerances {
  static constexpr double unitarity = 1e-10;
  static constexpr double hermiticity = 1e-12;
  static constexpr double cluster = 1e-8;
  static constexpr double branch = 1e-8;
  static constexpr double stationary = 1e-12;
  static constexpr double probability = 1e-12;
};

template <typename Derived>
typename Derived::RealScalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(a.derived());
  return svd.singularValues()(0);
}

template <typename Real>
void require_square_finite(const MatrixC<Real>& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidMatrix("matrix must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
}

/// Square complex matrix satisfying ‖U†U − 𝟙‖_∞ ≤ tolerance. The tolerance
/// travels with the value so products with exact unitaries keep the
/// relaxation of their inputs.
template <typename Real = double>
class UnitaryMatrix {
 public:
  using Matrix = MatrixC<Real>;

  explicit UnitaryMatrix(Matrix m, Real tolerance = Real(Tolerances::unitarity))
      : m_(std::move(m)), tol_(tolerance) {
    require_square_finite(m_);
    const Real defect = unitarity_defect(m_);
    if (!(defect <= tol_)) {
      throw InvalidMatrix("matrix is not unitary: ||U^+U - 1|| = " + std::to_string(double(defect)) +
                          " exceeds " + std::to_string(double(tol_)));
    }
  }

  static UnitaryMatrix identity(Index d) { return UnitaryMatrix(Matrix::Identity(d, d)); }

  static Real unitarity_defect(const Matrix& m) {
    return operator_norm(Matrix(m.adjoint() * m - Matrix::Identity(m.cols(), m.cols())));
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Real tolerance() const noexcept { return tol_; }
  UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint(), tol_); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return UnitaryMatrix(a.m_ * b.m_, std::max(a.tol_, b.tol_) * 2);
  }

 private:
  Matrix m_;
  Real tol_;
};

/// Square complex matrix with ‖H − H†‖_∞ ≤ tol·max(1, ‖H‖_∞). Stored
/// symmetrized.
template <typename Real = double>
class HermitianMatrix {
 public:
  using Matrix = MatrixC<Real>;

  explicit HermitianMatrix(const Matrix& h, Real tolerance = Real(Tolerances::hermiticity)) {
    require_square_finite(h);
    const Real scale = std::max(Real(1), operator_norm(h));
    const Real defect = operator_norm(Matrix(h - h.adjoint()));
    if (!(defect <= tolerance * scale)) {
      throw InvalidMatrix("matrix is not Hermitian: ||H - H^+|| = " + std::to_string(double(defect)));
    }
    m_ = (h + h.adjoint()) / Real(2);
  }

  const Matrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

}  // namespace numrange
