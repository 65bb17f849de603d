#pragma once

#include "numrange/generator.hpp"
#include "numrange/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace numrange {

template <typename Real>
struct HermitianEigen {
  VectorR<Real> values;   // ascending
  MatrixC<Real> vectors;  // columns, unitary
};

namespace detail {

template <typename Real>
HermitianEigen<Real> hermitian_eigen(const MatrixC<Real>& h) {
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver(h);
  if (solver.info() != Eigen::Success) {
    const MatrixC<Real> x = solver.eigenvectors();
    const double residual = double((h * x - x * solver.eigenvalues().asDiagonal()).norm());
    throw ConvergenceError("Hermitian eigensolver did not converge", residual);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Split an ascending sequence into runs whose consecutive gaps are <= tol.
template <typename Real>
std::vector<std::pair<Index, Index>> ascending_runs(const VectorR<Real>& v, Real tol) {
  std::vector<std::pair<Index, Index>> runs;
  Index start = 0;
  for (Index i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v(i) - v(i - 1) > tol) {
      runs.emplace_back(start, i - start);
      start = i;
    }
  }
  return runs;
}

// Rotate `basis` (orthonormal columns spanning an invariant subspace) so that
// its columns diagonalize the compression of the Hermitian operator `op`.
template <typename Real>
MatrixC<Real> diagonalize_compression(const MatrixC<Real>& basis, const MatrixC<Real>& op,
                                      VectorR<Real>* values = nullptr) {
  MatrixC<Real> c = basis.adjoint() * op * basis;
  c = (c + c.adjoint()).eval() / Real(2);
  auto eig = hermitian_eigen<Real>(c);
  if (values) *values = eig.values;
  return basis * eig.vectors;
}

// Fix the global phase of a unit vector so its largest-modulus entry is real positive.
template <typename Real, typename Derived>
void fix_phase(Eigen::MatrixBase<Derived>&& x) {
  Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  const Real m = std::abs(x(k));
  if (m > Real(0)) x *= std::conj(x(k)) / m;
}

template <typename Real>
bool lexicographic_less(const VectorC<Real>& a, const VectorC<Real>& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace detail

/// Principal argument in (−π, π].
template <typename Real>
Real principal_argument(const Complex<Real>& z) {
  const Real a = std::arg(z);
  return a <= -std::numbers::pi_v<Real> ? std::numbers::pi_v<Real> : a;
}

/// Counterclockwise arc length from `from` to `to`, in [0, 2π).
template <typename Real>
Real ccw_arc(const Complex<Real>& from, const Complex<Real>& to) {
  Real a = std::arg(to * std::conj(from));
  if (a < Real(0)) a += 2 * std::numbers::pi_v<Real>;
  return a;
}

/// Unsigned arc distance on the unit circle, in [0, π].
template <typename Real>
Real arc_distance(const Complex<Real>& a, const Complex<Real>& b) {
  return std::abs(std::arg(b * std::conj(a)));
}

/// Standard Hermitian eigenproblem. Eigenvalues ascending.
template <typename Real>
HermitianEigen<Real> herm_eig(const HermitianMatrix<Real>& h) {
  return detail::hermitian_eigen<Real>(h.matrix());
}

/// A run of counterclockwise-consecutive eigenvalues that coincide within
/// the clustering tolerance.
template <typename Real>
struct EigenCluster {
  Index first = 0;
  Index size = 0;
  Complex<Real> value;  // representative, on the unit circle
};

/// Spectral decomposition of a unitary: eigenvalues in counterclockwise order
/// starting from the smallest principal argument, eigenvector columns with a
/// fixed phase, and degenerate clusters as contiguous index ranges.
template <typename Real>
struct EigenSystem {
  VectorC<Real> values;
  MatrixC<Real> vectors;
  std::vector<EigenCluster<Real>> clusters;

  Index dim() const noexcept { return values.size(); }

  MatrixC<Real> reconstruct() const { return vectors * values.asDiagonal() * vectors.adjoint(); }

  VectorR<Real> arguments() const {
    VectorR<Real> a(values.size());
    for (Index j = 0; j < values.size(); ++j) a(j) = principal_argument(values(j));
    return a;
  }

  Index multiplicity(Index cluster) const { return clusters.at(std::size_t(cluster)).size; }

  /// Index of the cluster nearest to `lambda` on the unit circle.
  Index cluster_of(const Complex<Real>& lambda) const {
    Index best = 0;
    Real dist = std::numeric_limits<Real>::infinity();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const Real d = std::abs(clusters[c].value - lambda);
      if (d < dist) {
        dist = d;
        best = Index(c);
      }
    }
    return best;
  }
};

/// Eigenvalues of a near-commuting pair (A, B) = (Re U, Im U) are first
/// separated by A; eigenvalues of A closer than this are resolved through B.
inline constexpr double kSplitTolerance = 1e-6;

/// Spectral decomposition of a unitary via Hermitian reductions: diagonalize
/// Re U = (U + U†)/2, then resolve each near-degenerate eigenspace of Re U by
/// the compression of Im U = (U − U†)/2i (and once more by Re U).
template <typename Real>
EigenSystem<Real> unitary_eig(const UnitaryMatrix<Real>& u, Real cluster_tol = Real(Tolerances::cluster)) {
  using Matrix = MatrixC<Real>;
  const Matrix& m = u.matrix();
  const Index d = u.dim();
  const Complex<Real> two_i(0, 2);
  const Matrix re = (m + m.adjoint()) / Real(2);
  const Matrix im = (m - m.adjoint()) / two_i;
  const Real split = Real(kSplitTolerance);

  auto eig_re = detail::hermitian_eigen<Real>(re);
  Matrix x(d, d);
  for (auto [first, count] : detail::ascending_runs<Real>(eig_re.values, split)) {
    Matrix block = eig_re.vectors.middleCols(first, count);
    if (count > 1) {
      VectorR<Real> b_values;
      block = detail::diagonalize_compression<Real>(block, im, &b_values);
      for (auto [f2, c2] : detail::ascending_runs<Real>(b_values, split)) {
        if (c2 > 1) block.middleCols(f2, c2) = detail::diagonalize_compression<Real>(block.middleCols(f2, c2), re);
      }
    }
    x.middleCols(first, count) = block;
  }

  VectorC<Real> lambda(d);
  for (Index j = 0; j < d; ++j) {
    detail::fix_phase<Real>(x.col(j));
    lambda(j) = x.col(j).dot(m * x.col(j));
  }

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return principal_argument(lambda(a)) < principal_argument(lambda(b));
  });

  EigenSystem<Real> es;
  es.values.resize(d);
  es.vectors.resize(d, d);
  for (Index j = 0; j < d; ++j) {
    es.values(j) = lambda(order[std::size_t(j)]);
    es.vectors.col(j) = x.col(order[std::size_t(j)]);
  }

  // Cluster consecutive eigenvalues; a cluster straddling the branch cut at −1
  // is rotated to the front so clusters stay contiguous.
  std::vector<std::pair<Index, Index>> runs;
  Index start = 0;
  for (Index j = 1; j <= d; ++j) {
    if (j == d || std::abs(es.values(j) - es.values(j - 1)) > cluster_tol) {
      runs.emplace_back(start, j - start);
      start = j;
    }
  }
  if (runs.size() > 1 && std::abs(es.values(d - 1) - es.values(0)) <= cluster_tol) {
    const Index tail = runs.back().second;
    VectorC<Real> v(d);
    Matrix vec(d, d);
    for (Index j = 0; j < d; ++j) {
      const Index src = (j + d - tail) % d;
      v(j) = es.values(src);
      vec.col(j) = es.vectors.col(src);
    }
    es.values = v;
    es.vectors = vec;
    runs.pop_back();
    runs.front().second += tail;
    for (std::size_t r = 1; r < runs.size(); ++r) runs[r].first += tail;
  }

  for (auto [first, count] : runs) {
    if (count > 1) {
      std::vector<Index> idx(static_cast<std::size_t>(count));
      std::iota(idx.begin(), idx.end(), first);
      std::vector<VectorC<Real>> cols;
      for (Index i : idx) cols.push_back(es.vectors.col(i));
      std::vector<Complex<Real>> vals;
      for (Index i : idx) vals.push_back(es.values(i));
      std::vector<std::size_t> perm(idx.size());
      std::iota(perm.begin(), perm.end(), std::size_t(0));
      std::stable_sort(perm.begin(), perm.end(),
                       [&](std::size_t a, std::size_t b) { return detail::lexicographic_less<Real>(cols[a], cols[b]); });
      for (std::size_t k = 0; k < perm.size(); ++k) {
        es.vectors.col(first + Index(k)) = cols[perm[k]];
        es.values(first + Index(k)) = vals[perm[k]];
      }
    }
    Complex<Real> mean = es.values.segment(first, count).mean();
    if (std::abs(mean) > Real(0)) mean /= std::abs(mean);
    es.clusters.push_back({first, count, mean});
  }
  return es;
}

/// Orthonormal basis I of the eigenspace of one cluster: U·I = λ·I.
template <typename Real>
struct EigenspaceIsometry {
  MatrixC<Real> columns;  // d×k
  Complex<Real> value;
  Index multiplicity() const noexcept { return columns.cols(); }
};

template <typename Real>
EigenspaceIsometry<Real> eigenspace_isometry(const EigenSystem<Real>& es, Index cluster) {
  const auto& c = es.clusters.at(std::size_t(cluster));
  return {es.vectors.middleCols(c.first, c.size), c.value};
}

template <typename Derived>
auto singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(a.derived());
  return svd.singularValues().eval();
}

/// Schatten p-norm (Σ σᵢᵖ)^{1/p} for finite p ≥ 1.
template <typename Derived>
typename Derived::RealScalar schatten_norm(const Eigen::MatrixBase<Derived>& a, typename Derived::RealScalar p) {
  using Real = typename Derived::RealScalar;
  if (!std::isfinite(double(p)) || p < Real(1)) {
    throw std::invalid_argument("Schatten exponent must be finite and >= 1");
  }
  const auto sigma = singular_values(a);
  if (sigma.size() == 0 || sigma(0) == Real(0)) return Real(0);
  const Real top = sigma(0);
  Real sum = 0;
  for (Index i = 0; i < sigma.size(); ++i) sum += std::pow(sigma(i) / top, p);
  return top * std::pow(sum, Real(1) / p);
}

/// Schatten ∞-norm: the largest singular value.
template <typename Derived>
typename Derived::RealScalar schatten_inf(const Eigen::MatrixBase<Derived>& a) {
  return operator_norm(a);
}

template <typename Real>
struct PrincipalLog {
  HermitianMatrix<Real> generator;  // H with U = exp(iH), spectrum in (−π, π]
  bool branch_ambiguous = false;    // some eigenvalue sits at −1
};

/// H = −i Log(U), taking each eigenvalue argument in (−π, π].
template <typename Real>
PrincipalLog<Real> principal_log_unitary(const UnitaryMatrix<Real>& u, Real branch_tol = Real(Tolerances::branch)) {
  const auto es = unitary_eig(u);
  VectorR<Real> theta(es.dim());
  bool ambiguous = false;
  for (Index j = 0; j < es.dim(); ++j) {
    theta(j) = principal_argument(es.values(j));
    if (std::abs(es.values(j) + Real(1)) < branch_tol) ambiguous = true;
  }
  MatrixC<Real> h = es.vectors * theta.template cast<Complex<Real>>().asDiagonal() * es.vectors.adjoint();
  return {HermitianMatrix<Real>(h, Real(1e-10)), ambiguous};
}

/// exp(itH) through the spectral decomposition of H.
template <typename Real>
UnitaryMatrix<Real> unitary_exp(const HermitianMatrix<Real>& h, Real t = Real(1)) {
  const auto eig = herm_eig(h);
  VectorC<Real> phase(eig.values.size());
  for (Index k = 0; k < phase.size(); ++k) phase(k) = std::polar(Real(1), t * eig.values(k));
  return UnitaryMatrix<Real>(eig.vectors * phase.asDiagonal() * eig.vectors.adjoint());
}

template <typename Real>
struct GeodesicPoint {
  UnitaryMatrix<Real> value;
  bool branch_ambiguous = false;
};

/// Point t ∈ [0, 1] on the shortest unitary curve U·exp(t·Log(U†V)).
template <typename Real>
GeodesicPoint<Real> geodesic_point(const UnitaryMatrix<Real>& u, const UnitaryMatrix<Real>& v, Real t) {
  if (!(t >= Real(0) && t <= Real(1))) throw std::invalid_argument("geodesic parameter must lie in [0, 1]");
  if (u.dim() != v.dim()) throw InvalidMatrix("geodesic endpoints differ in dimension");
  const Real tol = std::max(u.tolerance(), v.tolerance()) * 2;
  const UnitaryMatrix<Real> rel(u.matrix().adjoint() * v.matrix(), tol);
  const auto log = principal_log_unitary(rel);
  const auto step = unitary_exp(log.generator, t);
  return {UnitaryMatrix<Real>(u.matrix() * step.matrix(), tol), log.branch_ambiguous};
}

/// H = basis·(scale·diag(p) + shift·𝟙)·basis†, with p a probability vector.
template <typename Real>
struct GeneratorReduction {
  PerturbationGenerator<Real> generator;
  UnitaryMatrix<Real> basis;
  Real shift;
  Real scale;
};

/// Reduce a Hermitian direction H to a nonnegative diagonal generator of unit
/// trace. Diagonal inputs keep the standard basis; otherwise the eigenbasis of
/// H is used. The shift is min(0, λ_min), so nonnegative spectra are kept.
template <typename Real>
GeneratorReduction<Real> reduce_to_generator(const HermitianMatrix<Real>& h) {
  const MatrixC<Real>& m = h.matrix();
  const Index d = h.dim();
  const Real norm = m.cwiseAbs().maxCoeff();
  MatrixC<Real> off = m;
  off.diagonal().setZero();

  VectorR<Real> diag;
  MatrixC<Real> basis;
  if (off.cwiseAbs().maxCoeff() <= Real(Tolerances::hermiticity) * std::max(Real(1), norm)) {
    diag = m.diagonal().real();
    basis = MatrixC<Real>::Identity(d, d);
  } else {
    auto eig = herm_eig(h);
    diag = eig.values;
    basis = eig.vectors;
  }

  const Real shift = std::min(Real(0), diag.minCoeff());
  const VectorR<Real> plus = (diag.array() - shift).matrix();
  const Real scale = plus.sum();
  const Real floor = std::numeric_limits<Real>::epsilon() * Real(d) * std::max(Real(1), diag.cwiseAbs().maxCoeff());
  if (!(scale > floor)) throw ZeroPerturbation();
  VectorR<Real> p = plus / scale;
  p /= p.sum();
  return {PerturbationGenerator<Real>(p), UnitaryMatrix<Real>(basis), shift, scale};
}

}  // namespace numrange
