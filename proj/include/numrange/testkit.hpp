#pragma once

#include "numrange/perturb.hpp"
#include "numrange/range.hpp"

#include <Eigen/QR>

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace numrange::testkit {

using Rng = std::mt19937_64;

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) divided out.
template <typename Real = double>
UnitaryMatrix<Real> haar_unitary(Rng& rng, Index d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  std::normal_distribution<Real> normal(0, 1);
  MatrixC<Real> z(d, d);
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < d; ++r) z(r, c) = Complex<Real>(normal(rng), normal(rng)) / std::numbers::sqrt2_v<Real>;
  }
  Eigen::HouseholderQR<MatrixC<Real>> qr(z);
  MatrixC<Real> q = qr.householderQ();
  const MatrixC<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const Complex<Real> rk = r(k, k);
    if (std::abs(rk) > Real(0)) q.col(k) *= rk / std::abs(rk);
  }
  return UnitaryMatrix<Real>(q, Real(1e-12));
}

template <typename Real = double>
UnitaryMatrix<Real> haar_unitary(Index d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary<Real>(rng, d);
}

/// Uniform draw from the probability simplex (Dirichlet(1, …, 1)).
template <typename Real = double>
VectorR<Real> random_probability(Rng& rng, Index d) {
  std::exponential_distribution<Real> expo(1);
  VectorR<Real> p(d);
  for (Index k = 0; k < d; ++k) p(k) = expo(rng);
  return p / p.sum();
}

template <typename Real = double>
Real uniform_angle(Rng& rng) {
  std::uniform_real_distribution<Real> u(-std::numbers::pi_v<Real>, std::numbers::pi_v<Real>);
  return u(rng);
}

/// Unitary with one eigenvalue λ of multiplicity exactly k; the remaining
/// eigenvalues are distinct and at least `separation` away from λ and from
/// each other on the circle.
template <typename Real = double>
struct DegenerateUnitary {
  UnitaryMatrix<Real> u;
  Complex<Real> lambda;
  Index multiplicity;
};

template <typename Real = double>
DegenerateUnitary<Real> degenerate_unitary(Rng& rng, Index d, Index k, Real separation = Real(0.2)) {
  if (k < 1 || k > d) throw std::invalid_argument("multiplicity must lie in [1, d]");
  const auto basis = haar_unitary<Real>(rng, d);
  std::vector<Real> angles{uniform_angle<Real>(rng)};
  while (Index(angles.size()) < d - k + 1) {
    const Real a = uniform_angle<Real>(rng);
    bool ok = true;
    for (Real b : angles) ok = ok && arc_distance(std::polar(Real(1), a), std::polar(Real(1), b)) >= separation;
    if (ok) angles.push_back(a);
  }
  VectorC<Real> spectrum(d);
  for (Index j = 0; j < k; ++j) spectrum(j) = std::polar(Real(1), angles[0]);
  for (Index j = k; j < d; ++j) spectrum(j) = std::polar(Real(1), angles[std::size_t(j - k + 1)]);
  MatrixC<Real> u = basis.matrix() * spectrum.asDiagonal() * basis.matrix().adjoint();
  return {UnitaryMatrix<Real>(u, Real(1e-12)), spectrum(0), k};
}

/// Hypotheses of the stationarity postulates: an eigenvalue of multiplicity k
/// and a probability vector supported on l < k coordinates.
template <typename Real = double>
struct Fixture {
  std::string label;
  UnitaryMatrix<Real> u;
  PerturbationGenerator<Real> generator;
  Complex<Real> lambda;
  Index multiplicity;  // k
  Index support;       // l
};

template <typename Real = double>
Fixture<Real> degenerate_fixture(Index d, Index k, Index l, std::uint64_t seed) {
  if (!(1 <= l && l < k && k <= d)) throw std::invalid_argument("degenerate fixture needs 1 <= l < k <= d");
  Rng rng(seed);
  auto deg = degenerate_unitary<Real>(rng, d, k);
  std::vector<Index> coords(static_cast<std::size_t>(d));
  std::iota(coords.begin(), coords.end(), Index(0));
  std::shuffle(coords.begin(), coords.end(), rng);
  const VectorR<Real> w = random_probability<Real>(rng, l);
  VectorR<Real> p = VectorR<Real>::Zero(d);
  for (Index i = 0; i < l; ++i) p(coords[std::size_t(i)]) = w(i);
  p /= p.sum();

  Fixture<Real> fx{"degenerate(d=" + std::to_string(d) + ",k=" + std::to_string(k) + ",l=" + std::to_string(l) +
                       ",seed=" + std::to_string(seed) + ")",
                   deg.u, PerturbationGenerator<Real>(p), deg.lambda, k, l};

  const auto es = unitary_eig(fx.u);
  const auto& c = es.clusters[std::size_t(es.cluster_of(fx.lambda))];
  if (c.size != k || std::abs(c.value - fx.lambda) > Real(1e-10)) {
    throw std::logic_error("fixture self-check failed: " + fx.label);
  }
  return fx;
}

template <typename Real = double>
struct FdVelocity {
  VectorC<Real> finite_difference;  // (λ_j(t+h) − λ_j(t−h)) / 2h
  VectorC<Real> exact;              // eigenvector formula at t
};

/// Centered differences of tracked paths; path labels come from a single
/// tracking run through t − h, t and t + h.
template <typename Real = double>
FdVelocity<Real> fd_velocity(const UnitaryMatrix<Real>& u, const PerturbationGenerator<Real>& g, Real t, Real h) {
  if (!(h > Real(0)) || t - h < Real(0)) throw std::invalid_argument("fd_velocity needs h > 0 and t - h >= 0");
  TrackOptions<Real> opt;
  opt.checkpoints = {t - h, t};
  const auto rec = track_trajectory(u, g, t + h, opt);
  const auto& lo = t - h > Real(0) ? rec.at(t - h) : rec.steps.front();
  const auto& hi = rec.steps.back();
  return {(hi.values - lo.values) / (2 * h), rec.at(t).velocities};
}

/// Dense-grid membership oracle working from the raw matrix only: eigenvalues
/// of Re(e^{−iθ}A) on n_dense angles, no eigenvectors, no shared helpers.
template <typename Real = double>
Membership brute_membership(const MatrixC<Real>& a, Index n_dense = 16384) {
  Eigen::JacobiSVD<MatrixC<Real>> svd(a);
  const Real tol = Real(1e-9) * svd.singularValues()(0);
  Real lowest = std::numeric_limits<Real>::infinity();
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> solver;
  for (Index k = 0; k < n_dense; ++k) {
    const Real theta = 2 * std::numbers::pi_v<Real> * Real(k) / Real(n_dense);
    const Complex<Real> rot(std::cos(theta), -std::sin(theta));
    const MatrixC<Real> m = (rot * a + std::conj(rot) * a.adjoint()) / Real(2);
    solver.compute(m, Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, solver.eigenvalues().maxCoeff());
  }
  if (lowest < -tol) return Membership::outside;
  return lowest <= tol ? Membership::boundary_within_tol : Membership::inside;
}

}  // namespace numrange::testkit
