#pragma once

#include "numrange/assignment.hpp"
#include "numrange/generator.hpp"
#include "numrange/linalg.hpp"

#include <array>
#include <numbers>
#include <optional>
#include <vector>

namespace numrange {

/// U·V(t) with V(t) = diag(e^{±i p_k t}); the sign follows the generator's
/// direction.
template <typename Real>
UnitaryMatrix<Real> perturbed_unitary(const UnitaryMatrix<Real>& u, const PerturbationGenerator<Real>& g, Real t) {
  if (!(t >= Real(0))) throw std::invalid_argument("perturbation time must be nonnegative");
  if (g.dim() != u.dim()) throw std::invalid_argument("generator dimension does not match matrix");
  return UnitaryMatrix<Real>(u.matrix() * g.phases(t).asDiagonal(), std::max(u.tolerance(), Real(1e-12)));
}

/// Angular speed Σ p_k |⟨k|x⟩|² of a simple eigenvalue with eigenvector x.
template <typename Real>
Real simple_velocity(const VectorC<Real>& x, const VectorR<Real>& p) {
  if (x.size() != p.size()) throw std::invalid_argument("vector and probability vector differ in length");
  if (std::abs(x.norm() - Real(1)) > Real(1e-10)) throw std::invalid_argument("eigenvector must have unit norm");
  return p.dot(x.cwiseAbs2());
}

/// λ·exp(±i·speed·t).
template <typename Real>
Complex<Real> first_order_eigenvalue(const Complex<Real>& lambda, Real speed, Real t,
                                     Direction dir = Direction::counterclockwise) {
  return lambda * std::polar(Real(1), Real(orientation(dir)) * speed * t);
}

/// Q = I†·diag(p)·I for an eigenspace isometry I. The eigenvalues of Q are the
/// first-order speeds of the split eigenvalues, and I|v_j⟩ their limiting
/// eigenvectors.
template <typename Real>
struct CompressedPerturbation {
  MatrixC<Real> q;
  VectorR<Real> speeds;     // ascending
  MatrixC<Real> vectors;    // |v_j⟩, k×k
  MatrixC<Real> predicted;  // I|v_j⟩, d×k
};

template <typename Real>
CompressedPerturbation<Real> compressed_Q(const EigenspaceIsometry<Real>& iso, const VectorR<Real>& p) {
  if (iso.columns.rows() != p.size()) throw std::invalid_argument("isometry and probability vector differ in dimension");
  MatrixC<Real> q = iso.columns.adjoint() * p.template cast<Complex<Real>>().asDiagonal() * iso.columns;
  q = (q + q.adjoint()).eval() / Real(2);
  auto eig = detail::hermitian_eigen<Real>(q);
  MatrixC<Real> predicted = iso.columns * eig.vectors;
  return {std::move(q), std::move(eig.values), std::move(eig.vectors), std::move(predicted)};
}

inline constexpr std::array<double, 3> kProbeTimes{0.1, 1.0, 10.0};

template <typename Real>
struct StationarityCertificate {
  bool stationary = false;
  VectorC<Real> witness;  // eigenvector of U·V(t) at λ for every t, when stationary
  Real min_speed = 0;     // λ_min(Q)
  Real residual = 0;      // max over probe times of ‖UV(t)w − λw‖
};

/// An eigenvalue λ stays put for all t exactly when some eigenvector in its
/// eigenspace has zero weight on the support of p, i.e. λ_min(Q) = 0.
template <typename Real>
StationarityCertificate<Real> stationarity_certificate(const UnitaryMatrix<Real>& u, const EigenspaceIsometry<Real>& iso,
                                                       const PerturbationGenerator<Real>& g,
                                                       Real threshold = Real(Tolerances::stationary)) {
  const auto cq = compressed_Q(iso, g.p());
  StationarityCertificate<Real> cert;
  cert.min_speed = cq.speeds(0);
  if (cert.min_speed > threshold) return cert;
  cert.stationary = true;
  cert.witness = cq.predicted.col(0);
  for (double t : kProbeTimes) {
    const auto m = perturbed_unitary(u, g, Real(t));
    cert.residual = std::max(cert.residual, (m.matrix() * cert.witness - iso.value * cert.witness).norm());
  }
  return cert;
}

/// Number of eigenvalues of M within `tol` of λ.
template <typename Real>
Index eigenvalue_count_near(const UnitaryMatrix<Real>& m, const Complex<Real>& lambda,
                            Real tol = Real(Tolerances::cluster)) {
  const auto es = unitary_eig(m);
  Index n = 0;
  for (Index j = 0; j < es.dim(); ++j) n += std::abs(es.values(j) - lambda) <= tol ? 1 : 0;
  return n;
}

/// dλ/dt = ±iλ·Σ p_k |⟨k|x⟩|² for an eigenpair (λ, x) of U·V(t).
template <typename Real>
Complex<Real> exact_velocity(const Complex<Real>& lambda, const VectorC<Real>& x, const PerturbationGenerator<Real>& g) {
  return Complex<Real>(0, g.sign()) * lambda * g.p().dot(x.cwiseAbs2());
}

template <typename Real>
struct TrajectoryStep {
  Real t;
  VectorC<Real> values;      // path positions λ_j(t)
  VectorC<Real> velocities;  // exact dλ_j/dt
  VectorR<Real> speeds;      // Σ p_k |⟨k|x_j(t)⟩|²
  VectorR<Real> unwrapped;   // continuous arguments
};

/// Eigenvalue paths of U·V(t)^{±}, index-matched across accepted steps. Path
/// j starts at the j-th eigenvalue of U in counterclockwise order.
template <typename Real>
struct TrajectoryRecord {
  Direction direction = Direction::counterclockwise;
  std::vector<TrajectoryStep<Real>> steps;

  Index dim() const { return steps.empty() ? 0 : steps.front().values.size(); }
  std::size_t size() const noexcept { return steps.size(); }

  std::vector<Real> t_grid() const {
    std::vector<Real> t;
    for (const auto& s : steps) t.push_back(s.t);
    return t;
  }

  std::vector<Complex<Real>> path(Index j) const {
    std::vector<Complex<Real>> out;
    for (const auto& s : steps) out.push_back(s.values(j));
    return out;
  }

  /// Step recorded exactly at time t (checkpoints are always hit exactly).
  const TrajectoryStep<Real>& at(Real t) const {
    for (const auto& s : steps) {
      if (s.t == t) return s;
    }
    throw std::out_of_range("no trajectory step recorded at t=" + std::to_string(double(t)));
  }

  /// Speeds at t = 0, i.e. the first-order prediction for each path.
  const VectorR<Real>& initial_speeds() const { return steps.front().speeds; }
};

template <typename Real>
struct TrackOptions {
  Real max_step = Real(0.05);
  Real min_step = Real(1e-12);
  Real max_arc = std::numbers::pi_v<Real> / 8;
  Real ambiguity_ratio = 2;
  std::vector<Real> checkpoints;  // times the grid must contain
};

namespace detail {

template <typename Real>
TrajectoryStep<Real> make_step(Real t, const VectorC<Real>& values, const MatrixC<Real>& vectors,
                               const PerturbationGenerator<Real>& g) {
  const Index d = values.size();
  TrajectoryStep<Real> s{t, values, VectorC<Real>(d), VectorR<Real>(d), VectorR<Real>(d)};
  for (Index j = 0; j < d; ++j) {
    s.speeds(j) = g.p().dot(vectors.col(j).cwiseAbs2());
    s.velocities(j) = exact_velocity<Real>(values(j), vectors.col(j), g);
  }
  return s;
}

}  // namespace detail

/// Tracks λ(U·V(t)) on an adaptive grid over [0, t_end]. Each step
/// re-diagonalizes and matches the new eigenvalues to the first-order
/// extrapolation of the current paths by minimum total arc distance. A step
/// is halved when the matching is ambiguous or a path jumps more than
/// `max_arc`; below `min_step` a TrackingCollision is raised.
template <typename Real>
TrajectoryRecord<Real> track_trajectory(const UnitaryMatrix<Real>& u, const PerturbationGenerator<Real>& g, Real t_end,
                                        TrackOptions<Real> opt = {}) {
  if (!(t_end > Real(0))) throw std::invalid_argument("t_end must be positive");
  if (!(opt.max_step > Real(0))) throw std::invalid_argument("max_step must be positive");
  if (g.dim() != u.dim()) throw std::invalid_argument("generator dimension does not match matrix");
  const Index d = u.dim();

  // At t = 0 a degenerate eigenspace is resolved into the limiting eigenvectors
  // I|v_j⟩ of the compressed perturbation, so paths start with their split speeds.
  const auto es0 = unitary_eig(u);
  MatrixC<Real> vectors = es0.vectors;
  for (std::size_t c = 0; c < es0.clusters.size(); ++c) {
    const auto& cl = es0.clusters[c];
    if (cl.size > 1) vectors.middleCols(cl.first, cl.size) = compressed_Q(eigenspace_isometry(es0, Index(c)), g.p()).predicted;
  }

  TrajectoryRecord<Real> rec;
  rec.direction = g.direction();
  rec.steps.push_back(detail::make_step<Real>(Real(0), es0.values, vectors, g));
  rec.steps.back().unwrapped = es0.arguments();

  std::vector<Real> marks;
  for (Real c : opt.checkpoints) {
    if (c > Real(0) && c < t_end) marks.push_back(c);
  }
  marks.push_back(t_end);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  std::size_t next_mark = 0;

  Real t = 0;
  Real h = opt.max_step;
  MatrixR<Real> cost(d, d);
  while (t < t_end) {
    const auto& cur = rec.steps.back();
    const Real target = marks[next_mark];
    const bool lands = t + h >= target;
    const Real t_new = lands ? target : t + h;
    const Real step = t_new - t;

    const auto es = unitary_eig(perturbed_unitary(u, g, t_new));
    VectorC<Real> predicted(d);
    for (Index j = 0; j < d; ++j) predicted(j) = first_order_eigenvalue(cur.values(j), cur.speeds(j), step, g.direction());
    for (Index j = 0; j < d; ++j) {
      for (Index m = 0; m < d; ++m) cost(j, m) = arc_distance(predicted(j), es.values(m));
    }
    const auto assign = min_cost_assignment<Real>(cost);

    std::vector<Index> owner(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) owner[std::size_t(assign[std::size_t(j)])] = j;

    // Competing candidates only matter when they would send path j somewhere
    // other than where its rival path was predicted to go.
    bool accept = true;
    for (Index j = 0; j < d && accept; ++j) {
      const Index m = assign[std::size_t(j)];
      if (arc_distance(cur.values(j), es.values(m)) > opt.max_arc) accept = false;
      for (Index other = 0; other < d && accept; ++other) {
        if (std::abs(es.values(other) - es.values(m)) <= Real(Tolerances::cluster)) continue;
        if (std::abs(predicted(owner[std::size_t(other)]) - predicted(j)) <= Real(Tolerances::cluster)) continue;
        if (cost(j, other) < opt.ambiguity_ratio * cost(j, m)) accept = false;
      }
    }
    if (!accept) {
      h = step / 2;
      if (h < opt.min_step) throw TrackingCollision(double(t), double(h));
      continue;
    }

    VectorC<Real> values(d);
    MatrixC<Real> matched(d, d);
    for (Index j = 0; j < d; ++j) {
      values(j) = es.values(assign[std::size_t(j)]);
      matched.col(j) = es.vectors.col(assign[std::size_t(j)]);
    }
    auto next = detail::make_step<Real>(t_new, values, matched, g);
    for (Index j = 0; j < d; ++j) next.unwrapped(j) = cur.unwrapped(j) + std::arg(values(j) * std::conj(cur.values(j)));
    rec.steps.push_back(std::move(next));

    t = t_new;
    if (lands) ++next_mark;
    h = std::min(opt.max_step, 2 * step);
  }
  return rec;
}

template <typename Real>
TrajectoryRecord<Real> track_trajectory(const UnitaryMatrix<Real>& u, const PerturbationGenerator<Real>& g, Real t_end,
                                        Real max_step) {
  TrackOptions<Real> opt;
  opt.max_step = max_step;
  return track_trajectory(u, g, t_end, std::move(opt));
}

/// Largest t such that every earlier recorded step of path j stays within
/// `threshold` of its first-order prediction λ_j e^{±i s_j t}.
template <typename Real>
VectorR<Real> first_order_horizon(const TrajectoryRecord<Real>& rec, Real threshold = Real(1e-3)) {
  const Index d = rec.dim();
  VectorR<Real> horizon = VectorR<Real>::Zero(d);
  const auto& s0 = rec.steps.front();
  for (Index j = 0; j < d; ++j) {
    for (const auto& s : rec.steps) {
      const Complex<Real> approx = first_order_eigenvalue(s0.values(j), s0.speeds(j), s.t, rec.direction);
      if (std::abs(s.values(j) - approx) >= threshold) break;
      horizon(j) = s.t;
    }
  }
  return horizon;
}

}  // namespace numrange
