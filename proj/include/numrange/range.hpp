#pragma once

#include "numrange/linalg.hpp"
#include "numrange/parallel.hpp"

#include <numbers>
#include <string_view>
#include <vector>

namespace numrange {

template <typename Real>
struct SupportPoint {
  Real h;                  // max over W(A) of Re(e^{−iθ}z)
  VectorC<Real> witness;   // unit vector attaining it
  Complex<Real> boundary;  // ⟨witness|A|witness⟩ ∈ ∂W(A)
};

/// Support function of W(A) in direction e^{iθ}: the top eigenpair of
/// Re(e^{−iθ}A) = (e^{−iθ}A + e^{iθ}A†)/2.
template <typename Real>
SupportPoint<Real> support_function(const MatrixC<Real>& a, Real theta) {
  const Complex<Real> rot = std::polar(Real(1), -theta);
  const MatrixC<Real> m = (rot * a + std::conj(rot) * a.adjoint()) / Real(2);
  const auto eig = detail::hermitian_eigen<Real>(m);
  const Index top = eig.values.size() - 1;
  VectorC<Real> w = eig.vectors.col(top);
  const Complex<Real> z = w.dot(a * w);
  return {eig.values(top), std::move(w), z};
}

/// W(A) sampled on a uniform angle grid θ_k = 2πk/n.
template <typename Real>
struct SupportProfile {
  VectorR<Real> angles;
  VectorR<Real> support;
  VectorC<Real> boundary;

  Index size() const noexcept { return angles.size(); }

  /// Largest violation of Re(e^{−iθ_m} z_k) ≤ h(θ_m) over all pairs; ≤ 0 for
  /// a consistent profile.
  Real consistency_defect() const {
    Real worst = -std::numeric_limits<Real>::infinity();
    for (Index m = 0; m < size(); ++m) {
      const Complex<Real> rot = std::polar(Real(1), -angles(m));
      for (Index k = 0; k < size(); ++k) worst = std::max(worst, (rot * boundary(k)).real() - support(m));
    }
    return worst;
  }
};

inline void require_angles(Index n) {
  if (n < 16) throw std::invalid_argument("angle grid needs at least 16 points");
}

template <typename Real>
VectorR<Real> angle_grid(Index n) {
  VectorR<Real> theta(n);
  for (Index k = 0; k < n; ++k) theta(k) = 2 * std::numbers::pi_v<Real> * Real(k) / Real(n);
  return theta;
}

template <typename Real>
SupportProfile<Real> support_profile(const MatrixC<Real>& a, Index n_angles) {
  require_square_finite(a);
  require_angles(n_angles);
  SupportProfile<Real> prof{angle_grid<Real>(n_angles), VectorR<Real>(n_angles), VectorC<Real>(n_angles)};
  parallel_for(std::size_t(n_angles), [&](std::size_t k) {
    const auto s = support_function<Real>(a, prof.angles(Index(k)));
    prof.support(Index(k)) = s.h;
    prof.boundary(Index(k)) = s.boundary;
  });
  return prof;
}

/// Vertices listed counterclockwise.
template <typename Real>
struct RangePolygon {
  std::vector<Complex<Real>> vertices;
};

template <typename Real>
bool is_convex(const RangePolygon<Real>& poly, Real tol = Real(1e-12)) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex<Real> e1 = v[(i + 1) % n] - v[i];
    const Complex<Real> e2 = v[(i + 2) % n] - v[(i + 1) % n];
    if ((std::conj(e1) * e2).imag() < -tol) return false;
  }
  return true;
}

/// For a unitary, W(U) is the polygon spanned by its distinct eigenvalues.
template <typename Real>
RangePolygon<Real> unitary_range_polygon(const EigenSystem<Real>& es) {
  RangePolygon<Real> poly;
  for (const auto& c : es.clusters) poly.vertices.push_back(c.value);
  return poly;
}

/// The widest counterclockwise arc between consecutive distinct eigenvalues.
/// `from` and `to` are cluster indices; the arc runs ccw from `from` to `to`.
template <typename Real>
struct ArcGap {
  Real width = 0;
  Index from = 0;
  Index to = 0;
};

template <typename Real>
ArcGap<Real> largest_arc_gap(const EigenSystem<Real>& es) {
  const Index n = Index(es.clusters.size());
  if (n == 1) return {2 * std::numbers::pi_v<Real>, 0, 0};
  ArcGap<Real> best;
  best.width = -1;
  for (Index c = 0; c < n; ++c) {
    const Index next = (c + 1) % n;
    const Real w = ccw_arc(es.clusters[std::size_t(c)].value, es.clusters[std::size_t(next)].value);
    if (w > best.width) best = {w, c, next};
  }
  return best;
}

enum class UnitaryMembership { inside, on_boundary, outside };

inline std::string_view to_string(UnitaryMembership m) noexcept {
  switch (m) {
    case UnitaryMembership::inside: return "inside";
    case UnitaryMembership::on_boundary: return "on_boundary";
    case UnitaryMembership::outside: return "outside";
  }
  return "?";
}

/// Gap test: 0 ∈ conv(λ(U)) iff no arc between consecutive eigenvalues
/// exceeds π.
template <typename Real>
UnitaryMembership contains_zero_unitary(const EigenSystem<Real>& es, Real tol = Real(1e-10)) {
  if (es.clusters.size() <= 1) return UnitaryMembership::outside;
  const Real gap = largest_arc_gap(es).width;
  const Real pi = std::numbers::pi_v<Real>;
  if (std::abs(gap - pi) <= tol) return UnitaryMembership::on_boundary;
  return gap > pi ? UnitaryMembership::outside : UnitaryMembership::inside;
}

enum class Membership { inside, outside, boundary_within_tol };

inline std::string_view to_string(Membership m) noexcept {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::outside: return "outside";
    case Membership::boundary_within_tol: return "boundary_within_tol";
  }
  return "?";
}

template <typename Real>
struct MembershipReport {
  Membership verdict;
  Real min_support;  // min_θ h(θ); negative means 0 ∉ W(A)
  Real argmin_angle;
  Real tolerance;
};

namespace detail {

// Golden-section search for a local minimum of h on [lo, hi].
template <typename Real>
std::pair<Real, Real> refine_support_minimum(const MatrixC<Real>& a, Real lo, Real hi) {
  const Real ratio = (std::sqrt(Real(5)) - 1) / 2;
  auto h = [&](Real th) { return support_function<Real>(a, th).h; };
  Real x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  Real f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 80 && hi - lo > std::numeric_limits<Real>::epsilon() * 8; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = h(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace detail

/// Support-function membership test: h is sampled on the uniform grid, and
/// every sampled local minimum that could hide a negative value between grid
/// points (h_k < Δθ·‖A‖, h being ‖A‖-Lipschitz) is refined by golden-section
/// search. With `early_exit`, stops at the first angle that certifies
/// `outside` (min_support is then only an upper bound).
template <typename Real>
MembershipReport<Real> zero_membership(const MatrixC<Real>& a, Index n_angles, bool early_exit = false) {
  require_square_finite(a);
  require_angles(n_angles);
  const Real norm = operator_norm(a);
  const Real tol = Real(1e-9) * norm;
  const VectorR<Real> theta = angle_grid<Real>(n_angles);
  MembershipReport<Real> rep{Membership::outside, std::numeric_limits<Real>::infinity(), 0, tol};
  VectorR<Real> h(n_angles);
  if (early_exit) {
    for (Index k = 0; k < n_angles; ++k) {
      h(k) = support_function<Real>(a, theta(k)).h;
      if (h(k) < rep.min_support) {
        rep.min_support = h(k);
        rep.argmin_angle = theta(k);
      }
      if (h(k) < -tol) return rep;
    }
  } else {
    h = support_profile<Real>(a, n_angles).support;
    Index k = 0;
    rep.min_support = h.minCoeff(&k);
    rep.argmin_angle = theta(k);
  }
  const Real step = theta(1) - theta(0);
  for (Index k = 0; k < n_angles; ++k) {
    const Real prev = h((k + n_angles - 1) % n_angles), next = h((k + 1) % n_angles);
    if (h(k) > prev || h(k) > next || h(k) >= step * norm) continue;
    const auto [at, value] = detail::refine_support_minimum<Real>(a, theta(k) - step, theta(k) + step);
    if (value < rep.min_support) {
      rep.min_support = value;
      rep.argmin_angle = at;
    }
    if (early_exit && value < -tol) break;
  }
  if (rep.min_support < -tol) {
    rep.verdict = Membership::outside;
  } else if (rep.min_support <= tol) {
    rep.verdict = Membership::boundary_within_tol;
  } else {
    rep.verdict = Membership::inside;
  }
  return rep;
}

template <typename Real>
Membership contains_zero_general(const MatrixC<Real>& a, Index n_angles = 2048) {
  return zero_membership<Real>(a, n_angles).verdict;
}

/// Distance from the origin to W(A): max_θ(−h(θ)) when outside, 0 otherwise.
template <typename Real>
Real distance_to_zero(const MatrixC<Real>& a, Index n_angles = 2048) {
  const auto rep = zero_membership<Real>(a, n_angles);
  return rep.verdict == Membership::outside ? -rep.min_support : Real(0);
}

}  // namespace numrange
