#pragma once

#include "numrange/perturb.hpp"
#include "numrange/range.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace numrange {

/// S(j, i) = |⟨i|x_j⟩|²: row j is the j-th eigenvector in counterclockwise
/// order, column i a computational basis state. Under p = e_i, eigenvalue j
/// starts moving at angular speed S(j, i).
template <typename Real>
struct SpeedProfile {
  MatrixR<Real> s;
};

template <typename Real>
SpeedProfile<Real> speed_profile(const EigenSystem<Real>& es) {
  return {es.vectors.transpose().cwiseAbs2()};
}

template <typename Real>
struct GeneratorChoice {
  PerturbationGenerator<Real> generator;
  std::pair<Index, Index> target_gap;  // eigenvalue indices (start, end) of the ccw arc > π
  Real gap_width;
  Real closing_rate;      // first-order shrink rate of the gap
  Real predicted_time;    // (gap − π) / closing_rate, first-order estimate
  Index column;           // basis index carrying the one-hot p
  Index ccw_only_column;  // best column if the direction were fixed to ccw
};

namespace detail {

// Extreme first-order speeds of a cluster under p = e_i: the min and max
// eigenvalue of the compressed perturbation (the profile entry when simple).
template <typename Real>
std::pair<Real, Real> cluster_speed_range(const EigenSystem<Real>& es, const SpeedProfile<Real>& sp, Index cluster,
                                          Index column) {
  const auto& c = es.clusters[std::size_t(cluster)];
  if (c.size == 1) return {sp.s(c.first, column), sp.s(c.first, column)};
  const auto cq = compressed_Q(eigenspace_isometry(es, cluster), VectorR<Real>(VectorR<Real>::Unit(es.dim(), column)));
  return {cq.speeds(0), cq.speeds(cq.speeds.size() - 1)};
}

}  // namespace detail

/// Picks a one-hot generator closing the arc gap that keeps 0 outside W(U).
/// The gap runs ccw from eigenvalue j₋ to j₊. Rotating ccw closes it at rate
/// s₋ − s₊, rotating cw at rate s₊ − s₋; the basis index with the largest
/// achievable rate wins, lowest index on ties.
template <typename Real>
GeneratorChoice<Real> select_generator(const EigenSystem<Real>& es, const SpeedProfile<Real>& sp) {
  if (contains_zero_unitary(es) != UnitaryMembership::outside) throw NothingToSteer();
  const auto gap = largest_arc_gap(es);
  const auto& from = es.clusters[std::size_t(gap.from)];
  const auto& to = es.clusters[std::size_t(gap.to)];
  const Index d = es.dim();

  Index best = 0, best_ccw = 0;
  Real best_rate = -1, best_ccw_rate = -std::numeric_limits<Real>::infinity();
  Direction best_dir = Direction::counterclockwise;
  for (Index i = 0; i < d; ++i) {
    const auto [from_lo, from_hi] = detail::cluster_speed_range(es, sp, gap.from, i);
    const auto [to_lo, to_hi] = detail::cluster_speed_range(es, sp, gap.to, i);
    const Real ccw = from_hi - to_lo;
    const Real cw = to_hi - from_lo;
    const Real rate = std::max(ccw, cw);
    if (rate > best_rate) {
      best_rate = rate;
      best = i;
      best_dir = ccw >= cw ? Direction::counterclockwise : Direction::clockwise;
    }
    if (ccw > best_ccw_rate) {
      best_ccw_rate = ccw;
      best_ccw = i;
    }
  }
  const Real pi = std::numbers::pi_v<Real>;
  const Real predicted = best_rate > Real(0) ? (gap.width - pi) / best_rate : std::numeric_limits<Real>::infinity();
  return {PerturbationGenerator<Real>::one_hot(d, best, best_dir),
          {from.first + from.size - 1, to.first},
          gap.width,
          best_rate,
          predicted,
          best,
          best_ccw};
}

enum class SteeringVerdict { reached_interior, reached_boundary, not_reached_within_horizon };

inline std::string_view to_string(SteeringVerdict v) noexcept {
  switch (v) {
    case SteeringVerdict::reached_interior: return "reached_interior";
    case SteeringVerdict::reached_boundary: return "reached_boundary";
    case SteeringVerdict::not_reached_within_horizon: return "not_reached_within_horizon";
  }
  return "?";
}

template <typename Real>
struct TimeSearch {
  std::optional<Real> t_star;
  SteeringVerdict verdict;
};

inline constexpr Index kScanPoints = 256;

/// First t ∈ [0, horizon] with 0 ∈ W(U·V(t)^{±}), judged by the sampled
/// support-function test: a uniform scan of horizon/256 followed by
/// bisection of the first bracket down to width tol_t. t_star is the right
/// end of the final bracket.
template <typename Real>
TimeSearch<Real> min_time_search(const UnitaryMatrix<Real>& u, const PerturbationGenerator<Real>& g, Real horizon,
                                 Real tol_t, Index n_angles = 2048) {
  if (!(horizon > Real(0))) throw std::invalid_argument("horizon must be positive");
  if (!(tol_t > Real(0))) throw std::invalid_argument("time tolerance must be positive");
  auto reached = [&](Real t) {
    return zero_membership<Real>(perturbed_unitary(u, g, t).matrix(), n_angles, true).verdict != Membership::outside;
  };
  auto settle = [&](Real t) -> TimeSearch<Real> {
    const auto v = zero_membership<Real>(perturbed_unitary(u, g, t).matrix(), n_angles).verdict;
    return {t, v == Membership::inside ? SteeringVerdict::reached_interior : SteeringVerdict::reached_boundary};
  };

  const Real dt = horizon / Real(kScanPoints);
  if (reached(Real(0))) return settle(Real(0));
  for (Index k = 1; k <= kScanPoints; ++k) {
    const Real t = k == kScanPoints ? horizon : dt * Real(k);
    if (!reached(t)) continue;
    Real lo = dt * Real(k - 1);
    Real hi = t;
    while (hi - lo > tol_t) {
      const Real mid = lo + (hi - lo) / 2;
      (reached(mid) ? hi : lo) = mid;
    }
    return settle(hi);
  }
  return {std::nullopt, SteeringVerdict::not_reached_within_horizon};
}

/// ‖𝟙 − V(t)‖_∞ for diagonal V(t): 2·max_k |sin(p_k t / 2)|.
template <typename Real>
Real perturbation_norm(const VectorR<Real>& p, Real t) {
  Real m = 0;
  for (Index k = 0; k < p.size(); ++k) m = std::max(m, std::abs(std::sin(p(k) * t / 2)));
  return 2 * m;
}

template <typename Real>
struct SteeringPlan {
  EigenSystem<Real> eigen;
  SpeedProfile<Real> profile;
  GeneratorChoice<Real> choice;
  std::optional<Real> t_star;
  std::optional<Real> perturbation_norm;
  SteeringVerdict verdict;

  const PerturbationGenerator<Real>& generator() const { return choice.generator; }
  Direction direction() const { return choice.generator.direction(); }
};

template <typename Real>
SteeringPlan<Real> plan(const UnitaryMatrix<Real>& u, Real horizon = 2 * std::numbers::pi_v<Real>,
                        Real tol_t = Real(1e-3)) {
  auto es = unitary_eig(u);
  auto sp = speed_profile(es);
  auto choice = select_generator(es, sp);
  const auto search = min_time_search(u, choice.generator, horizon, tol_t);
  std::optional<Real> norm;
  if (search.t_star) norm = perturbation_norm<Real>(choice.generator.p(), *search.t_star);
  return {std::move(es), std::move(sp), std::move(choice), search.t_star, norm, search.verdict};
}

}  // namespace numrange
