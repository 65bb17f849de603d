#pragma once

#include "numrange/types.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace numrange {

enum class Direction { counterclockwise, clockwise };

/// +1 for counterclockwise, -1 for clockwise.
inline int orientation(Direction d) noexcept { return d == Direction::counterclockwise ? 1 : -1; }

inline std::string_view to_string(Direction d) noexcept {
  return d == Direction::counterclockwise ? "ccw" : "cw";
}

inline Direction parse_direction(std::string_view s) {
  if (s == "ccw" || s == "counterclockwise") return Direction::counterclockwise;
  if (s == "cw" || s == "clockwise") return Direction::clockwise;
  throw std::invalid_argument("unknown direction '" + std::string(s) + "' (expected cw or ccw)");
}

/// Probability vector p defining D₊ = diag(p), together with the rotation
/// direction. Clockwise means the conjugated family V(t)† = exp(−itD₊).
template <typename Real = double>
class PerturbationGenerator {
 public:
  PerturbationGenerator(VectorR<Real> p, Direction direction = Direction::counterclockwise)
      : p_(std::move(p)), direction_(direction) {
    if (p_.size() == 0) throw std::invalid_argument("probability vector is empty");
    if (!p_.allFinite()) throw std::invalid_argument("probability vector has non-finite entries");
    if ((p_.array() < Real(0)).any()) throw std::invalid_argument("probability vector has negative entries");
    if (std::abs(p_.sum() - Real(1)) > Real(Tolerances::probability)) {
      throw std::invalid_argument("probability vector must sum to 1, sums to " + std::to_string(double(p_.sum())));
    }
  }

  static PerturbationGenerator one_hot(Index d, Index i, Direction direction = Direction::counterclockwise) {
    VectorR<Real> p = VectorR<Real>::Zero(d);
    p(i) = 1;
    return {std::move(p), direction};
  }

  static PerturbationGenerator uniform(Index d, Direction direction = Direction::counterclockwise) {
    return {VectorR<Real>::Constant(d, Real(1) / Real(d)), direction};
  }

  const VectorR<Real>& p() const noexcept { return p_; }
  Direction direction() const noexcept { return direction_; }
  Index dim() const noexcept { return p_.size(); }
  Real sign() const noexcept { return Real(orientation(direction_)); }

  /// Diagonal of V(t) (or V(t)† for clockwise): e^{±i p_k t}.
  VectorC<Real> phases(Real t) const {
    VectorC<Real> v(p_.size());
    for (Index k = 0; k < p_.size(); ++k) v(k) = std::polar(Real(1), sign() * p_(k) * t);
    return v;
  }

  PerturbationGenerator reversed() const {
    return {p_, direction_ == Direction::counterclockwise ? Direction::clockwise : Direction::counterclockwise};
  }

 private:
  VectorR<Real> p_;
  Direction direction_;
};

}  // namespace numrange
