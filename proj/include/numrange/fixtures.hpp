#pragma once

#include "numrange/types.hpp"

namespace numrange::fixtures {

/// 3×3 unitary published with 6 significant decimals (unitary to ~1e-6).
/// 0 lies outside its numerical range.
inline constexpr int kReferenceVersion = 1;
inline constexpr double kReferenceUnitarityTol = 1e-4;

inline MatrixC<double> reference_matrix() {
  using C = std::complex<double>;
  MatrixC<double> u(3, 3);
  u << C(0.267868, 0.026891), C(0.752935, -0.510663), C(-0.314404, -0.0313982),  //
      C(-0.83413, -0.0693252), C(0.245915, -0.275811), C(0.34174, -0.214685),    //
      C(0.472125, 0.0635826), C(0.0211772, -0.18793), C(0.795835, -0.322391);
  return u;
}

inline UnitaryMatrix<double> reference_unitary() { return UnitaryMatrix<double>(reference_matrix(), kReferenceUnitarityTol); }

/// Published squared moduli |⟨i|x_j⟩|² of its eigenvectors (rows j).
inline MatrixR<double> reference_speed_profile() {
  MatrixR<double> q(3, 3);
  q << 0.426542, 0.543517, 0.0299407,  //
      0.0480551, 0.105588, 0.846357,   //
      0.525403, 0.350895, 0.123702;
  return q;
}

/// Published steering outcome: p = e_2 (index 1), clockwise, first touch near
/// t = 1.45 and 0 strictly inside at t = 1.5.
inline constexpr Index kReferenceColumn = 1;
inline constexpr double kReferenceTStar = 1.45;
inline constexpr double kReferenceTStarLow = 1.40;
inline constexpr double kReferenceTStarHigh = 1.50;
inline constexpr double kReferenceSnapshotTime = 1.5;

}  // namespace numrange::fixtures
