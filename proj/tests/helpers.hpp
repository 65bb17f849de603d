#pragma once

#include "numrange/testkit.hpp"

#include <complex>

namespace numrange::test {

using C = std::complex<double>;
using Mat = MatrixC<double>;
using Vec = VectorC<double>;
using VecR = VectorR<double>;

inline Mat diag(std::initializer_list<C> values) {
  Vec v(Index(values.size()));
  Index k = 0;
  for (C z : values) v(k++) = z;
  return v.asDiagonal();
}

inline Mat ginibre(testkit::Rng& rng, Index d) {
  std::normal_distribution<double> n(0, 1);
  Mat a(d, d);
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < d; ++r) a(r, c) = C(n(rng), n(rng));
  }
  return a;
}

inline double dist(const Mat& a, const Mat& b) { return operator_norm(Mat(a - b)); }

}  // namespace numrange::test
