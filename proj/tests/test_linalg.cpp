#include "helpers.hpp"
#include "numrange/fixtures.hpp"
#include "numrange/linalg.hpp"
#include "numrange/range.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

using namespace numrange;
using namespace numrange::test;

TEST_CASE("herm_eig: identity, diagonal and Pauli X") {
  auto id = herm_eig(HermitianMatrix<double>(Mat::Identity(3, 3)));
  CHECK((id.values - VecR::Ones(3)).norm() < 1e-14);
  CHECK(dist(id.vectors.adjoint() * id.vectors, Mat::Identity(3, 3)) < 1e-12);

  auto dg = herm_eig(HermitianMatrix<double>(diag({3, 1, 2})));
  CHECK(dg.values(0) == doctest::Approx(1));
  CHECK(dg.values(1) == doctest::Approx(2));
  CHECK(dg.values(2) == doctest::Approx(3));
  // columns are standard basis vectors up to phase
  CHECK(std::abs(dg.vectors(1, 0)) == doctest::Approx(1));
  CHECK(std::abs(dg.vectors(2, 1)) == doctest::Approx(1));
  CHECK(std::abs(dg.vectors(0, 2)) == doctest::Approx(1));

  Mat x(2, 2);
  x << 0, 1, 1, 0;
  auto px = herm_eig(HermitianMatrix<double>(x));
  CHECK(px.values(0) == doctest::Approx(-1));
  CHECK(px.values(1) == doctest::Approx(1));
  const double r = std::sqrt(0.5);
  CHECK(std::abs(px.vectors.col(0).dot(Vec((Vec(2) << r, -r).finished()))) == doctest::Approx(1));
  CHECK(std::abs(px.vectors.col(1).dot(Vec((Vec(2) << r, r).finished()))) == doctest::Approx(1));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  testkit::Rng rng(11);
  for (Index d = 1; d <= 8; ++d) {
    const Mat g = ginibre(rng, d);
    const Mat h = (g + g.adjoint()) / 2.0;
    const auto e = herm_eig(HermitianMatrix<double>(h));
    CHECK(dist(e.vectors * e.values.cast<C>().asDiagonal() * e.vectors.adjoint(), h) < 1e-9);
    for (Index k = 1; k < d; ++k) CHECK(e.values(k - 1) <= e.values(k));
  }
}

TEST_CASE("HermitianMatrix and UnitaryMatrix validate their input") {
  Mat nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(HermitianMatrix<double>{nh}, InvalidMatrix);
  CHECK_THROWS_AS(UnitaryMatrix<double>{Mat(Mat::Identity(2, 2) * 1.1)}, InvalidMatrix);
  CHECK_THROWS_AS(UnitaryMatrix<double>{Mat(2, 3)}, InvalidMatrix);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = C(std::nan(""), 0);
  CHECK_THROWS_AS(UnitaryMatrix<double>{bad}, InvalidMatrix);
}

TEST_CASE("unitary_eig: identity is one cluster of multiplicity 2") {
  const auto es = unitary_eig(UnitaryMatrix<double>::identity(2));
  REQUIRE(es.clusters.size() == 1);
  CHECK(es.multiplicity(0) == 2);
  CHECK(std::abs(es.clusters[0].value - 1.0) < 1e-14);
}

TEST_CASE("unitary_eig: diag(1, i, -1) in counterclockwise order") {
  const auto es = unitary_eig(UnitaryMatrix<double>(diag({1, C(0, 1), -1})));
  REQUIRE(es.dim() == 3);
  CHECK(std::abs(es.values(0) - 1.0) < 1e-14);
  CHECK(std::abs(es.values(1) - C(0, 1)) < 1e-14);
  CHECK(std::abs(es.values(2) + 1.0) < 1e-14);
  CHECK(es.clusters.size() == 3);
}

TEST_CASE("unitary_eig: the 3x3 reference matrix") {
  const auto u = fixtures::reference_unitary();
  const auto es = unitary_eig(u);
  CHECK(es.clusters.size() == 3);
  CHECK(dist(es.reconstruct(), u.matrix()) <= 1e-4);
  for (Index j = 0; j < 3; ++j) CHECK(std::abs(std::abs(es.values(j)) - 1) <= 1e-4);
}

namespace {

void check_eigensystem(const UnitaryMatrix<double>& u, double tol = 1e-9) {
  const auto es = unitary_eig(u);
  const Index d = u.dim();
  for (Index j = 0; j < d; ++j) CHECK(std::abs(std::abs(es.values(j)) - 1) <= 1e-10);
  CHECK(dist(es.vectors.adjoint() * es.vectors, Mat::Identity(d, d)) <= 1e-10);
  CHECK(dist(es.reconstruct(), u.matrix()) <= tol);
  // cluster representatives unwrapped from the first never decrease; members
  // of one cluster agree within the cluster tolerance
  double unwrapped = 0;
  for (std::size_t c = 0; c < es.clusters.size(); ++c) {
    const auto& cl = es.clusters[c];
    for (Index j = cl.first; j < cl.first + cl.size; ++j) CHECK(std::abs(es.values(j) - cl.value) <= 1e-8);
    if (c == 0) continue;
    const double step = ccw_arc(es.clusters[c - 1].value, cl.value);
    CHECK(step < 2 * std::numbers::pi - 1e-9);
    unwrapped += step;
  }
  CHECK(unwrapped < 2 * std::numbers::pi + 1e-9);
  // every cluster spans an eigenspace: U·I = λ·I
  for (std::size_t c = 0; c < es.clusters.size(); ++c) {
    const auto iso = eigenspace_isometry(es, Index(c));
    CHECK(dist(iso.columns.adjoint() * iso.columns, Mat::Identity(iso.multiplicity(), iso.multiplicity())) <= 1e-10);
    CHECK(dist(u.matrix() * iso.columns, iso.value * iso.columns) <= 1e-9);
  }
}

}  // namespace

TEST_CASE("unitary_eig invariants on Haar unitaries") {
  for (Index d = 1; d <= 8; ++d) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) check_eigensystem(testkit::haar_unitary(d, 100 * d + seed));
  }
}

TEST_CASE("unitary_eig resolves mirror pairs with equal real part") {
  // e^{±iε}: Re U is degenerate, only Im U separates them
  testkit::Rng rng(5);
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    const auto x = testkit::haar_unitary(rng, 4);
    const Mat u = x.matrix() * diag({std::polar(1.0, eps), std::polar(1.0, -eps), C(0, 1), C(0, -1)}) *
                  x.matrix().adjoint();
    const UnitaryMatrix<double> uu(u, 1e-12);
    check_eigensystem(uu);
    const auto es = unitary_eig(uu);
    CHECK(es.clusters.size() == 4);
    CHECK(std::abs(principal_argument(es.values(0)) + std::numbers::pi / 2) < 1e-9);
    CHECK(std::abs(principal_argument(es.values(1)) + eps) < 1e-9);
  }
}

TEST_CASE("unitary_eig: near-mirror pairs whose real parts differ by 1e-8 to 1e-6") {
  // Re U alone separates these poorly; the pair must still reconstruct to 1e-9
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = testkit::haar_unitary(4, seed);
    for (double gap : {1.2e-8, 2e-8, 5e-8, 2e-7, 8e-7}) {
      const double th = 0.5, dl = gap / std::sin(th);
      const Mat u = x.matrix() * diag({std::polar(1.0, th), std::polar(1.0, -th - dl), std::polar(1.0, 2.5),
                                       std::polar(1.0, -2.0)}) * x.matrix().adjoint();
      check_eigensystem(UnitaryMatrix<double>(u, 1e-12));
    }
  }
}

TEST_CASE("unitary_eig: degenerate eigenvalue at the branch cut stays one cluster") {
  testkit::Rng rng(9);
  const auto x = testkit::haar_unitary(rng, 4);
  // two copies of -1, approached from either side of the cut
  const Mat u = x.matrix() * diag({-1, std::polar(1.0, -std::numbers::pi + 1e-12), C(0, 1), 1}) * x.matrix().adjoint();
  const auto es = unitary_eig(UnitaryMatrix<double>(u, 1e-12));
  CHECK(es.clusters.size() == 3);
  CHECK(es.clusters[0].size == 2);
  CHECK(std::abs(es.clusters[0].value + 1.0) < 1e-9);
  check_eigensystem(UnitaryMatrix<double>(u, 1e-12));
}

TEST_CASE("unitary_eig is deterministic") {
  const auto u = testkit::haar_unitary(6, 77);
  const auto a = unitary_eig(u), b = unitary_eig(u);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("eigenvector phase: largest entry is real positive") {
  const auto es = unitary_eig(testkit::haar_unitary(5, 3));
  for (Index j = 0; j < 5; ++j) {
    Index k = 0;
    es.vectors.col(j).cwiseAbs().maxCoeff(&k);
    CHECK(es.vectors(k, j).real() > 0);
    CHECK(std::abs(es.vectors(k, j).imag()) < 1e-15);
  }
}

TEST_CASE("schatten_norm examples") {
  for (Index d = 1; d <= 6; ++d) CHECK(schatten_norm(testkit::haar_unitary(d, d).matrix(), 2.0) == doctest::Approx(std::sqrt(double(d))));
  CHECK(schatten_norm(diag({3, 4}), 2.0) == doctest::Approx(5));
  CHECK_THROWS_AS(schatten_norm(diag({3, 4}), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(schatten_norm(diag({3, 4}), std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("schatten_norm of the reference matrix against the A^+A route") {
  const Mat a = fixtures::reference_matrix();
  const auto gram = herm_eig(HermitianMatrix<double>(Mat(a.adjoint() * a)));
  double sum = 0;
  for (Index k = 0; k < 3; ++k) sum += std::max(0.0, gram.values(k));
  CHECK(std::abs(schatten_norm(a, 2.0) - std::sqrt(sum)) < 1e-12);
  CHECK(std::abs(schatten_norm(a, 2.0) - std::sqrt(3.0)) < 1e-4);
}

TEST_CASE("schatten norms agree with singular values from the Gram matrix") {
  testkit::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat a = ginibre(rng, 2 + trial % 6);
    const auto gram = herm_eig(HermitianMatrix<double>(Mat(a.adjoint() * a), 1e-10));
    const VecR sigma = gram.values.cwiseMax(0.0).cwiseSqrt();
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double oracle = std::pow(sigma.array().pow(p).sum(), 1.0 / p);
      CHECK(std::abs(schatten_norm(a, p) - oracle) <= 1e-9 * oracle);
    }
    CHECK(std::abs(schatten_inf(a) - sigma.maxCoeff()) <= 1e-9 * sigma.maxCoeff());
    // p = 64 is close to the operator norm
    CHECK(schatten_norm(a, 64.0) / schatten_inf(a) - 1 <= 0.05);
  }
}

TEST_CASE("schatten_inf examples") {
  CHECK(schatten_inf(testkit::haar_unitary(4, 1).matrix()) == doctest::Approx(1));
  CHECK(schatten_inf(diag({0.5, 2})) == doctest::Approx(2));
  const Mat gap = Mat::Identity(2, 2) - diag({1, std::polar(1.0, std::numbers::pi / 2)});
  CHECK(std::abs(schatten_inf(gap) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("principal_log_unitary examples") {
  auto zero = principal_log_unitary(UnitaryMatrix<double>::identity(3));
  CHECK(zero.generator.matrix().norm() < 1e-15);
  CHECK_FALSE(zero.branch_ambiguous);

  auto dl = principal_log_unitary(UnitaryMatrix<double>(diag({std::polar(1.0, 0.3), std::polar(1.0, -0.7)})));
  CHECK(dist(dl.generator.matrix(), diag({0.3, -0.7})) < 1e-14);

  auto cut = principal_log_unitary(UnitaryMatrix<double>(diag({-1, 1})));
  CHECK(cut.branch_ambiguous);
  CHECK(dist(cut.generator.matrix(), diag({std::numbers::pi, 0})) < 1e-14);
}

TEST_CASE("exp(i Log U) = U against the matrix-function exponential") {
  testkit::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 7;
    const auto u = testkit::haar_unitary(rng, d);
    const auto log = principal_log_unitary(u);
    const VecR spectrum = herm_eig(log.generator).values;
    CHECK(spectrum.minCoeff() > -std::numbers::pi);
    CHECK(spectrum.maxCoeff() <= std::numbers::pi);
    const Mat oracle = (C(0, 1) * log.generator.matrix()).exp();
    CHECK(dist(oracle, u.matrix()) <= 1e-9);
    CHECK(dist(unitary_exp(log.generator).matrix(), u.matrix()) <= 1e-9);
  }
}

TEST_CASE("geodesic_point endpoints and scalar geodesic") {
  testkit::Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + trial % 5;
    const auto u = testkit::haar_unitary(rng, d);
    const auto v = testkit::haar_unitary(rng, d);
    CHECK(dist(geodesic_point(u, v, 0.0).value.matrix(), u.matrix()) <= 1e-9);
    CHECK(dist(geodesic_point(u, v, 1.0).value.matrix(), v.matrix()) <= 1e-9);
  }
  for (double alpha : {-2.5, -0.4, 0.0, 1.0, 3.0}) {
    const auto v = UnitaryMatrix<double>(diag({std::polar(1.0, alpha)}));
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
      const auto g = geodesic_point(UnitaryMatrix<double>::identity(1), v, t);
      CHECK(std::abs(g.value.matrix()(0, 0) - std::polar(1.0, t * alpha)) < 1e-14);
    }
  }
  const auto u = UnitaryMatrix<double>::identity(2);
  CHECK_THROWS_AS(geodesic_point(u, u, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(geodesic_point(u, u, -0.1), std::invalid_argument);
}

TEST_CASE("reduce_to_generator examples") {
  const auto a = reduce_to_generator(HermitianMatrix<double>(diag({0.2, 0.5, 0.3})));
  CHECK((a.generator.p() - (VecR(3) << 0.2, 0.5, 0.3).finished()).norm() < 1e-15);
  CHECK(dist(a.basis.matrix(), Mat::Identity(3, 3)) == 0);
  CHECK(a.shift == 0);

  const auto b = reduce_to_generator(HermitianMatrix<double>(diag({-1, 1})));
  CHECK((b.generator.p() - (VecR(2) << 0, 1).finished()).norm() < 1e-15);
  CHECK(b.shift == -1);
  CHECK(b.scale == 2);

  CHECK_THROWS_AS(reduce_to_generator(HermitianMatrix<double>(Mat::Zero(3, 3))), ZeroPerturbation);
}

TEST_CASE("reduce_to_generator reconstructs H") {
  testkit::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + trial % 5;
    const Mat g = ginibre(rng, d);
    const Mat h = (g + g.adjoint()) / 2.0;
    const auto r = reduce_to_generator(HermitianMatrix<double>(h));
    const Mat core = r.scale * r.generator.p().cast<C>().asDiagonal().toDenseMatrix() + r.shift * Mat::Identity(d, d);
    CHECK(dist(r.basis.matrix() * core * r.basis.matrix().adjoint(), h) <= 1e-10);
  }
}

TEST_CASE("reduce_to_generator: the diagonal path gives the same numerical range") {
  // U·exp(itH) = e^{it·shift}·B·(B†UB·V(scale·t))·B†, so the support functions
  // agree after a rotation by t·shift.
  testkit::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 4;
    const auto u = testkit::haar_unitary(rng, d);
    const auto v = testkit::haar_unitary(rng, d);
    const auto h = principal_log_unitary(UnitaryMatrix<double>(u.matrix().adjoint() * v.matrix(), 1e-10)).generator;
    const auto r = reduce_to_generator(h);
    const Mat& basis = r.basis.matrix();
    const Mat tilde = basis.adjoint() * u.matrix() * basis;
    for (double t : {0.1, 0.4, 1.0}) {
      const Mat direct = u.matrix() * (C(0, 1) * t * h.matrix()).exp();
      const Mat phases = r.generator.phases(r.scale * t).asDiagonal();
      const Mat reduced = tilde * phases;
      for (double theta : {0.0, 0.9, 2.2, 4.0, 5.5}) {
        const double lhs = support_function<double>(direct, theta).h;
        const double rhs = support_function<double>(reduced, theta - t * r.shift).h;
        CHECK(std::abs(lhs - rhs) <= 1e-9);
      }
    }
  }
}
