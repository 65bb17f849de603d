#include "helpers.hpp"
#include "numrange/fixtures.hpp"
#include "numrange/steering.hpp"

#include <doctest.h>

using namespace numrange;
using namespace numrange::test;

namespace {

// rows of `a` matched to rows of `b` as a set; returns the worst matched entry gap
double row_set_distance(const MatrixR<double>& a, const MatrixR<double>& b) {
  MatrixR<double> cost(a.rows(), b.rows());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index q = 0; q < b.rows(); ++q) cost(r, q) = (a.row(r) - b.row(q)).cwiseAbs().maxCoeff();
  }
  const auto m = min_cost_assignment<double>(cost);
  double worst = 0;
  for (Index r = 0; r < a.rows(); ++r) worst = std::max(worst, cost(r, m[std::size_t(r)]));
  return worst;
}

}  // namespace

TEST_CASE("speed_profile: diagonal unitary gives a permutation") {
  const auto sp = speed_profile(unitary_eig(UnitaryMatrix<double>(diag({-1, 1, C(0, 1)}))));
  // ccw order is 1, i, -1 → rows e_2, e_3, e_1
  MatrixR<double> perm = MatrixR<double>::Zero(3, 3);
  perm(0, 1) = perm(1, 2) = perm(2, 0) = 1;
  CHECK((sp.s - perm).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("speed_profile of the reference matrix") {
  const auto sp = speed_profile(unitary_eig(fixtures::reference_unitary()));
  CHECK(row_set_distance(sp.s, fixtures::reference_speed_profile()) <= 1e-4);
  // computed order is the published order
  CHECK((sp.s - fixtures::reference_speed_profile()).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("speed_profile is doubly stochastic") {
  testkit::Rng rng(1);
  for (Index d = 1; d <= 8; ++d) {
    const auto sp = speed_profile(unitary_eig(testkit::haar_unitary(rng, d)));
    CHECK((sp.s.rowwise().sum() - VecR::Ones(d)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((sp.s.colwise().sum().transpose() - VecR::Ones(d)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(sp.s.minCoeff() >= 0);
    CHECK(sp.s.maxCoeff() <= 1 + 1e-15);
  }
}

TEST_CASE("select_generator on the reference matrix") {
  const auto es = unitary_eig(fixtures::reference_unitary());
  const auto c = select_generator(es, speed_profile(es));
  CHECK(c.generator.p() == VecR::Unit(3, 1));
  CHECK(c.generator.direction() == Direction::clockwise);
  CHECK(c.column == 1);
  CHECK(c.gap_width > std::numbers::pi);
  CHECK(c.closing_rate > 0);
}

TEST_CASE("select_generator: two eigenvalues with a tiny separation") {
  const double eps = 0.1;
  const auto es = unitary_eig(UnitaryMatrix<double>(diag({1, std::polar(1.0, eps)})));
  const auto c = select_generator(es, speed_profile(es));
  // both columns close the gap at rate 1; the lower index wins and moves 1 clockwise
  CHECK(c.column == 0);
  CHECK(c.generator.direction() == Direction::clockwise);
  CHECK(c.closing_rate == doctest::Approx(1));
  CHECK(c.gap_width == doctest::Approx(2 * std::numbers::pi - eps));
  CHECK(c.target_gap.first == 1);
  CHECK(c.target_gap.second == 0);

  // swapping the basis order picks the other eigenvector's coordinate
  const auto es2 = unitary_eig(UnitaryMatrix<double>(diag({std::polar(1.0, eps), 1})));
  const auto c2 = select_generator(es2, speed_profile(es2));
  CHECK(c2.column == 0);
  CHECK(c2.generator.direction() == Direction::counterclockwise);
}

TEST_CASE("select_generator refuses when 0 is already in W") {
  const C w = std::polar(1.0, 2 * std::numbers::pi / 3);
  const auto es = unitary_eig(UnitaryMatrix<double>(diag({1, w, w * w})));
  CHECK_THROWS_AS(select_generator(es, speed_profile(es)), NothingToSteer);
  const auto edge = unitary_eig(UnitaryMatrix<double>(diag({1, -1})));
  CHECK_THROWS_AS(select_generator(edge, speed_profile(edge)), NothingToSteer);
  CHECK_THROWS_WITH(plan(UnitaryMatrix<double>(diag({1, w, w * w}))), "nothing to steer");
}

TEST_CASE("min_time_search: quarter turn") {
  const auto u = UnitaryMatrix<double>(diag({1, C(0, 1)}));
  const auto g = PerturbationGenerator<double>::one_hot(2, 1);
  const auto r = min_time_search(u, g, 2 * std::numbers::pi, 1e-3);
  REQUIRE(r.t_star);
  CHECK(*r.t_star >= std::numbers::pi / 2 - 1e-9);
  CHECK(*r.t_star <= std::numbers::pi / 2 + 1e-3);
  CHECK(r.verdict == SteeringVerdict::reached_boundary);

  const auto p = plan(u);
  REQUIRE(p.t_star);
  CHECK(std::abs(*p.t_star - std::numbers::pi / 2) <= 1e-3);
  CHECK(*p.perturbation_norm == doctest::Approx(2 * std::sin(*p.t_star / 2)));
}

TEST_CASE("min_time_search: rigid rotation never reaches 0") {
  const auto u = fixtures::reference_unitary();
  const auto r = min_time_search(u, PerturbationGenerator<double>::uniform(3), 2 * std::numbers::pi, 1e-3);
  CHECK_FALSE(r.t_star);
  CHECK(r.verdict == SteeringVerdict::not_reached_within_horizon);
  CHECK_THROWS_AS(min_time_search(u, PerturbationGenerator<double>::uniform(3), 0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(min_time_search(u, PerturbationGenerator<double>::uniform(3), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("plan on the reference matrix") {
  const auto u = fixtures::reference_unitary();
  const auto p = plan(u);
  CHECK(p.generator().p() == VecR::Unit(3, 1));
  CHECK(p.direction() == Direction::clockwise);
  REQUIRE(p.t_star);
  CHECK(*p.t_star >= 1.40);
  CHECK(*p.t_star <= 1.50);
  CHECK(p.verdict != SteeringVerdict::not_reached_within_horizon);
  CHECK(std::abs(*p.perturbation_norm - 2 * std::sin(*p.t_star / 2)) <= 1e-12);
  CHECK(*p.perturbation_norm == doctest::Approx(2 * std::sin(0.725)).epsilon(0.01));
  // deterministic
  const auto again = plan(u);
  CHECK(*again.t_star == *p.t_star);

  const auto short_horizon = plan(u, 0.1);
  CHECK(short_horizon.verdict == SteeringVerdict::not_reached_within_horizon);
  CHECK_FALSE(short_horizon.perturbation_norm);
}

TEST_CASE("first-touch consistency") {
  testkit::Rng rng(3);
  const double tol_t = 1e-3;
  int planned = 0;
  // d = 2 is left out: W is a chord there and 0 only touches it for an instant
  std::vector<UnitaryMatrix<double>> cases{fixtures::reference_unitary()};
  for (int trial = 0; trial < 80; ++trial) cases.push_back(testkit::haar_unitary(rng, 3 + trial % 4));
  for (const auto& u : cases) {
    if (contains_zero_unitary(unitary_eig(u)) != UnitaryMembership::outside) continue;
    const auto p = plan(u, 2 * std::numbers::pi, tol_t);
    if (!p.t_star) continue;
    ++planned;
    const auto at = contains_zero_general<double>(perturbed_unitary(u, p.generator(), *p.t_star).matrix(), 2048);
    CHECK(at != Membership::outside);
    if (*p.t_star > 10 * tol_t) {
      const auto before = contains_zero_general<double>(perturbed_unitary(u, p.generator(), *p.t_star - 10 * tol_t).matrix(), 2048);
      CHECK(before == Membership::outside);
    }
  }
  CHECK(planned > 5);
}

TEST_CASE("targeted gap closes monotonically until first touch") {
  testkit::Rng rng(4);
  std::vector<UnitaryMatrix<double>> cases{fixtures::reference_unitary()};
  for (int trial = 0; trial < 30; ++trial) cases.push_back(testkit::haar_unitary(rng, 2 + trial % 5));
  for (const auto& u : cases) {
    if (contains_zero_unitary(unitary_eig(u)) != UnitaryMembership::outside) continue;
    const auto p = plan(u);
    if (!p.t_star) continue;
    const auto [from, to] = p.choice.target_gap;
    const auto rec = track_trajectory(u, p.generator(), *p.t_star, 0.05);
    double previous = p.choice.gap_width;
    for (const auto& s : rec.steps) {
      const double gap = ccw_arc(s.values(from), s.values(to));
      CHECK(gap <= previous + 1e-9);
      previous = gap;
    }
  }
}

TEST_CASE("perturbation norm matches ||U - UV(t)||") {
  testkit::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 2 + trial % 6;
    const auto u = testkit::haar_unitary(rng, d);
    const PerturbationGenerator<double> g(testkit::random_probability(rng, d));
    const double t = std::uniform_real_distribution<double>(0, 20)(rng);
    const double direct = schatten_inf(Mat(u.matrix() - perturbed_unitary(u, g, t).matrix()));
    CHECK(std::abs(direct - perturbation_norm<double>(g.p(), t)) <= 1e-10);
  }
}

TEST_CASE("V(t) leaves diagonal states unchanged") {
  testkit::Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 2 + trial % 6;
    const PerturbationGenerator<double> g(testkit::random_probability(rng, d));
    const Mat v = g.phases(3.7).asDiagonal();
    const Mat rho = testkit::random_probability(rng, d).cast<C>().asDiagonal();
    CHECK(dist(v * rho * v.adjoint(), rho) <= 1e-15);
    // V is exactly diagonal
    Mat off = v;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0);
  }
}
