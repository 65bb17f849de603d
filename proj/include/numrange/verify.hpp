#pragma once

#include "numrange/testkit.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace numrange::verify {

/// Outcome of one property over a batch of random trials.
struct Check {
  std::string name;
  std::string claim;
  double tolerance = 0;
  int trials = 0;
  int failures = 0;
  double worst = 0;  // largest observed residual (or the offending ratio)
  std::vector<int> failed{};  // trial indices

  void record(double residual, bool ok) {
    if (!ok) {
      ++failures;
      failed.push_back(trials);
    }
    ++trials;
    worst = std::max(worst, residual);
  }
  bool passed() const noexcept { return failures == 0; }
};

struct Options {
  std::uint64_t seed = 0;
  int trials = 100;
  std::vector<Index> dims{2, 3, 4, 5, 6};
};

/// Independent, reproducible stream for trial `index` of a batch.
inline testkit::Rng trial_rng(std::uint64_t seed, std::uint64_t salt, int index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt), std::uint32_t(index)};
  return testkit::Rng(seq);
}

inline Index trial_dim(const Options& o, int i) { return o.dims[std::size_t(i) % o.dims.size()]; }

/// Budget Σ_j |dλ_j/dt| = 1 and counterclockwise monotonicity of every
/// unwrapped argument, at every accepted step over [0, t_end].
inline std::pair<Check, Check> budget_and_monotonicity(const Options& o, double t_end = 2.0) {
  Check budget{"f.budget", "|sum_j |dlambda_j/dt| - 1| at every tracked step", 1e-8};
  Check mono{"c.monotone", "per-step decrease of unwrapped eigenvalue arguments", 1e-9};
  for (int i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, 1, i);
    const Index d = trial_dim(o, i);
    const auto u = testkit::haar_unitary<double>(rng, d);
    const PerturbationGenerator<double> g(testkit::random_probability<double>(rng, d));
    const auto rec = track_trajectory(u, g, t_end, 0.05);
    double worst_budget = 0, worst_drop = 0;
    for (std::size_t s = 0; s < rec.size(); ++s) {
      worst_budget = std::max(worst_budget, std::abs(rec.steps[s].velocities.cwiseAbs().sum() - 1.0));
      if (s > 0) {
        const VectorR<double> delta = rec.steps[s].unwrapped - rec.steps[s - 1].unwrapped;
        worst_drop = std::max(worst_drop, -delta.minCoeff());
      }
    }
    budget.record(worst_budget, worst_budget <= budget.tolerance);
    mono.record(worst_drop, worst_drop <= mono.tolerance);
  }
  return {budget, mono};
}

/// Stationary witness residual at the probe times and the multiplicity lower
/// bound k − l, on degenerate fixtures with p supported on l < k coordinates.
inline std::pair<Check, Check> stationarity(const Options& o) {
  Check witness{"a.stationary", "||UV(t)w - lambda w|| for the certified witness, t in {0.1, 1, 10}", 1e-9};
  Check count{"b.multiplicity", "shortfall of #eigenvalues of UV(t) at lambda below k - l", 0};
  for (int i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, 2, i);
    const Index d = std::max<Index>(2, trial_dim(o, i));
    const Index k = std::uniform_int_distribution<Index>(2, d)(rng);
    const Index l = std::uniform_int_distribution<Index>(1, k - 1)(rng);
    const auto fx = testkit::degenerate_fixture<double>(d, k, l, rng());
    const auto es = unitary_eig(fx.u);
    const auto iso = eigenspace_isometry(es, es.cluster_of(fx.lambda));
    const auto cert = stationarity_certificate(fx.u, iso, fx.generator);
    witness.record(cert.stationary ? cert.residual : 1.0, cert.stationary && cert.residual <= witness.tolerance);
    Index shortfall = 0;
    for (double t : kProbeTimes) {
      const Index n = eigenvalue_count_near(perturbed_unitary(fx.u, fx.generator, t), fx.lambda);
      shortfall = std::max(shortfall, (k - l) - n);
    }
    count.record(double(shortfall), shortfall <= 0);
  }
  return {witness, count};
}

struct RemainderRatio {
  std::optional<double> ratio;
  double t = 0;          // the pair is (t, t/2)
  double error = 0;      // error at t
  double error_half = 0;
};

inline constexpr double kRemainderFloor = 1e-10;

/// error(t) = |λ_j(t) − λ_j e^{±i s_j t}| on the halving ladder t₀·2^{−n}. The
/// ratio error(t)/error(t/2) is taken at the deepest rung whose half-step
/// error still exceeds 1e-10; a quadratic remainder gives ≈ 4.
inline std::vector<RemainderRatio> remainder_ratios(const UnitaryMatrix<double>& u,
                                                    const PerturbationGenerator<double>& g, double t0 = 0.05,
                                                    int levels = 24) {
  TrackOptions<double> opt;
  std::vector<double> ladder;
  for (int n = 0; n <= levels; ++n) ladder.push_back(std::ldexp(t0, -n));
  opt.checkpoints = ladder;
  const auto rec = track_trajectory(u, g, t0, opt);
  const auto& s0 = rec.steps.front();
  const Index d = rec.dim();
  std::vector<RemainderRatio> out(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    std::vector<double> err;
    for (double t : ladder) {
      const auto predicted = first_order_eigenvalue(s0.values(j), s0.speeds(j), t, g.direction());
      err.push_back(std::abs(rec.at(t).values(j) - predicted));
    }
    for (int n = levels - 1; n >= 0; --n) {
      if (err[std::size_t(n + 1)] >= kRemainderFloor) {
        out[std::size_t(j)] = {err[std::size_t(n)] / err[std::size_t(n + 1)], ladder[std::size_t(n)],
                               err[std::size_t(n)], err[std::size_t(n + 1)]};
        break;
      }
    }
  }
  return out;
}

inline bool ratio_ok(const RemainderRatio& r) { return r.ratio && *r.ratio >= 3.5 && *r.ratio <= 4.5; }

inline double ratio_residual(const RemainderRatio& r) { return r.ratio ? std::abs(*r.ratio - 4.0) : 4.0; }

/// First-order accuracy for simple eigenvalues: every path of a Haar
/// instance with random p.
inline Check first_order_simple(const Options& o) {
  Check c{"d.first_order", "|error(t)/error(t/2) - 4| for simple eigenvalues (ratio must be in [3.5, 4.5])", 0.5};
  for (int i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, 3, i);
    const Index d = trial_dim(o, i);
    const auto u = testkit::haar_unitary<double>(rng, d);
    const PerturbationGenerator<double> g(testkit::random_probability<double>(rng, d));
    double worst = 0;
    bool ok = true;
    for (const auto& r : remainder_ratios(u, g)) {
      worst = std::max(worst, ratio_residual(r));
      ok = ok && ratio_ok(r);
    }
    c.record(worst, ok);
  }
  return c;
}

/// First-order accuracy of a split degenerate eigenvalue with speeds λ_j(Q).
inline Check first_order_degenerate(const Options& o) {
  Check c{"e.split", "|error(t)/error(t/2) - 4| for the split paths of a degenerate eigenvalue", 0.5};
  for (int i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, 4, i);
    // k = d would make U a multiple of the identity, where the first-order
    // formula is exact and there is no remainder to measure
    const Index d = std::max<Index>(3, trial_dim(o, i));
    const Index k = std::uniform_int_distribution<Index>(2, d - 1)(rng);
    const auto deg = testkit::degenerate_unitary<double>(rng, d, k);
    const PerturbationGenerator<double> g(testkit::random_probability<double>(rng, d));
    const auto es = unitary_eig(deg.u);
    const auto& cl = es.clusters[std::size_t(es.cluster_of(deg.lambda))];
    const auto ratios = remainder_ratios(deg.u, g);
    double worst = 0;
    bool ok = true;
    for (Index j = cl.first; j < cl.first + cl.size; ++j) {
      worst = std::max(worst, ratio_residual(ratios[std::size_t(j)]));
      ok = ok && ratio_ok(ratios[std::size_t(j)]);
    }
    c.record(worst, ok);
  }
  return c;
}

/// Eigenvector velocity formula against centered differences of the tracked
/// paths (h = 1e-4).
inline Check velocity_formula(const Options& o, double h = 1e-4) {
  Check c{"f.derivative", "max_j |finite difference - exact velocity|, h = 1e-4", 1e-6};
  for (int i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, 5, i);
    const Index d = trial_dim(o, i);
    const auto u = testkit::haar_unitary<double>(rng, d);
    const PerturbationGenerator<double> g(testkit::random_probability<double>(rng, d));
    const double t = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    const auto fd = testkit::fd_velocity(u, g, t, h);
    const double err = (fd.finite_difference - fd.exact).cwiseAbs().maxCoeff();
    c.record(err, err <= c.tolerance);
  }
  return c;
}

/// All postulate checks, in order (a)–(f).
inline std::vector<Check> postulate_suite(const Options& o) {
  std::vector<Check> out;
  auto [a, b] = stationarity(o);
  auto [budget, mono] = budget_and_monotonicity(o);
  out.push_back(a);
  out.push_back(b);
  out.push_back(mono);
  out.push_back(first_order_simple(o));
  out.push_back(first_order_degenerate(o));
  out.push_back(velocity_formula(o));
  out.push_back(budget);
  return out;
}

}  // namespace numrange::verify
