#include <gtest/gtest.h>

#include <cmath>

#include "cowpox/engine.hpp"
#include "cowpox/meanfield.hpp"

namespace cowpox {
namespace {

TEST(SirRhs, Values) {
  const SirParams p{0.8, 0.2, 0.01};
  EXPECT_EQ(sir_rhs(0.0, p), 0.0);
  EXPECT_DOUBLE_EQ(sir_rhs(1.0, p), -0.2);
  EXPECT_NEAR(sir_rhs(0.5, p), 0.0, 1e-15);
}

TEST(SirEquilibrium, ClosedForm) {
  EXPECT_DOUBLE_EQ(sir_equilibrium({0.8, 0.2, 0.01}), 0.5);
  EXPECT_EQ(sir_equilibrium({0.3, 0.2, 0.01}), 0.0);
  EXPECT_EQ(sir_equilibrium({0.4, 0.2, 0.01}), 0.0);
}

TEST(SirIntegration, ConvergesToEquilibrium) {
  const auto up = integrate_sir({0.8, 0.2, 0.01}, {0.1, 1000.0, 100});
  EXPECT_NEAR(up.final_r(), 0.5, 1e-4);
  const auto down = integrate_sir({0.3, 0.2, 0.5}, {0.1, 1000.0, 100});
  EXPECT_LT(down.final_r(), 1e-6);
}

// The baseline model is logistic: r(t) = K / (1 + (K/r0 - 1) exp(-a t)) with
// a = beta/2 - gamma and K = 1 - 2 gamma / beta.
TEST(SirIntegration, MatchesLogisticSolution) {
  const SirParams p{0.8, 0.2, 0.01};
  const double a = p.beta / 2 - p.gamma;
  const double k = 1 - 2 * p.gamma / p.beta;
  const auto tr = integrate_sir(p, {0.1, 60.0, 1});
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double exact = k / (1 + (k / p.r0 - 1) * std::exp(-a * tr.times[i]));
    ASSERT_NEAR(tr.r[i], exact, 1e-8) << "t=" << tr.times[i];
  }
}

TEST(SirIntegration, StepHalvingConverges) {
  const SirParams p{0.8, 0.2, 0.01};
  const double t_end = 30.0;
  const double r1 = integrate_sir(p, {0.1, t_end, 1000}).final_r();
  const double r2 = integrate_sir(p, {0.05, t_end, 1000}).final_r();
  const double r4 = integrate_sir(p, {0.025, t_end, 1000}).final_r();
  EXPECT_LT(std::abs(r1 - r2), 1e-8);
  // Fourth order: successive differences shrink about 16-fold.
  const double ratio = std::abs(r1 - r2) / std::abs(r2 - r4);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Integration, RejectsBadStep) {
  EXPECT_THROW(integrate_sir({0.8, 0.2, 0.01}, {0.0, 10.0, 1}), std::invalid_argument);
  EXPECT_THROW(integrate_sir({1.8, 0.2, 0.01}, {0.1, 10.0, 1}), std::invalid_argument);
}

TEST(Integration, NonFiniteStateThrows) {
  const Rhs<2> blowup = [](const std::array<double, 2>&) {
    return std::array<double, 2>{std::numeric_limits<double>::quiet_NaN(), 0.0};
  };
  EXPECT_THROW(integrate_rk4(blowup, {0.1, 0.1}, {0.1, 1.0, 1}), std::runtime_error);
}

TEST(DiscreteStep, DiseaseFreeInvariant) {
  const CowpoxParams p;
  for (double rc : {0.0, 0.3, 1.0}) EXPECT_EQ(cowpox_discrete_step(0.0, rc, p).r, 0.0);
}

TEST(DiscreteStep, NoCuresMeansPureGrowth) {
  const CowpoxParams p;
  const auto s = cowpox_discrete_step(0.2, 0.0, p);
  EXPECT_EQ(s.rc, 0.0);
  EXPECT_DOUBLE_EQ(s.r, 0.2 + 0.5 * p.beta * 0.2 * 0.8);
}

TEST(DiscreteStep, HandComputedExample) {
  // s = 0.85
  // r'  = 0.1  + (0.8*0.1*0.85 + 0.3*0.1*0.05 - 0.6*0.05*0.1)/2 = 0.1  + 0.0665/2
  // rc' = 0.05 + (0.6*0.05*0.85 + 0.6*0.05*0.1 - 0.3*0.1*0.05)/2 = 0.05 + 0.027/2
  const CowpoxParams p{0.8, 0.6, 0.6, 0.3, 0.1, 0.05};
  const auto s = cowpox_discrete_step(0.1, 0.05, p);
  EXPECT_NEAR(s.r, 0.13325, 1e-15);
  EXPECT_NEAR(s.rc, 0.0635, 1e-15);
  EXPECT_FALSE(s.clamped);
}

TEST(CowpoxRhs, StationaryAtFullCure) {
  const CowpoxParams p;
  const auto d = cowpox_rhs(0.0, 1.0, p);
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[1], 0.0);
}

TEST(CowpoxRhs, NoSpontaneousCure) {
  const CowpoxParams p;
  for (double r : {0.1, 0.5, 0.9}) EXPECT_EQ(cowpox_rhs(r, 0.0, p)[1], 0.0);
}

TEST(CowpoxRhs, MatchesFiniteDifferenceSlope) {
  CowpoxParams p{0.8, 0.6, 0.6, 0.3, 0.5, 0.3};
  const double h = 1e-6;
  const auto tr = integrate_cowpox(p, {h, h, 1});
  const auto d = cowpox_rhs(0.5, 0.3, p);
  EXPECT_NEAR((tr.r[1] - tr.r[0]) / h, d[0], 1e-6);
  EXPECT_NEAR(((*tr.rc)[1] - (*tr.rc)[0]) / h, d[1], 1e-6);
}

TEST(CowpoxIntegration, StaysOnSimplex) {
  const auto tr = integrate_cowpox({0.9, 0.6, 0.6, 0.3, 0.5, 0.4}, {0.1, 200.0, 1});
  for (std::size_t i = 0; i < tr.r.size(); ++i) {
    ASSERT_GE(tr.r[i], 0.0);
    ASSERT_GE((*tr.rc)[i], 0.0);
    ASSERT_LE(tr.r[i] + (*tr.rc)[i], 1.0 + 1e-12);
  }
}

TEST(IterateDiscrete, FollowsStep) {
  const CowpoxParams p{0.8, 0.6, 0.6, 0.3, 0.1, 0.05};
  const auto tr = iterate_discrete(p, 5);
  ASSERT_EQ(tr.r.size(), 6u);
  double r = 0.1, rc = 0.05;
  for (int t = 1; t <= 5; ++t) {
    const auto s = cowpox_discrete_step(r, rc, p);
    r = s.r;
    rc = s.rc;
    EXPECT_DOUBLE_EQ(tr.r[t], r);
    EXPECT_DOUBLE_EQ((*tr.rc)[t], rc);
  }
}

TEST(Stationary, CuringRegimeGoesExtinct) {
  const auto rep = stationary_analysis({0.8, 0.6, 0.6, 0.3, 0.1, 0.05});
  EXPECT_TRUE(rep.condition_satisfied);
  EXPECT_EQ(rep.classification, StationaryClass::Extinction);
  EXPECT_LT(rep.limit_r, 1e-3);
}

TEST(Stationary, EqualRatesAreBoundary) {
  const auto rep = stationary_analysis({0.8, 0.5, 0.5, 0.5, 0.1, 0.05}, 1e3);
  EXPECT_FALSE(rep.condition_satisfied);
  EXPECT_EQ(rep.classification, StationaryClass::Boundary);
}

TEST(Stationary, ReinfectionDominatedIsEndemic) {
  const auto rep = stationary_analysis({0.9, 0.2, 0.2, 0.6, 0.1, 0.05});
  EXPECT_EQ(rep.classification, StationaryClass::Endemic);
  EXPECT_GT(rep.limit_r, 1e-3);
  EXPECT_LT(rep.limit_spread, 1e-3);
}

TEST(Stationary, FixedPointsVanish) {
  const CowpoxParams p;
  const auto rep = stationary_analysis(p, 10.0);
  ASSERT_GE(rep.fixed_points.size(), 3u);
  for (const auto& fp : rep.fixed_points) {
    const auto d = cowpox_rhs(fp.m, fp.n, p);
    EXPECT_LE(std::abs(d[0]), 1e-12);
    EXPECT_LE(std::abs(d[1]), 1e-12);
  }
}

// Synthetic pair events with known transition probabilities.
std::vector<PairEvent> synthetic_events(double beta, double delta, double epsilon, double eta, int per_kind,
                                        std::uint64_t seed, bool include_ci = true) {
  using C = Compartment;
  RandomStream rng(seed);
  std::vector<PairEvent> out;
  auto add = [&](C q, C a, double p, C success) {
    for (int i = 0; i < per_kind; ++i) {
      PairEvent e;
      e.q_state_before = q;
      e.a_state_before = a;
      e.a_state_after = rng.bernoulli(p) ? success : a;
      out.push_back(e);
    }
  };
  add(C::Infected, C::Sensitive, beta, C::Infected);
  add(C::Cured, C::Sensitive, delta, C::Cured);
  if (include_ci) add(C::Cured, C::Infected, epsilon, C::Cured);
  add(C::Infected, C::Cured, eta, C::Infected);
  add(C::Sensitive, C::Sensitive, 0.5, C::Infected);  // uninformative pairs
  return out;
}

TEST(Estimator, RecoversKnownRates) {
  const auto events = synthetic_events(0.7, 0.5, 0.6, 0.3, 25000, 1);
  const auto est = estimate_params(events);
  EXPECT_EQ(est.beta.trials, 25000u);
  EXPECT_NEAR(*est.beta.value(), 0.7, 0.01);
  EXPECT_NEAR(*est.delta.value(), 0.5, 0.01);
  EXPECT_NEAR(*est.epsilon.value(), 0.6, 0.01);
  EXPECT_NEAR(*est.eta.value(), 0.3, 0.01);
}

TEST(Estimator, MissingPairKindLeavesEstimateAbsent) {
  const auto est = estimate_params(synthetic_events(0.7, 0.5, 0.6, 0.3, 100, 2, false));
  EXPECT_FALSE(est.epsilon.value().has_value());
  EXPECT_TRUE(est.beta.value().has_value());
  const auto p = est.to_params(0.1, 0.0);
  EXPECT_EQ(p.epsilon, 0.0);
  EXPECT_EQ(p.r0, 0.1);
}

TEST(Estimator, EmptyLogThrows) { EXPECT_THROW(estimate_params(std::span<const PairEvent>{}), std::invalid_argument); }

TEST(Estimator, DefendedRunCuresFasterThanReinfects) {
  std::vector<PairEvent> all;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EngineConfig c;
    c.seed = seed;
    for (const auto& round : run(c).log) all.insert(all.end(), round.pairs.begin(), round.pairs.end());
  }
  const auto est = estimate_params(all);
  ASSERT_TRUE(est.epsilon.value() && est.eta.value());
  EXPECT_GT(*est.epsilon.value(), *est.eta.value());
}

}  // namespace
}  // namespace cowpox
