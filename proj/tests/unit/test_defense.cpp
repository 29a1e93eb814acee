#include <gtest/gtest.h>

#include "cowpox/defense.hpp"
#include "cowpox/engine.hpp"
#include "helpers.hpp"

namespace cowpox {
namespace {

using test::benign;
using test::cure;
using test::virus;

double flag_rate(const Answer& a, const DetectorParams& d, int n, std::uint64_t seed) {
  RandomStream rng(seed);
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += inspect(a, d, rng);
  return hits / double(n);
}

TEST(Detector, ThreeTurnCatchesMaliciousAnswers) {
  const auto d = DetectorParams::for_mode(DetectorMode::ThreeTurn);
  EXPECT_NEAR(flag_rate(Answer::of_strain(0), d, 100000, 1), 0.970, 0.005);
  EXPECT_NEAR(flag_rate(Answer::benign(), d, 100000, 2), 0.079, 0.005);
}

TEST(Detector, OneTurnFalsePositiveRate) {
  const auto d = DetectorParams::for_mode(DetectorMode::OneTurn);
  EXPECT_NEAR(flag_rate(Answer::benign(), d, 100000, 3), 0.028, 0.005);
  EXPECT_NEAR(flag_rate(Answer::of_strain(0), d, 100000, 4), 0.875, 0.005);
}

TEST(Detector, PerfectDetectorFlagsEveryMaliciousAnswer) {
  DetectorParams d{DetectorMode::OneTurn, 0.0, 0.0};
  EXPECT_EQ(flag_rate(Answer::of_strain(0), d, 1000, 5), 1.0);
  EXPECT_EQ(flag_rate(Answer::benign(), d, 1000, 6), 0.0);
}

TEST(CureS1, KeepsOriginScore) {
  const auto r = generate_cure_s1(SampleId{9}, virus(1, 0, 1.05, 0.42), 0.02);
  ASSERT_TRUE(r.cure.is_cure());
  EXPECT_DOUBLE_EQ(r.cure.malicious_score, 1.07);
  EXPECT_DOUBLE_EQ(r.cure.benign_score, 0.42);
  EXPECT_EQ(std::get<Cure>(r.cure.kind).target.value, 1u);
  EXPECT_EQ(r.cure.strain(), 0u);
}

TEST(CureS1, RejectsNonVirus) {
  EXPECT_THROW(generate_cure_s1(SampleId{9}, benign(1, 0.4), 0.02), std::invalid_argument);
}

TEST(CureS2, EpochCountFromStepSize) {
  const std::vector<Sample> bank{benign(1, 0.30), benign(2, 0.90)};
  const auto r = generate_cure_s2(SampleId{9}, bank, virus(3, 0, 1.05, 0.4), CureStrategy{CureStrategyKind::S2, 0.05},
                                  0.02);
  // Independent oracle: smallest k with 0.90 + 0.05 k > 1.05.
  int k = 0;
  while (!(0.90 + 0.05 * k > 1.05 + 1e-12)) ++k;
  EXPECT_EQ(r.epochs, static_cast<std::uint32_t>(k));
  EXPECT_EQ(r.epochs, 4u);
  EXPECT_NEAR(r.cure.malicious_score, 1.10 + 0.02, 1e-12);
  EXPECT_DOUBLE_EQ(r.cure.benign_score, 0.90);
}

TEST(CureS2, BaseAboveVirusTakesOneEpoch) {
  const std::vector<Sample> bank{benign(1, 1.2)};
  const auto r = generate_cure_s2(SampleId{9}, bank, virus(3, 0, 1.05, 0.4), CureStrategy{CureStrategyKind::S2}, 0.02);
  EXPECT_EQ(r.epochs, 1u);
  EXPECT_GT(r.cure.malicious_score, 1.05);
}

TEST(CureS2, EmptyBankThrows) {
  EXPECT_THROW(generate_cure_s2(SampleId{9}, {}, virus(3, 0, 1.05, 0.4), CureStrategy{CureStrategyKind::S2}, 0.02),
               NoBenignBank);
}

TEST(CureStrategies, BothOutrankTargetAndFirstIsCheaper) {
  RandomStream rng(8);
  const CureStrategy s2{CureStrategyKind::S2, 0.05};
  for (int i = 0; i < 1000; ++i) {
    const double origin = rng.uniform();
    const double mal = 1.0 + rng.uniform(0.001, 0.5);
    const Sample v = virus(1, 0, mal, origin);
    std::vector<Sample> bank;
    for (int k = 0; k < 5; ++k) bank.push_back(benign(10 + k, rng.uniform()));
    const auto c1 = generate_cure_s1(SampleId{2}, v, 0.02);
    const auto c2 = generate_cure_s2(SampleId{3}, bank, v, s2, 0.02);
    ASSERT_GT(score(c1.cure, QueryContext::of_strain(0)), score(v, QueryContext::of_strain(0)));
    ASSERT_GT(score(c2.cure, QueryContext::of_strain(0)), score(v, QueryContext::of_strain(0)));
    ASSERT_LE(c1.epochs, c2.epochs);
  }
}

struct HookFixture {
  Agent agent{0, AgentRole::Cowpox, 5, 3};
  SampleIdAllocator ids;
  RandomStream rng{1};
  DefenseConfig config;
  ScoreModelParams score_params;

  HookFixture() {
    for (std::uint64_t k = 0; k < 100; ++k) ids.next();
  }
};

TEST(Hook, FlaggedVirusBecomesCure) {
  HookFixture f;
  f.config.detector = DetectorParams{DetectorMode::ThreeTurn, 0.0, 0.0};
  const Sample v = virus(1, 0, 1.05, 0.4);
  f.agent.album.insert(v);
  const auto out = cowpox_hook(f.agent, v, Answer::of_strain(0), f.config, f.score_params, f.ids, f.rng);
  ASSERT_TRUE(out.flagged);
  ASSERT_TRUE(out.cure_generated);
  ASSERT_TRUE(out.replacement.has_value());
  f.agent.album.replace(out.replacement->old_sample, out.replacement->new_sample);
  EXPECT_FALSE(f.agent.album.holds_virus());
  EXPECT_TRUE(f.agent.album.holds_cure());
}

TEST(Hook, MissLeavesVirus) {
  HookFixture f;
  f.config.detector = DetectorParams{DetectorMode::ThreeTurn, 0.0, 1.0};
  const Sample v = virus(1, 0, 1.05, 0.4);
  f.agent.album.insert(v);
  const auto out = cowpox_hook(f.agent, v, Answer::of_strain(0), f.config, f.score_params, f.ids, f.rng);
  EXPECT_FALSE(out.flagged);
  EXPECT_FALSE(out.replacement.has_value());
  EXPECT_TRUE(f.agent.album.holds_virus());
}

TEST(Hook, FalsePositiveSwapsForBenignTwin) {
  HookFixture f;
  f.config.detector = DetectorParams{DetectorMode::ThreeTurn, 1.0, 0.0};
  const Sample b = benign(1, 0.4);
  const auto out = cowpox_hook(f.agent, b, Answer::benign(), f.config, f.score_params, f.ids, f.rng);
  EXPECT_TRUE(out.false_positive);
  ASSERT_TRUE(out.replacement.has_value());
  EXPECT_TRUE(out.replacement->new_sample.is_benign());
  EXPECT_DOUBLE_EQ(out.replacement->new_sample.benign_score, 0.4);
  EXPECT_EQ(f.agent.benign_bank.size(), 1u);
}

TEST(Hook, NormalAgentDoesNothing) {
  HookFixture f;
  Agent normal(1, AgentRole::Normal, 5, 3);
  const Sample v = virus(1, 0, 1.05, 0.4);
  const auto out = cowpox_hook(normal, v, Answer::of_strain(0), f.config, f.score_params, f.ids, f.rng);
  EXPECT_FALSE(out.flagged);
  EXPECT_FALSE(out.replacement.has_value());
}

TEST(Hook, BankIsBounded) {
  HookFixture f;
  f.config.benign_bank_capacity = 3;
  f.config.detector = DetectorParams{DetectorMode::ThreeTurn, 0.0, 0.0};
  for (std::uint64_t k = 0; k < 10; ++k) {
    cowpox_hook(f.agent, benign(k, 0.1 * k), Answer::benign(), f.config, f.score_params, f.ids, f.rng);
  }
  ASSERT_EQ(f.agent.benign_bank.size(), 3u);
  EXPECT_EQ(f.agent.benign_bank.back().id.value, 9u);
}

TEST(Hook, S2FallsBackWithEmptyBank) {
  HookFixture f;
  f.config.strategy.kind = CureStrategyKind::S2;
  f.config.detector = DetectorParams{DetectorMode::ThreeTurn, 0.0, 0.0};
  const Sample v = virus(1, 0, 1.05, 0.4);
  const auto out = cowpox_hook(f.agent, v, Answer::of_strain(0), f.config, f.score_params, f.ids, f.rng);
  EXPECT_TRUE(out.fell_back_to_s1);
  ASSERT_TRUE(out.replacement.has_value());
  EXPECT_DOUBLE_EQ(out.replacement->new_sample.malicious_score, 1.07);
}

TEST(Hook, FalsePositivesDoNotChangeVirusFreeDynamics) {
  EngineConfig c = test::small_config(4);
  c.attack.r0_count = 0;
  c.defense.detector.fpr = 0.0;
  const auto quiet = run(c);
  c.defense.detector.fpr = 0.08;
  const auto noisy = run(c);
  ASSERT_EQ(quiet.metrics.size(), noisy.metrics.size());
  for (std::size_t i = 0; i < quiet.metrics.size(); ++i) {
    EXPECT_EQ(quiet.metrics[i].current_rate, 0.0);
    EXPECT_EQ(noisy.metrics[i].current_rate, 0.0);
    EXPECT_EQ(noisy.metrics[i].cumulative_rate, 0.0);
    EXPECT_EQ(noisy.metrics[i].carriers_virus, 0u);
  }
  EXPECT_GT(noisy.stats.false_positives, 0u);
}

}  // namespace
}  // namespace cowpox
