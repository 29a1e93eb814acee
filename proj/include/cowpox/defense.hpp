#pragma once

// Cowpox defence: output-analysis detector, cure generation, and the
// per-round hook a Cowpox agent runs after answering as responder.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "cowpox/domain.hpp"
#include "cowpox/random.hpp"
#include "cowpox/scoring.hpp"

namespace cowpox {

enum class DetectorMode : std::uint8_t { OneTurn, ThreeTurn };

/// Measured operating point of the output-analysis module. ThreeTurn is its
/// own operating point, not three independent OneTurn draws.
struct DetectorParams {
  DetectorMode mode = DetectorMode::ThreeTurn;
  double fpr = 0.079;
  double fnr = 0.030;

  static DetectorParams for_mode(DetectorMode mode);
  void validate() const;
};

/// Flags a malicious answer with probability 1 - fnr and a benign one with probability fpr.
bool inspect(const Answer& answer, const DetectorParams& det, RandomStream& rng);

enum class CureStrategyKind : std::uint8_t { S1, S2 };

struct CureStrategy {
  CureStrategyKind kind = CureStrategyKind::S1;
  double s2_epoch_step = 0.05;
  std::uint32_t s2_max_epochs = 100000;

  void validate() const;
};

struct CureResult {
  Sample cure;
  std::uint32_t epochs = 0;
};

class NoBenignBank : public std::runtime_error {
 public:
  NoBenignBank() : std::runtime_error("no benign bank") {}
};

/// Strategy 1: lift the virus itself above its own malicious score. The cure
/// keeps the benign score of the sample the virus was crafted from.
CureResult generate_cure_s1(SampleId id, const Sample& virus, double cure_margin);

/// Strategy 2: start from the highest-scoring banked benign sample and raise
/// its malicious-context score one epoch at a time until it strictly exceeds
/// the virus, then add the cure margin. Throws NoBenignBank on an empty bank.
CureResult generate_cure_s2(SampleId id, std::span<const Sample> bank, const Sample& virus,
                            const CureStrategy& strategy, double cure_margin);

struct DefenseConfig {
  DetectorParams detector;
  CureStrategy strategy;
  std::size_t benign_bank_capacity = 64;
  std::uint32_t cure_delay_rounds = 0;

  void validate() const;
};

/// A pending album substitution decided by the hook.
struct Replacement {
  AgentId agent = 0;
  SampleId old_sample;
  Sample new_sample;
};

struct HookOutcome {
  bool flagged = false;
  bool cure_generated = false;      // flagged exchange carried a virus
  bool false_positive = false;      // flagged exchange carried no virus
  std::uint32_t epochs = 0;         // optimisation cost, logged only
  bool fell_back_to_s1 = false;     // S2 requested with an empty bank
  std::optional<Replacement> replacement;
};

/// Runs after the Cowpox `agent` answered `answer` to a question carrying
/// `incoming`. Banks benign samples, inspects the answer, and on a flag
/// decides the substitution for the incoming sample: a cure for a virus, a
/// harmless benign twin for a benign sample, nothing for a cure. The caller
/// applies the replacement (immediately or after a configured delay).
HookOutcome cowpox_hook(Agent& agent, const Sample& incoming, const Answer& answer,
                        const DefenseConfig& config, const ScoreModelParams& score_params,
                        SampleIdAllocator& ids, RandomStream& detector_rng);

}  // namespace cowpox
