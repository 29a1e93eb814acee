#pragma once

// Virus crafting, patient-zero seeding and the adaptive attacker.

#include <cstdint>
#include <optional>
#include <string>

#include "cowpox/domain.hpp"
#include "cowpox/random.hpp"
#include "cowpox/scoring.hpp"

namespace cowpox {

struct SimState;

struct AdaptiveConfig {
  std::uint32_t trigger_round = 65;
  double p_feasible = 0.5;
  double margin = 0.01;
};

struct AttackConfig {
  std::uint32_t r0_count = 1;
  std::uint32_t strain_count = 1;
  std::optional<AdaptiveConfig> adaptive;
};

PayloadTag payload_for(Strain strain);

/// Lifts a benign `base` to a virus of `strain` scoring virus_margin above
/// the benign range under its own malicious context.
Sample craft_virus(SampleId id, Strain strain, const ScoreModelParams& params, const Sample& base);

/// Gives `r0_count` random non-Cowpox agents a virus plus one forged
/// malicious record, and marks them once infected. Strains are dealt
/// round-robin. Throws std::invalid_argument if not enough normal agents.
void seed_patient_zero(SimState& state, const AttackConfig& attack, const ScoreModelParams& params);

struct AdaptiveOutcome {
  bool success = false;
  Sample new_virus;
  double max_cure_score = 0.0;
  AgentId carrier = 0;
};

/// Re-optimises a virus from the best cure in circulation and plants it in
/// the first attacker agent together with a forged malicious record. The new
/// virus keeps the cure's strain and payload and scores `margin` above the
/// best cure with probability p_feasible, `margin` below it otherwise.
/// Returns nullopt (attempt deferred) when no cure is in circulation.
std::optional<AdaptiveOutcome> adaptive_attack(SimState& state, const AdaptiveConfig& config);

}  // namespace cowpox
