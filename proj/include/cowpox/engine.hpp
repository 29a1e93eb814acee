#pragma once

// Round scheduler: random questioner/responder split, retrieval, question
// and answer resolution, storage, the Cowpox hook and the event log.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cowpox/attack.hpp"
#include "cowpox/defense.hpp"
#include "cowpox/domain.hpp"
#include "cowpox/events.hpp"
#include "cowpox/metrics.hpp"
#include "cowpox/random.hpp"
#include "cowpox/scoring.hpp"

namespace cowpox {

/// Invalid configuration; carries the offending field name.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct EngineConfig {
  std::uint32_t n_agents = 128;
  std::uint32_t rounds = 64;
  std::uint32_t album_capacity = 10;
  std::uint32_t history_capacity = 3;
  std::uint32_t kappa = 4;
  std::vector<AgentId> cowpox_ids;  // explicit placement; empty means uniformly random
  double p_path = 1.0;
  ScoreModelParams score;
  DefenseConfig defense;
  AttackConfig attack;
  std::uint64_t seed = 0;
  bool record_pairs = true;  // keep per-pair events in the log (metrics are computed either way)

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct PendingReplacement {
  std::uint32_t apply_round = 0;
  Replacement replacement;
};

struct SimStats {
  std::uint64_t detections = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t cures_generated = 0;
  std::uint64_t cure_epochs = 0;
  std::uint64_t s2_fallbacks = 0;
  std::uint64_t replace_warnings = 0;  // replacement target no longer in the album
  std::optional<std::uint32_t> first_detection_round;
  std::optional<AdaptiveOutcome> adaptive;
  std::optional<std::uint32_t> adaptive_round;
};

struct SimState {
  std::uint32_t round = 0;
  std::vector<Agent> agents;
  RandomStreams rng;
  std::map<SampleId, Sample> registry;  // every sample ever created
  SampleIdAllocator ids;
  std::vector<AgentId> attackers;  // patient-zero agents, in seeding order
  std::vector<PendingReplacement> pending;
  SimStats stats;
  EventLog log;
  MetricsTable metrics;  // one row per log entry

  Sample make_benign(const ScoreModelParams& params);
  const Sample& register_sample(const Sample& s);
};

using Pairing = std::vector<std::pair<AgentId, AgentId>>;

/// Uniform random equal split into questioners and responders, matched by a
/// uniform random bijection. Throws ConfigError for odd or too-small N.
Pairing split_and_pair(std::size_t n_agents, RandomStream& rng);

Question compose_question(const Sample& retrieved);

Answer respond(const Sample& incoming, const Question& q, double p_path, RandomStream& rng);

/// Agents, albums, Cowpox placement and patient zero; writes the round-0 log entry.
SimState initialize(const EngineConfig& config);

/// Executes one chat round and appends its RoundLog.
void step(SimState& state, const EngineConfig& config);

struct RunResult {
  MetricsTable metrics;
  EventLog log;
  SimStats stats;
};

RunResult run(const EngineConfig& config);

}  // namespace cowpox
