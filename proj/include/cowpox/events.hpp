#pragma once

#include <cstdint>
#include <vector>

#include "cowpox/domain.hpp"

namespace cowpox {

enum class Compartment : std::uint8_t { Sensitive, Infected, Cured };

const char* to_string(Compartment c);

enum class SampleClass : std::uint8_t { Benign, Virus, Cure };

SampleClass classify_sample(const Sample& s);

/// One questioner/responder exchange.
struct PairEvent {
  std::uint32_t round = 0;
  AgentId questioner = 0;
  AgentId responder = 0;
  Compartment q_state_before = Compartment::Sensitive;
  Compartment a_state_before = Compartment::Sensitive;
  bool q_carrier = false;  // questioner held a virus when it retrieved
  SampleId retrieved;
  SampleClass retrieved_class = SampleClass::Benign;
  Question question;
  Answer answer;
  Compartment a_state_after = Compartment::Sensitive;
  bool detected = false;  // Cowpox responder's detector fired on this exchange

  friend bool operator==(const PairEvent&, const PairEvent&) = default;
};

/// End-of-round state of one agent, enough to rebuild the metrics table.
struct AgentSnapshot {
  Compartment state = Compartment::Sensitive;
  bool virus_carrier = false;
  bool cure_carrier = false;
  bool once_infected = false;

  friend bool operator==(const AgentSnapshot&, const AgentSnapshot&) = default;
};

struct RoundLog {
  std::uint32_t round = 0;
  std::vector<PairEvent> pairs;
  std::vector<AgentSnapshot> agents;
  std::uint32_t detections = 0;

  friend bool operator==(const RoundLog&, const RoundLog&) = default;
};

/// Round 0 holds the post-seeding snapshot and no pairs.
using EventLog = std::vector<RoundLog>;

}  // namespace cowpox
