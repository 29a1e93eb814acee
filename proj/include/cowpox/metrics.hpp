#pragma once

// Per-round observables of the simulation.

#include <cstdint>
#include <span>
#include <vector>

#include "cowpox/domain.hpp"
#include "cowpox/events.hpp"

namespace cowpox {

/// Infected: holds a virus not outranked by a same-strain cure while the
/// history window mentions that strain. Cured: holds a cure and every held
/// virus is outranked by a same-strain cure. Sensitive otherwise, including
/// silent carriers whose history is clean.
Compartment classify(const Agent& agent);

AgentSnapshot snapshot(const Agent& agent);

struct MetricsRow {
  std::uint32_t round = 0;
  double current_rate = 0.0;
  double cumulative_rate = 0.0;
  double beta_t = 0.0;
  double alpha_q = 0.0;
  std::uint32_t recovered = 0;
  std::uint32_t carriers_virus = 0;
  std::uint32_t carriers_cure = 0;
  std::uint32_t detections = 0;
  // Raw estimator counts; beta_t = retrievers / carriers, alpha_q = symptomatic / carriers.
  std::uint32_t questioner_carriers = 0;
  std::uint32_t virus_retrievers = 0;
  std::uint32_t symptomatic_questioners = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

using MetricsTable = std::vector<MetricsRow>;

/// Symptomatic questioners (malicious question carrying a virus) plus
/// malicious answers, over N.
double current_rate(std::span<const PairEvent> round_events, std::size_t n_agents);

/// Questioners that retrieved a virus over questioners holding one; 0 on an empty denominator.
double beta_estimate(std::span<const PairEvent> round_events);

/// Questioners emitting a malicious question over questioners holding a virus; 0 on an empty denominator.
double alpha_q_estimate(std::span<const PairEvent> round_events);

double cumulative_rate(std::span<const Agent> agents);

/// Once-infected agents not currently Infected.
std::uint32_t recovered_count(std::span<const Agent> agents);

/// Builds the row for one round purely from its log entry.
MetricsRow metrics_from_round(const RoundLog& round);

MetricsTable metrics_from_log(const EventLog& log);

}  // namespace cowpox
