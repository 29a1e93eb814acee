#include "cowpox/metrics.hpp"

#include <algorithm>

namespace cowpox {

const char* to_string(Compartment c) {
  switch (c) {
    case Compartment::Sensitive: return "s";
    case Compartment::Infected: return "i";
    case Compartment::Cured: return "c";
  }
  return "?";
}

SampleClass classify_sample(const Sample& s) {
  if (s.is_virus()) return SampleClass::Virus;
  if (s.is_cure()) return SampleClass::Cure;
  return SampleClass::Benign;
}

namespace {

bool outranked_by_cure(const Sample& virus, const Album& album) {
  const auto strain = virus.strain();
  return std::any_of(album.items().begin(), album.items().end(), [&](const Sample& c) {
    return c.is_cure() && c.strain() == strain && c.malicious_score > virus.malicious_score;
  });
}

}  // namespace

Compartment classify(const Agent& agent) {
  const auto& items = agent.album.items();
  bool all_viruses_covered = true;
  for (const auto& s : items) {
    if (!s.is_virus()) continue;
    if (outranked_by_cure(s, agent.album)) continue;
    all_viruses_covered = false;
    if (agent.history.mentions(*s.strain())) return Compartment::Infected;
  }
  if (all_viruses_covered && agent.album.holds_cure()) return Compartment::Cured;
  return Compartment::Sensitive;
}

AgentSnapshot snapshot(const Agent& agent) {
  return AgentSnapshot{classify(agent), agent.album.holds_virus(), agent.album.holds_cure(),
                       agent.once_infected};
}

double current_rate(std::span<const PairEvent> round_events, std::size_t n_agents) {
  if (n_agents == 0) return 0.0;
  std::size_t count = 0;
  for (const auto& e : round_events) {
    if (e.question.is_malicious() && e.retrieved_class == SampleClass::Virus) ++count;
    if (e.answer.is_malicious()) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n_agents);
}

namespace {

struct CarrierCounts {
  std::uint32_t carriers = 0;
  std::uint32_t retrievers = 0;
  std::uint32_t symptomatic = 0;
};

CarrierCounts count_carriers(std::span<const PairEvent> round_events) {
  CarrierCounts c;
  for (const auto& e : round_events) {
    if (!e.q_carrier) continue;
    ++c.carriers;
    if (e.retrieved_class == SampleClass::Virus) ++c.retrievers;
    if (e.question.is_malicious()) ++c.symptomatic;
  }
  return c;
}

double ratio_or_zero(std::uint32_t num, std::uint32_t den) {
  if (den == 0) return 0.0;
  return std::clamp(static_cast<double>(num) / static_cast<double>(den), 0.0, 1.0);
}

}  // namespace

double beta_estimate(std::span<const PairEvent> round_events) {
  const auto c = count_carriers(round_events);
  return ratio_or_zero(c.retrievers, c.carriers);
}

double alpha_q_estimate(std::span<const PairEvent> round_events) {
  const auto c = count_carriers(round_events);
  return ratio_or_zero(c.symptomatic, c.carriers);
}

double cumulative_rate(std::span<const Agent> agents) {
  if (agents.empty()) return 0.0;
  const auto n = std::count_if(agents.begin(), agents.end(), [](const Agent& a) { return a.once_infected; });
  return static_cast<double>(n) / static_cast<double>(agents.size());
}

std::uint32_t recovered_count(std::span<const Agent> agents) {
  return static_cast<std::uint32_t>(std::count_if(agents.begin(), agents.end(), [](const Agent& a) {
    return a.once_infected && classify(a) != Compartment::Infected;
  }));
}

MetricsRow metrics_from_round(const RoundLog& round) {
  MetricsRow row;
  row.round = round.round;
  const std::size_t n = round.agents.size();
  row.current_rate = current_rate(round.pairs, n);
  const auto c = count_carriers(round.pairs);
  row.questioner_carriers = c.carriers;
  row.virus_retrievers = c.retrievers;
  row.symptomatic_questioners = c.symptomatic;
  row.beta_t = ratio_or_zero(c.retrievers, c.carriers);
  row.alpha_q = ratio_or_zero(c.symptomatic, c.carriers);
  std::uint32_t once = 0;
  for (const auto& a : round.agents) {
    if (a.once_infected) ++once;
    if (a.once_infected && a.state != Compartment::Infected) ++row.recovered;
    if (a.virus_carrier) ++row.carriers_virus;
    if (a.cure_carrier) ++row.carriers_cure;
  }
  row.cumulative_rate = n == 0 ? 0.0 : static_cast<double>(once) / static_cast<double>(n);
  row.detections = round.detections;
  return row;
}

MetricsTable metrics_from_log(const EventLog& log) {
  MetricsTable table;
  table.reserve(log.size());
  for (const auto& r : log) table.push_back(metrics_from_round(r));
  return table;
}

}  // namespace cowpox
