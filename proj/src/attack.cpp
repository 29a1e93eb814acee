#include "cowpox/attack.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cowpox/engine.hpp"

namespace cowpox {

PayloadTag payload_for(Strain strain) { return PayloadTag{"T" + std::to_string(strain)}; }

Sample craft_virus(SampleId id, Strain strain, const ScoreModelParams& params, const Sample& base) {
  if (!base.is_benign()) throw std::invalid_argument("craft_virus: base sample must be benign");
  return Sample{id, Virus{strain, payload_for(strain), 0}, base.benign_score,
                params.benign_high + params.virus_margin, base.benign_score};
}

namespace {

ChatRecord forged_record(std::uint32_t round, AgentId self, Strain strain, SampleId sample) {
  return ChatRecord{round, self, Direction::AsResponder, Question::of_strain(strain), sample,
                    Answer::of_strain(strain)};
}

}  // namespace

void seed_patient_zero(SimState& state, const AttackConfig& attack, const ScoreModelParams& params) {
  if (attack.r0_count == 0) return;
  std::vector<AgentId> normal;
  for (const auto& a : state.agents) {
    if (!a.is_cowpox()) normal.push_back(a.id);
  }
  if (attack.r0_count > normal.size()) {
    throw std::invalid_argument("seed_patient_zero: r0_count exceeds N - kappa");
  }
  state.rng.attack.shuffle(normal);
  for (std::uint32_t k = 0; k < attack.r0_count; ++k) {
    Agent& agent = state.agents[normal[k]];
    const Strain strain = k % attack.strain_count;
    const Sample base = craft_benign(state.ids.next(), params, state.rng.attack);
    const Sample& virus = state.register_sample(craft_virus(state.ids.next(), strain, params, base));
    agent.album.insert(virus);
    agent.history.inject(forged_record(state.round, agent.id, strain, virus.id));
    agent.once_infected = true;
    state.attackers.push_back(agent.id);
  }
}

std::optional<AdaptiveOutcome> adaptive_attack(SimState& state, const AdaptiveConfig& config) {
  if (state.attackers.empty()) throw std::logic_error("adaptive_attack: no attacker agent");

  // Best cure anywhere in circulation; first found wins ties.
  const Sample* best = nullptr;
  for (const auto& agent : state.agents) {
    for (const auto& s : agent.album.items()) {
      if (s.is_cure() && (best == nullptr || s.malicious_score > best->malicious_score)) best = &s;
    }
  }
  if (best == nullptr) return std::nullopt;

  const Strain strain = *best->strain();
  std::uint32_t generation = 1;
  if (const auto* target = std::get_if<Cure>(&best->kind)) {
    if (auto it = state.registry.find(target->target); it != state.registry.end()) {
      if (const auto* v = std::get_if<Virus>(&it->second.kind)) generation = v->generation + 1;
    }
  }

  AdaptiveOutcome out;
  out.max_cure_score = best->malicious_score;
  out.success = state.rng.attack.bernoulli(config.p_feasible);
  const double score = out.success ? best->malicious_score + config.margin
                                   : std::max(0.0, best->malicious_score - config.margin);
  out.new_virus = Sample{state.ids.next(), Virus{strain, payload_for(strain), generation}, best->benign_score,
                         score, best->benign_score};
  state.register_sample(out.new_virus);

  out.carrier = state.attackers.front();
  Agent& attacker = state.agents[out.carrier];
  attacker.album.insert(out.new_virus);
  attacker.history.inject(forged_record(state.round, attacker.id, strain, out.new_virus.id));
  return out;
}

}  // namespace cowpox
