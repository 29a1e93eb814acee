#include "cowpox/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace cowpox {

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

template <typename F>
void rethrow_as(const char* field, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

void EngineConfig::validate() const {
  require(n_agents >= 2, "N", "need at least 2 agents");
  require(n_agents % 2 == 0, "N", "number of agents must be even");
  require(album_capacity >= 1, "album_size", "must be positive");
  require(history_capacity >= 1, "history_len", "must be positive");
  require(kappa <= n_agents, "kappa", "cannot exceed N");
  if (!cowpox_ids.empty()) {
    require(cowpox_ids.size() == kappa, "cowpox_ids", "must list exactly kappa ids");
    std::set<AgentId> unique(cowpox_ids.begin(), cowpox_ids.end());
    require(unique.size() == cowpox_ids.size(), "cowpox_ids", "ids must be distinct");
    require(*unique.rbegin() < n_agents, "cowpox_ids", "id out of range");
  }
  require(is_probability(p_path), "p_path", "must be in [0,1]");
  rethrow_as("score", [&] { score.validate(); });
  rethrow_as("detector", [&] { defense.validate(); });
  require(attack.r0_count <= n_agents - kappa, "r0_count", "cannot exceed N - kappa");
  require(attack.strain_count >= 1, "strains", "must be positive");
  require(attack.r0_count == 0 || attack.strain_count <= attack.r0_count, "strains",
          "cannot exceed r0_count (each strain needs a carrier)");
  if (attack.adaptive) {
    const auto& a = *attack.adaptive;
    require(a.trigger_round < rounds, "adaptive.trigger_round", "must be below rounds");
    require(is_probability(a.p_feasible), "adaptive.p_feasible", "must be in [0,1]");
    require(a.margin > 0.0, "adaptive.margin", "must be positive");
    require(attack.r0_count >= 1, "adaptive.enabled", "needs an attacker agent (r0_count >= 1)");
  }
}

Sample SimState::make_benign(const ScoreModelParams& params) {
  return register_sample(craft_benign(ids.next(), params, rng.scores));
}

const Sample& SimState::register_sample(const Sample& s) {
  return registry.insert_or_assign(s.id, s).first->second;
}

Pairing split_and_pair(std::size_t n_agents, RandomStream& rng) {
  if (n_agents < 2 || n_agents % 2 != 0) throw ConfigError("N", "number of agents must be even and >= 2");
  std::vector<AgentId> order(n_agents);
  std::iota(order.begin(), order.end(), AgentId{0});
  rng.shuffle(order);
  // A uniform permutation gives a uniform split (first half questioners) and,
  // independently, a uniform bijection onto the second half.
  Pairing pairs;
  pairs.reserve(n_agents / 2);
  const std::size_t half = n_agents / 2;
  for (std::size_t i = 0; i < half; ++i) pairs.emplace_back(order[i], order[half + i]);
  return pairs;
}

Question compose_question(const Sample& retrieved) {
  if (const auto* v = std::get_if<Virus>(&retrieved.kind)) return Question::of_strain(v->strain);
  return Question::benign();
}

Answer respond(const Sample& incoming, const Question& q, double p_path, RandomStream& rng) {
  const auto* v = std::get_if<Virus>(&incoming.kind);
  if (v == nullptr || q.malicious != v->strain) return Answer::benign();
  return rng.bernoulli(p_path) ? Answer::of_strain(v->strain) : Answer::benign();
}

namespace {

RoundLog snapshot_round(const SimState& state, std::uint32_t round) {
  RoundLog log;
  log.round = round;
  log.agents.reserve(state.agents.size());
  for (const auto& a : state.agents) log.agents.push_back(snapshot(a));
  return log;
}

void apply_replacement(SimState& state, const Replacement& r) {
  state.register_sample(r.new_sample);
  if (!state.agents[r.agent].album.replace(r.old_sample, r.new_sample)) ++state.stats.replace_warnings;
}

}  // namespace

SimState initialize(const EngineConfig& config) {
  config.validate();
  SimState state;
  state.rng = RandomStreams::from_seed(config.seed);

  state.agents.reserve(config.n_agents);
  for (AgentId i = 0; i < config.n_agents; ++i) {
    state.agents.emplace_back(i, AgentRole::Normal, config.album_capacity, config.history_capacity);
  }

  std::vector<AgentId> cowpox = config.cowpox_ids;
  if (cowpox.empty() && config.kappa > 0) {
    std::vector<AgentId> all(config.n_agents);
    std::iota(all.begin(), all.end(), AgentId{0});
    state.rng.placement.shuffle(all);
    cowpox.assign(all.begin(), all.begin() + config.kappa);
  }
  for (AgentId id : cowpox) state.agents[id].role = AgentRole::Cowpox;

  for (auto& agent : state.agents) {
    for (std::uint32_t k = 0; k < config.album_capacity; ++k) agent.album.insert(state.make_benign(config.score));
  }

  seed_patient_zero(state, config.attack, config.score);
  state.log.push_back(snapshot_round(state, 0));
  state.metrics.push_back(metrics_from_round(state.log.back()));
  return state;
}

void step(SimState& state, const EngineConfig& config) {
  if (state.round >= config.rounds) throw std::logic_error("step: all rounds already executed");
  const std::uint32_t t = state.round + 1;

  // Delayed cures whose optimisation finishes this round.
  auto due = std::stable_partition(state.pending.begin(), state.pending.end(),
                                   [&](const PendingReplacement& p) { return p.apply_round > t; });
  for (auto it = due; it != state.pending.end(); ++it) apply_replacement(state, it->replacement);
  state.pending.erase(due, state.pending.end());

  if (config.attack.adaptive && !state.stats.adaptive && t >= config.attack.adaptive->trigger_round) {
    if (auto outcome = adaptive_attack(state, *config.attack.adaptive)) {
      state.stats.adaptive = std::move(outcome);
      state.stats.adaptive_round = t;
    }
  }

  const Pairing pairs = split_and_pair(state.agents.size(), state.rng.pairing);

  std::vector<Compartment> before(state.agents.size());
  for (std::size_t i = 0; i < state.agents.size(); ++i) before[i] = classify(state.agents[i]);

  RoundLog round_log;
  round_log.round = t;
  round_log.pairs.reserve(pairs.size());

  for (const auto& [qid, aid] : pairs) {
    Agent& questioner = state.agents[qid];
    Agent& responder = state.agents[aid];

    PairEvent ev;
    ev.round = t;
    ev.questioner = qid;
    ev.responder = aid;
    ev.q_state_before = before[qid];
    ev.a_state_before = before[aid];
    ev.q_carrier = questioner.album.holds_virus();

    const QueryContext ctx = derive_context(questioner.history);
    const RetrievalOutcome got = retrieve(questioner.album, ctx, config.score, state.rng.retrieval);
    const Sample sample = questioner.album.items()[got.album_index];
    ev.retrieved = sample.id;
    ev.retrieved_class = classify_sample(sample);
    ev.question = compose_question(sample);

    responder.album.insert(sample);
    ev.answer = respond(sample, ev.question, config.p_path, state.rng.pathogenicity);

    questioner.history.append(ChatRecord{t, aid, Direction::AsQuestioner, ev.question, sample.id, ev.answer});
    responder.history.append(ChatRecord{t, qid, Direction::AsResponder, ev.question, sample.id, ev.answer});

    if (responder.is_cowpox()) {
      HookOutcome hook = cowpox_hook(responder, sample, ev.answer, config.defense, config.score, state.ids,
                                     state.rng.detector);
      ev.detected = hook.flagged;
      if (hook.flagged) {
        ++round_log.detections;
        ++state.stats.detections;
        if (!state.stats.first_detection_round && hook.cure_generated) state.stats.first_detection_round = t;
      }
      if (hook.false_positive) ++state.stats.false_positives;
      if (hook.cure_generated) {
        ++state.stats.cures_generated;
        state.stats.cure_epochs += hook.epochs;
      }
      if (hook.fell_back_to_s1) ++state.stats.s2_fallbacks;
      if (hook.replacement) {
        if (config.defense.cure_delay_rounds == 0) {
          apply_replacement(state, *hook.replacement);
        } else {
          state.register_sample(hook.replacement->new_sample);
          state.pending.push_back({t + config.defense.cure_delay_rounds, std::move(*hook.replacement)});
        }
      }
    }

    ev.a_state_after = classify(responder);
    round_log.pairs.push_back(ev);
  }

  for (auto& agent : state.agents) {
    if (!agent.once_infected && classify(agent) == Compartment::Infected) agent.once_infected = true;
  }

  RoundLog snap = snapshot_round(state, t);
  round_log.agents = std::move(snap.agents);
  state.metrics.push_back(metrics_from_round(round_log));
  if (!config.record_pairs) round_log.pairs.clear();
  state.log.push_back(std::move(round_log));
  state.round = t;
}

RunResult run(const EngineConfig& config) {
  SimState state = initialize(config);
  while (state.round < config.rounds) step(state, config);
  RunResult result;
  result.metrics = std::move(state.metrics);
  result.log = std::move(state.log);
  result.stats = std::move(state.stats);
  return result;
}

}  // namespace cowpox
