#include "cowpox/defense.hpp"

#include <algorithm>
#include <cmath>

namespace cowpox {

DetectorParams DetectorParams::for_mode(DetectorMode mode) {
  if (mode == DetectorMode::OneTurn) return DetectorParams{mode, 0.028, 0.125};
  return DetectorParams{mode, 0.079, 0.030};
}

void DetectorParams::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(fpr) || !prob(fnr)) throw std::invalid_argument("detector: fpr and fnr must be in [0,1]");
}

bool inspect(const Answer& answer, const DetectorParams& det, RandomStream& rng) {
  const double u = rng.uniform();
  return answer.is_malicious() ? u < 1.0 - det.fnr : u < det.fpr;
}

void CureStrategy::validate() const {
  if (!(s2_epoch_step > 0.0) || !std::isfinite(s2_epoch_step)) {
    throw std::invalid_argument("strategy: s2_epoch_step must be positive");
  }
  if (s2_max_epochs == 0) throw std::invalid_argument("strategy: s2_max_epochs must be positive");
}

void DefenseConfig::validate() const {
  detector.validate();
  strategy.validate();
  if (benign_bank_capacity == 0) throw std::invalid_argument("defense: benign bank capacity must be positive");
}

CureResult generate_cure_s1(SampleId id, const Sample& virus, double cure_margin) {
  const auto* v = std::get_if<Virus>(&virus.kind);
  if (v == nullptr) throw std::invalid_argument("generate_cure_s1: input is not a virus");
  Sample cure{id, Cure{v->strain, virus.id}, virus.origin_benign_score.value_or(virus.benign_score),
              virus.malicious_score + cure_margin, std::nullopt};
  return {std::move(cure), 1};
}

CureResult generate_cure_s2(SampleId id, std::span<const Sample> bank, const Sample& virus,
                            const CureStrategy& strategy, double cure_margin) {
  const auto* v = std::get_if<Virus>(&virus.kind);
  if (v == nullptr) throw std::invalid_argument("generate_cure_s2: input is not a virus");
  if (bank.empty()) throw NoBenignBank();

  // Most recent sample wins ties, matching retrieval order.
  const Sample* base = &bank.front();
  for (const auto& s : bank) {
    if (s.benign_score >= base->benign_score) base = &s;
  }

  const double target = virus.malicious_score;
  const double slack = 1e-12 * std::max(1.0, std::abs(target));
  std::uint32_t epochs = 0;
  double candidate = base->benign_score;
  do {
    if (epochs == strategy.s2_max_epochs) {
      throw std::runtime_error("generate_cure_s2: epoch budget exhausted");
    }
    ++epochs;
    candidate = base->benign_score + strategy.s2_epoch_step * epochs;
  } while (!(candidate > target + slack));

  Sample cure{id, Cure{v->strain, virus.id}, base->benign_score, candidate + cure_margin, std::nullopt};
  return {std::move(cure), epochs};
}

HookOutcome cowpox_hook(Agent& agent, const Sample& incoming, const Answer& answer,
                        const DefenseConfig& config, const ScoreModelParams& score_params,
                        SampleIdAllocator& ids, RandomStream& detector_rng) {
  HookOutcome out;
  if (!agent.is_cowpox()) return out;

  if (incoming.is_benign()) {
    agent.benign_bank.push_back(incoming);
    while (agent.benign_bank.size() > config.benign_bank_capacity) agent.benign_bank.pop_front();
  }

  out.flagged = inspect(answer, config.detector, detector_rng);
  if (!out.flagged) return out;

  if (incoming.is_virus()) {
    out.cure_generated = true;
    CureResult result;
    if (config.strategy.kind == CureStrategyKind::S2 && !agent.benign_bank.empty()) {
      const std::vector<Sample> bank(agent.benign_bank.begin(), agent.benign_bank.end());
      result = generate_cure_s2(ids.next(), bank, incoming, config.strategy, score_params.cure_margin);
    } else {
      out.fell_back_to_s1 = config.strategy.kind == CureStrategyKind::S2;
      result = generate_cure_s1(ids.next(), incoming, score_params.cure_margin);
    }
    out.epochs = result.epochs;
    out.replacement = Replacement{agent.id, incoming.id, std::move(result.cure)};
    return out;
  }

  out.false_positive = true;
  if (incoming.is_benign()) {
    Sample twin{ids.next(), Benign{}, incoming.benign_score, incoming.benign_score, std::nullopt};
    out.replacement = Replacement{agent.id, incoming.id, std::move(twin)};
  }
  return out;
}

}  // namespace cowpox
