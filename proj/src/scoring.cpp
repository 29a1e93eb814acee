#include "cowpox/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cowpox {

void ScoreModelParams::validate() const {
  if (!(std::isfinite(benign_low) && std::isfinite(benign_high)) || benign_low < 0.0 ||
      !(benign_low < benign_high)) {
    throw std::invalid_argument("score: need 0 <= benign_low < benign_high");
  }
  if (!(virus_margin > 0.0) || !(cure_margin > 0.0)) {
    throw std::invalid_argument("score: virus_margin and cure_margin must be positive");
  }
  if (retrieval.kind == RetrievalMode::Kind::TopK) {
    if (retrieval.k == 0) throw std::invalid_argument("retrieval: k must be positive");
    if (retrieval.weights.size() != retrieval.k) {
      throw std::invalid_argument("retrieval: need exactly k weights");
    }
    double sum = 0.0;
    for (double w : retrieval.weights) {
      if (!(w > 0.0)) throw std::invalid_argument("retrieval: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("retrieval: weights must sum to 1");
  }
}

double score(const Sample& s, const QueryContext& ctx, bool virus_elevates_benign_ctx) {
  if (!ctx.is_malicious()) {
    return (virus_elevates_benign_ctx && s.is_virus()) ? s.malicious_score : s.benign_score;
  }
  if (!s.is_benign() && s.strain() == ctx.malicious) return s.malicious_score;
  return s.benign_score;
}

RetrievalOutcome retrieve(const Album& album, const QueryContext& ctx, const ScoreModelParams& params,
                          RandomStream& rng) {
  if (album.empty()) throw std::invalid_argument("empty album");
  const auto& items = album.items();

  std::vector<std::size_t> order(items.size());
  std::vector<double> scores(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    order[i] = i;
    scores[i] = score(items[i], ctx, params.virus_elevates_benign_ctx);
  }
  // A virus covered by a same-strain cure (one that outranks it under the
  // strain's malicious context) never ranks above its best such cure.
  std::vector<bool> covered(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].is_virus()) continue;
    double best_cure = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < items.size(); ++j) {
      const Sample& c = items[j];
      if (c.is_cure() && c.strain() == items[i].strain() && c.malicious_score > items[i].malicious_score) {
        best_cure = std::max(best_cure, scores[j]);
        covered[i] = true;
      }
    }
    if (covered[i]) scores[i] = std::min(scores[i], best_cure);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (items[a].is_cure() != items[b].is_cure()) return items[a].is_cure();
    return a > b;
  });

  RetrievalOutcome out;
  out.ranked.reserve(order.size());
  for (std::size_t i : order) out.ranked.emplace_back(items[i].id, scores[i]);

  std::size_t pick = 0;
  if (params.retrieval.kind == RetrievalMode::Kind::TopK) {
    const std::size_t n = std::min(params.retrieval.k, order.size());
    std::vector<double> w(params.retrieval.weights.begin(), params.retrieval.weights.begin() + n);
    pick = rng.categorical(w);
  }
  out.album_index = order[pick];
  out.chosen = items[out.album_index].id;
  return out;
}

Sample craft_benign(SampleId id, const ScoreModelParams& params, RandomStream& rng) {
  const double s = rng.uniform(params.benign_low, params.benign_high);
  return Sample{id, Benign{}, s, s, std::nullopt};
}

}  // namespace cowpox
