#pragma once

// Abstract retrieval-score model standing in for a learned RAG encoder.
//
// Benign samples score the same under every context. Viruses and cures carry
// an elevated malicious_score that applies only under the malicious context of
// their own strain; elsewhere they behave like the benign sample they came from.

#include <cstddef>
#include <utility>
#include <vector>

#include "cowpox/domain.hpp"
#include "cowpox/random.hpp"

namespace cowpox {

struct RetrievalMode {
  enum class Kind { Argmax, TopK };
  Kind kind = Kind::Argmax;
  std::size_t k = 3;
  std::vector<double> weights{0.7, 0.2, 0.1};

  static RetrievalMode argmax() { return {}; }
  static RetrievalMode top_k(std::size_t k, std::vector<double> weights) {
    return RetrievalMode{Kind::TopK, k, std::move(weights)};
  }
};

struct ScoreModelParams {
  double benign_low = 0.0;
  double benign_high = 1.0;
  double virus_margin = 0.05;
  double cure_margin = 0.02;
  RetrievalMode retrieval;
  /// When set, a virus also uses its malicious_score under the benign context.
  bool virus_elevates_benign_ctx = false;

  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

struct RetrievalOutcome {
  SampleId chosen;
  std::size_t album_index = 0;  // position of `chosen` in the album
  /// (id, effective score) in retrieval order: descending score, a cure
  /// before any other item on ties, otherwise the newer item first.
  std::vector<std::pair<SampleId, double>> ranked;
};

double score(const Sample& s, const QueryContext& ctx, bool virus_elevates_benign_ctx = false);

/// A virus is covered when the album holds a same-strain cure with a higher
/// malicious score. Under any context a covered virus's effective score is
/// capped at the score of its best covering cure, so the cure displaces it.
/// Throws std::invalid_argument("empty album") when the album is empty.
RetrievalOutcome retrieve(const Album& album, const QueryContext& ctx, const ScoreModelParams& params,
                          RandomStream& rng);

/// Fresh benign sample with score ~ U[benign_low, benign_high).
Sample craft_benign(SampleId id, const ScoreModelParams& params, RandomStream& rng);

}  // namespace cowpox
