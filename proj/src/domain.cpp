#include "cowpox/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cowpox {

std::optional<Strain> Sample::strain() const {
  if (const auto* v = std::get_if<Virus>(&kind)) return v->strain;
  if (const auto* c = std::get_if<Cure>(&kind)) return c->targets_strain;
  return std::nullopt;
}

void validate_sample(const Sample& s) {
  auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!ok(s.benign_score) || !ok(s.malicious_score)) {
    throw std::invalid_argument("sample scores must be finite and non-negative");
  }
  if (s.is_benign() && s.malicious_score != s.benign_score) {
    throw std::invalid_argument("benign sample must have malicious_score == benign_score");
  }
  if (const auto* v = std::get_if<Virus>(&s.kind)) {
    if (!s.origin_benign_score) throw std::invalid_argument("virus sample needs origin_benign_score");
    if (v->payload.value.empty()) throw std::invalid_argument("virus payload tag must be non-empty");
  }
}

Album::Album(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("album capacity must be positive");
}

std::optional<Sample> Album::insert(Sample s) {
  items_.push_back(std::move(s));
  if (items_.size() <= capacity_) return std::nullopt;
  Sample evicted = std::move(items_.front());
  items_.pop_front();
  return evicted;
}

bool Album::replace(SampleId old, const Sample& replacement) {
  bool found = false;
  for (auto& item : items_) {
    if (item.id == old) {
      item = replacement;
      found = true;
    }
  }
  return found;
}

bool Album::contains(SampleId id) const {
  return std::any_of(items_.begin(), items_.end(), [&](const Sample& s) { return s.id == id; });
}

bool Album::holds_virus() const {
  return std::any_of(items_.begin(), items_.end(), [](const Sample& s) { return s.is_virus(); });
}

bool Album::holds_cure() const {
  return std::any_of(items_.begin(), items_.end(), [](const Sample& s) { return s.is_cure(); });
}

History::History(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("history capacity must be positive");
}

void History::append(ChatRecord r) {
  if (!records_.empty() && r.round <= records_.back().round) {
    throw std::invalid_argument("chat record rounds must strictly increase");
  }
  records_.push_back(std::move(r));
  while (records_.size() > capacity_) records_.pop_front();
}

void History::inject(ChatRecord r) {
  if (!records_.empty() && records_.back().round >= r.round) {
    r.round = records_.back().round;
    records_.back() = std::move(r);
    return;
  }
  append(std::move(r));
}

bool History::mentions(Strain strain) const {
  return std::any_of(records_.begin(), records_.end(), [&](const ChatRecord& r) {
    return r.question.malicious == strain || r.answer.malicious == strain;
  });
}

QueryContext derive_context(const History& history) {
  const auto& records = history.records();
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (it->answer.malicious) return QueryContext::of_strain(*it->answer.malicious);
    if (it->question.malicious) return QueryContext::of_strain(*it->question.malicious);
  }
  return QueryContext::benign();
}

}  // namespace cowpox
