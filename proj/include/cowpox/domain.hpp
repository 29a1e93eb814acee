#pragma once

// Core data model: samples, albums, chat histories and agents.

#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cowpox {

using AgentId = std::uint32_t;
using Strain = std::uint32_t;

struct SampleId {
  std::uint64_t value = 0;
  friend auto operator<=>(const SampleId&, const SampleId&) = default;
};

/// Attacker-chosen target output, e.g. "T0".
struct PayloadTag {
  std::string value;
  friend bool operator==(const PayloadTag&, const PayloadTag&) = default;
};

struct Benign {
  friend bool operator==(const Benign&, const Benign&) = default;
};

struct Virus {
  Strain strain = 0;
  PayloadTag payload;
  /// 0 for a virus crafted from a benign sample, n for the n-th adaptive
  /// re-optimisation against a circulating cure.
  std::uint32_t generation = 0;
  friend bool operator==(const Virus&, const Virus&) = default;
};

struct Cure {
  Strain targets_strain = 0;
  /// The virus sample this cure was generated against.
  SampleId target;
  friend bool operator==(const Cure&, const Cure&) = default;
};

using SampleKind = std::variant<Benign, Virus, Cure>;

struct Sample {
  SampleId id;
  SampleKind kind;
  double benign_score = 0.0;
  double malicious_score = 0.0;
  std::optional<double> origin_benign_score;

  bool is_benign() const { return std::holds_alternative<Benign>(kind); }
  bool is_virus() const { return std::holds_alternative<Virus>(kind); }
  bool is_cure() const { return std::holds_alternative<Cure>(kind); }
  /// Strain of a virus, or the strain a cure targets; nullopt for benign samples.
  std::optional<Strain> strain() const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Monotone SampleId source for one simulation run.
class SampleIdAllocator {
 public:
  SampleId next() { return SampleId{next_++}; }
  std::uint64_t issued() const { return next_; }

 private:
  std::uint64_t next_ = 0;
};

/// Throws std::invalid_argument if the sample breaks its kind's invariants.
void validate_sample(const Sample& s);

/// Bounded FIFO sample store. Oldest item first.
class Album {
 public:
  explicit Album(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::deque<Sample>& items() const { return items_; }

  /// Appends `s`; returns the evicted oldest item when the capacity is exceeded.
  std::optional<Sample> insert(Sample s);

  /// Puts `replacement` in the position of every item with id `old`.
  /// Returns false (album unchanged) when `old` is not present.
  bool replace(SampleId old, const Sample& replacement);

  bool contains(SampleId id) const;
  bool holds_virus() const;
  bool holds_cure() const;

  friend bool operator==(const Album&, const Album&) = default;

 private:
  std::size_t capacity_;
  std::deque<Sample> items_;
};

struct Question {
  std::optional<Strain> malicious;  // nullopt: benign question

  static Question benign() { return {}; }
  static Question of_strain(Strain s) { return Question{s}; }
  bool is_malicious() const { return malicious.has_value(); }
  friend bool operator==(const Question&, const Question&) = default;
};

struct Answer {
  std::optional<Strain> malicious;  // strain whose payload the answer reproduces

  static Answer benign() { return {}; }
  static Answer of_strain(Strain s) { return Answer{s}; }
  bool is_malicious() const { return malicious.has_value(); }
  friend bool operator==(const Answer&, const Answer&) = default;
};

enum class Direction : std::uint8_t { AsQuestioner, AsResponder };

struct ChatRecord {
  std::uint32_t round = 0;
  AgentId partner = 0;
  Direction direction = Direction::AsQuestioner;
  Question question;
  SampleId sample;
  Answer answer;
  friend bool operator==(const ChatRecord&, const ChatRecord&) = default;
};

/// Bounded chat history; the oldest record is discarded on overflow.
class History {
 public:
  explicit History(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  const std::deque<ChatRecord>& records() const { return records_; }

  /// Throws std::invalid_argument if `r.round` does not exceed the last record's round.
  void append(ChatRecord r);

  /// Memory-bank tampering: overwrites the newest record when it is not older
  /// than `r`, otherwise appends. Keeps rounds strictly increasing.
  void inject(ChatRecord r);

  /// True if any record in the window carries a malicious question or answer of `strain`.
  bool mentions(Strain strain) const;

  friend bool operator==(const History&, const History&) = default;

 private:
  std::size_t capacity_;
  std::deque<ChatRecord> records_;
};

enum class AgentRole : std::uint8_t { Normal, Cowpox };

struct Agent {
  AgentId id = 0;
  AgentRole role = AgentRole::Normal;
  Album album;
  History history;
  std::deque<Sample> benign_bank;  // Cowpox agents only
  bool once_infected = false;

  Agent(AgentId id, AgentRole role, std::size_t album_capacity, std::size_t history_capacity)
      : id(id), role(role), album(album_capacity), history(history_capacity) {}

  bool is_cowpox() const { return role == AgentRole::Cowpox; }
};

struct QueryContext {
  std::optional<Strain> malicious;  // nullopt: benign context

  static QueryContext benign() { return {}; }
  static QueryContext of_strain(Strain s) { return QueryContext{s}; }
  bool is_malicious() const { return malicious.has_value(); }
  friend bool operator==(const QueryContext&, const QueryContext&) = default;
};

/// Malicious context of the most recent record carrying a malicious question
/// or answer; within one record the answer's strain takes precedence.
QueryContext derive_context(const History& history);

}  // namespace cowpox
