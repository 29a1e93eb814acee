#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cowpox/domain.hpp"
#include "cowpox/engine.hpp"

namespace cowpox::test {

inline Sample benign(std::uint64_t id, double s) { return Sample{SampleId{id}, Benign{}, s, s, std::nullopt}; }

inline Sample virus(std::uint64_t id, Strain strain, double mal, double origin) {
  return Sample{SampleId{id}, Virus{strain, PayloadTag{"T" + std::to_string(strain)}, 0}, origin, mal, origin};
}

inline Sample cure(std::uint64_t id, Strain strain, std::uint64_t target, double mal, double benign_score) {
  return Sample{SampleId{id}, Cure{strain, SampleId{target}}, benign_score, mal, std::nullopt};
}

inline ChatRecord record(std::uint32_t round, Question q, Answer a) {
  return ChatRecord{round, 0, Direction::AsQuestioner, q, SampleId{0}, a};
}

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cowpox_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Small fast scenario used by integration-style tests.
inline EngineConfig small_config(std::uint64_t seed = 0) {
  EngineConfig c;
  c.n_agents = 32;
  c.rounds = 24;
  c.kappa = 2;
  c.seed = seed;
  return c;
}

}  // namespace cowpox::test
