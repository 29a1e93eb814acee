#include "cowpox/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace cowpox {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return value;
}

std::uint32_t parse_u32(const std::string& key, const std::string& text) {
  if (trim(text).starts_with('-')) throw ConfigError(key, "must be non-negative");
  return parse_number<std::uint32_t>(key, text);
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  if (trim(text).starts_with('-')) throw ConfigError(key, "must be non-negative");
  return parse_number<std::uint64_t>(key, text);
}

double parse_real(const std::string& key, const std::string& text) { return parse_number<double>(key, text); }

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::vector<std::string> out;
  if (trim(t).empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += fmt(values[i]);
  }
  return out;
}

template <typename F>
void set_adaptive(Scenario& s, F&& f) {
  f(s.adaptive_params);
  if (s.engine.attack.adaptive) f(*s.engine.attack.adaptive);
}

using Setter = std::function<void(Scenario&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"N", [](Scenario& s, const auto& k, const auto& v) { s.engine.n_agents = parse_u32(k, v); }},
      {"rounds", [](Scenario& s, const auto& k, const auto& v) { s.engine.rounds = parse_u32(k, v); }},
      {"kappa", [](Scenario& s, const auto& k, const auto& v) { s.engine.kappa = parse_u32(k, v); }},
      {"cowpox_ids",
       [](Scenario& s, const auto& k, const auto& v) {
         s.engine.cowpox_ids.clear();
         for (const auto& item : split_list(v)) s.engine.cowpox_ids.push_back(parse_u32(k, item));
       }},
      {"album_size", [](Scenario& s, const auto& k, const auto& v) { s.engine.album_capacity = parse_u32(k, v); }},
      {"history_len", [](Scenario& s, const auto& k, const auto& v) { s.engine.history_capacity = parse_u32(k, v); }},
      {"r0_count", [](Scenario& s, const auto& k, const auto& v) { s.engine.attack.r0_count = parse_u32(k, v); }},
      {"strains", [](Scenario& s, const auto& k, const auto& v) { s.engine.attack.strain_count = parse_u32(k, v); }},
      {"seed", [](Scenario& s, const auto& k, const auto& v) { s.engine.seed = parse_u64(k, v); }},
      {"replicates", [](Scenario& s, const auto& k, const auto& v) { s.replicates = parse_u32(k, v); }},
      {"p_path", [](Scenario& s, const auto& k, const auto& v) { s.engine.p_path = parse_real(k, v); }},
      {"score.benign_low", [](Scenario& s, const auto& k, const auto& v) { s.engine.score.benign_low = parse_real(k, v); }},
      {"score.benign_high",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.score.benign_high = parse_real(k, v); }},
      {"score.virus_margin",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.score.virus_margin = parse_real(k, v); }},
      {"score.cure_margin",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.score.cure_margin = parse_real(k, v); }},
      {"score.virus_elevates_benign_ctx",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.score.virus_elevates_benign_ctx = parse_bool(k, v); }},
      {"retrieval.mode",
       [](Scenario& s, const auto& k, const auto& v) {
         const std::string m = lower(trim(v));
         if (m == "argmax") {
           s.engine.score.retrieval.kind = RetrievalMode::Kind::Argmax;
         } else if (m == "topk" || m == "top_k") {
           s.engine.score.retrieval.kind = RetrievalMode::Kind::TopK;
         } else {
           throw ConfigError(k, "expected argmax or topk, got '" + v + "'");
         }
       }},
      {"retrieval.k", [](Scenario& s, const auto& k, const auto& v) { s.engine.score.retrieval.k = parse_u32(k, v); }},
      {"retrieval.weights",
       [](Scenario& s, const auto& k, const auto& v) {
         s.engine.score.retrieval.weights.clear();
         for (const auto& item : split_list(v)) s.engine.score.retrieval.weights.push_back(parse_real(k, item));
       }},
      {"detector.mode",
       [](Scenario& s, const auto& k, const auto& v) {
         const std::string m = lower(trim(v));
         if (m == "one_turn" || m == "oneturn" || m == "1-turn") {
           s.engine.defense.detector = DetectorParams::for_mode(DetectorMode::OneTurn);
         } else if (m == "three_turn" || m == "threeturn" || m == "3-turn") {
           s.engine.defense.detector = DetectorParams::for_mode(DetectorMode::ThreeTurn);
         } else {
           throw ConfigError(k, "expected one_turn or three_turn, got '" + v + "'");
         }
       }},
      {"detector.fpr", [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.detector.fpr = parse_real(k, v); }},
      {"detector.fnr", [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.detector.fnr = parse_real(k, v); }},
      {"strategy",
       [](Scenario& s, const auto& k, const auto& v) {
         const std::string m = lower(trim(v));
         if (m == "s1") {
           s.engine.defense.strategy.kind = CureStrategyKind::S1;
         } else if (m == "s2") {
           s.engine.defense.strategy.kind = CureStrategyKind::S2;
         } else {
           throw ConfigError(k, "expected S1 or S2, got '" + v + "'");
         }
       }},
      {"s2.epoch_step",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.strategy.s2_epoch_step = parse_real(k, v); }},
      {"s2.max_epochs",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.strategy.s2_max_epochs = parse_u32(k, v); }},
      {"benign_bank_capacity",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.benign_bank_capacity = parse_u32(k, v); }},
      {"cure_delay_rounds",
       [](Scenario& s, const auto& k, const auto& v) { s.engine.defense.cure_delay_rounds = parse_u32(k, v); }},
      {"adaptive.enabled",
       [](Scenario& s, const auto& k, const auto& v) {
         if (parse_bool(k, v)) {
           s.engine.attack.adaptive = s.adaptive_params;
         } else {
           s.engine.attack.adaptive.reset();
         }
       }},
      {"adaptive.trigger_round",
       [](Scenario& s, const auto& k, const auto& v) {
         const auto r = parse_u32(k, v);
         set_adaptive(s, [&](AdaptiveConfig& a) { a.trigger_round = r; });
       }},
      {"adaptive.p_feasible",
       [](Scenario& s, const auto& k, const auto& v) {
         const double p = parse_real(k, v);
         set_adaptive(s, [&](AdaptiveConfig& a) { a.p_feasible = p; });
       }},
      {"adaptive.margin",
       [](Scenario& s, const auto& k, const auto& v) {
         const double m = parse_real(k, v);
         set_adaptive(s, [&](AdaptiveConfig& a) { a.margin = m; });
       }},
      {"output_dir", [](Scenario& s, const auto&, const auto& v) { s.output_dir = trim(v); }},
  };
  return table;
}

// Keys whose effect depends on others are applied in this order: the detector
// mode installs default error rates that explicit fpr/fnr then override, and
// adaptive.enabled copies the adaptive.* parameters into the engine.
int apply_rank(const std::string& key) {
  if (key == "detector.mode") return 0;
  if (key == "adaptive.enabled") return 2;
  return 1;
}

void flatten(const YAML::Node& node, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      flatten(kv.second, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.IsSequence()) {
    std::string joined;
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (!node[i].IsScalar()) throw ConfigError(prefix, "lists may only hold scalars");
      if (i) joined += ",";
      joined += node[i].as<std::string>();
    }
    out[prefix] = joined;
  } else if (node.IsScalar()) {
    out[prefix] = node.as<std::string>();
  } else if (node.IsNull()) {
    throw ConfigError(prefix, "missing value");
  }
}

}  // namespace

void Scenario::validate() const {
  engine.validate();
  if (replicates < 1) throw ConfigError("replicates", "must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_scenario_value(Scenario& s, const std::string& key, const std::string& value) {
  const auto& table = setters();
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
  if (it == table.end()) throw ConfigError(key, "unknown key");
  it->second(s, key, value);
}

std::map<std::string, std::string> scenario_values(const Scenario& s) {
  const auto& e = s.engine;
  std::map<std::string, std::string> m;
  m["N"] = std::to_string(e.n_agents);
  m["rounds"] = std::to_string(e.rounds);
  m["kappa"] = std::to_string(e.kappa);
  m["cowpox_ids"] = join<AgentId>(e.cowpox_ids, [](const AgentId& id) { return std::to_string(id); });
  m["album_size"] = std::to_string(e.album_capacity);
  m["history_len"] = std::to_string(e.history_capacity);
  m["r0_count"] = std::to_string(e.attack.r0_count);
  m["strains"] = std::to_string(e.attack.strain_count);
  m["seed"] = std::to_string(e.seed);
  m["replicates"] = std::to_string(s.replicates);
  m["p_path"] = real_text(e.p_path);
  m["score.benign_low"] = real_text(e.score.benign_low);
  m["score.benign_high"] = real_text(e.score.benign_high);
  m["score.virus_margin"] = real_text(e.score.virus_margin);
  m["score.cure_margin"] = real_text(e.score.cure_margin);
  m["score.virus_elevates_benign_ctx"] = e.score.virus_elevates_benign_ctx ? "true" : "false";
  m["retrieval.mode"] = e.score.retrieval.kind == RetrievalMode::Kind::Argmax ? "argmax" : "topk";
  m["retrieval.k"] = std::to_string(e.score.retrieval.k);
  m["retrieval.weights"] = join<double>(e.score.retrieval.weights, real_text);
  m["detector.mode"] = e.defense.detector.mode == DetectorMode::OneTurn ? "one_turn" : "three_turn";
  m["detector.fpr"] = real_text(e.defense.detector.fpr);
  m["detector.fnr"] = real_text(e.defense.detector.fnr);
  m["strategy"] = e.defense.strategy.kind == CureStrategyKind::S1 ? "S1" : "S2";
  m["s2.epoch_step"] = real_text(e.defense.strategy.s2_epoch_step);
  m["s2.max_epochs"] = std::to_string(e.defense.strategy.s2_max_epochs);
  m["benign_bank_capacity"] = std::to_string(e.defense.benign_bank_capacity);
  m["cure_delay_rounds"] = std::to_string(e.defense.cure_delay_rounds);
  m["adaptive.enabled"] = e.attack.adaptive ? "true" : "false";
  const AdaptiveConfig& a = e.attack.adaptive ? *e.attack.adaptive : s.adaptive_params;
  m["adaptive.trigger_round"] = std::to_string(a.trigger_round);
  m["adaptive.p_feasible"] = real_text(a.p_feasible);
  m["adaptive.margin"] = real_text(a.margin);
  m["output_dir"] = s.output_dir;
  return m;
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("scenario", std::string("malformed document: ") + e.what());
  }
  Scenario s;
  if (!root || root.IsNull()) return s;
  if (!root.IsMap()) throw ConfigError("scenario", "top level must be a key/value map");
  if (root["config"] && root["config"].IsMap()) root = root["config"];

  std::map<std::string, std::string> flat;
  try {
    flatten(root, "", flat);
  } catch (const YAML::Exception& e) {
    throw ConfigError("scenario", std::string("malformed value: ") + e.what());
  }
  std::vector<std::pair<std::string, std::string>> ordered(flat.begin(), flat.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return apply_rank(a.first) < apply_rank(b.first); });
  for (const auto& [key, value] : ordered) {
    // cowpox_ids may legitimately be an empty list.
    if (value.empty() && key != "cowpox_ids") throw ConfigError(key, "missing value");
    set_scenario_value(s, key, value);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("scenario", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_yaml(const Scenario& s) {
  const auto values = scenario_values(s);
  std::string out;
  for (const auto& key : scenario_keys()) {
    auto it = values.find(key);
    if (it == values.end()) continue;
    out += key + ": ";
    if (key == "cowpox_ids" || key == "retrieval.weights") {
      out += "[" + it->second + "]";
    } else if (key == "output_dir") {
      out += "\"" + it->second + "\"";
    } else {
      out += it->second;
    }
    out += "\n";
  }
  return out;
}

}  // namespace cowpox
