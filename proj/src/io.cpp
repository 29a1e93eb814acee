#include "cowpox/io.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cowpox {

using json = nlohmann::json;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const MetricsTable& table) {
  out << kMetricsHeader << '\n';
  for (const auto& r : table) {
    out << r.round << ',' << format_real(r.current_rate) << ',' << format_real(r.cumulative_rate) << ','
        << format_real(r.beta_t) << ',' << format_real(r.alpha_q) << ',' << r.recovered << ',' << r.carriers_virus
        << ',' << r.carriers_cure << ',' << r.detections << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsTable& table) {
  auto out = open_out(path);
  write_metrics_csv(out, table);
}

MetricsTable read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw std::runtime_error(path.string() + ": unexpected metrics header");
  }
  MetricsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error(path.string() + ": expected 9 columns");
    MetricsRow r;
    r.round = static_cast<std::uint32_t>(std::stoul(cells[0]));
    r.current_rate = std::stod(cells[1]);
    r.cumulative_rate = std::stod(cells[2]);
    r.beta_t = std::stod(cells[3]);
    r.alpha_q = std::stod(cells[4]);
    r.recovered = static_cast<std::uint32_t>(std::stoul(cells[5]));
    r.carriers_virus = static_cast<std::uint32_t>(std::stoul(cells[6]));
    r.carriers_cure = static_cast<std::uint32_t>(std::stoul(cells[7]));
    r.detections = static_cast<std::uint32_t>(std::stoul(cells[8]));
    table.push_back(r);
  }
  return table;
}

namespace {

struct Column {
  const char* name;
  double (*get)(const MetricsRow&);
};

const Column kColumns[] = {
    {"current_rate", [](const MetricsRow& r) { return r.current_rate; }},
    {"cumulative_rate", [](const MetricsRow& r) { return r.cumulative_rate; }},
    {"beta_t", [](const MetricsRow& r) { return r.beta_t; }},
    {"alpha_q", [](const MetricsRow& r) { return r.alpha_q; }},
    {"recovered", [](const MetricsRow& r) { return static_cast<double>(r.recovered); }},
    {"carriers_virus", [](const MetricsRow& r) { return static_cast<double>(r.carriers_virus); }},
    {"carriers_cure", [](const MetricsRow& r) { return static_cast<double>(r.carriers_cure); }},
    {"detections", [](const MetricsRow& r) { return static_cast<double>(r.detections); }},
};

void check_same_length(std::span<const MetricsTable> tables) {
  if (tables.empty()) throw std::invalid_argument("no metrics tables");
  for (const auto& t : tables) {
    if (t.size() != tables.front().size()) throw std::invalid_argument("metrics tables differ in length");
  }
}

}  // namespace

void write_aggregate_csv(std::ostream& out, std::span<const MetricsTable> tables) {
  check_same_length(tables);
  out << "round";
  for (const auto& c : kColumns) out << ',' << c.name << "_mean," << c.name << "_std";
  out << '\n';
  const double n = static_cast<double>(tables.size());
  for (std::size_t t = 0; t < tables.front().size(); ++t) {
    out << tables.front()[t].round;
    for (const auto& c : kColumns) {
      double sum = 0.0;
      for (const auto& tab : tables) sum += c.get(tab[t]);
      const double mean = sum / n;
      double ss = 0.0;
      for (const auto& tab : tables) ss += (c.get(tab[t]) - mean) * (c.get(tab[t]) - mean);
      const double sd = tables.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      out << ',' << format_real(mean) << ',' << format_real(sd);
    }
    out << '\n';
  }
}

void write_aggregate_csv(const std::filesystem::path& path, std::span<const MetricsTable> tables) {
  auto out = open_out(path);
  write_aggregate_csv(out, tables);
}

CurveSummary summarize_curve(std::span<const double> current, std::span<const double> cumulative,
                             std::span<const std::uint32_t> rounds) {
  if (current.empty() || current.size() != cumulative.size() || current.size() != rounds.size()) {
    throw std::invalid_argument("summarize_curve: curves must be non-empty and equally long");
  }
  CurveSummary s;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (current[i] > current[peak]) peak = i;
  }
  s.peak_current = current[peak];
  s.peak_round = rounds[peak];
  for (std::size_t i = peak + 1; i < current.size(); ++i) {
    if (current[i] <= 0.10) {
      s.first_current_le_10 = rounds[i];
      break;
    }
  }
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (!s.first_cumulative_ge_85 && cumulative[i] >= 0.85) s.first_cumulative_ge_85 = rounds[i];
    if (!s.first_cumulative_ge_95 && cumulative[i] >= 0.95) s.first_cumulative_ge_95 = rounds[i];
  }
  s.final_current = current.back();
  s.final_cumulative = cumulative.back();
  return s;
}

std::vector<double> median_curve(std::span<const MetricsTable> tables, double MetricsRow::*field) {
  check_same_length(tables);
  std::vector<double> out(tables.front().size());
  std::vector<double> col(tables.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    for (std::size_t k = 0; k < tables.size(); ++k) col[k] = tables[k][t].*field;
    std::sort(col.begin(), col.end());
    const std::size_t m = col.size() / 2;
    out[t] = col.size() % 2 ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return out;
}

std::vector<double> mean_curve(std::span<const MetricsTable> tables, double MetricsRow::*field) {
  check_same_length(tables);
  std::vector<double> out(tables.front().size(), 0.0);
  for (const auto& tab : tables) {
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += tab[t].*field;
  }
  for (auto& v : out) v /= static_cast<double>(tables.size());
  return out;
}

RunSummary summarize_run(std::span<const MetricsTable> tables) {
  check_same_length(tables);
  std::vector<std::uint32_t> rounds;
  for (const auto& r : tables.front()) rounds.push_back(r.round);
  RunSummary s;
  s.mean = summarize_curve(mean_curve(tables, &MetricsRow::current_rate),
                           mean_curve(tables, &MetricsRow::cumulative_rate), rounds);
  s.median = summarize_curve(median_curve(tables, &MetricsRow::current_rate),
                             median_curve(tables, &MetricsRow::cumulative_rate), rounds);
  for (const auto& tab : tables) {
    std::vector<double> cur, cum;
    for (const auto& r : tab) {
      cur.push_back(r.current_rate);
      cum.push_back(r.cumulative_rate);
    }
    s.replicates.push_back(summarize_curve(cur, cum, rounds));
  }
  return s;
}

namespace {

json optional_round(const std::optional<std::uint32_t>& r) { return r ? json(*r) : json(nullptr); }

json curve_json(const CurveSummary& c) {
  return json{{"peak_current", c.peak_current},
              {"peak_round", c.peak_round},
              {"first_round_current_le_0.10", optional_round(c.first_current_le_10)},
              {"first_round_cumulative_ge_0.85", optional_round(c.first_cumulative_ge_85)},
              {"first_round_cumulative_ge_0.95", optional_round(c.first_cumulative_ge_95)},
              {"final_current", c.final_current},
              {"final_cumulative", c.final_cumulative}};
}

}  // namespace

std::string summary_json(const RunSummary& s) {
  json doc;
  doc["mean"] = curve_json(s.mean);
  doc["median"] = curve_json(s.median);
  doc["replicates"] = json::array();
  for (const auto& r : s.replicates) doc["replicates"].push_back(curve_json(r));
  return doc.dump(2) + "\n";
}

namespace {

struct GzCloser {
  void operator()(gzFile_s* f) const {
    if (f) gzclose(f);
  }
};
using GzHandle = std::unique_ptr<gzFile_s, GzCloser>;

char state_char(Compartment c) { return to_string(c)[0]; }

Compartment state_from(char c) {
  switch (c) {
    case 's': return Compartment::Sensitive;
    case 'i': return Compartment::Infected;
    case 'c': return Compartment::Cured;
  }
  throw std::runtime_error(std::string("event log: bad compartment '") + c + "'");
}

const char* class_name(SampleClass c) {
  switch (c) {
    case SampleClass::Benign: return "benign";
    case SampleClass::Virus: return "virus";
    case SampleClass::Cure: return "cure";
  }
  return "?";
}

SampleClass class_from(const std::string& s) {
  if (s == "benign") return SampleClass::Benign;
  if (s == "virus") return SampleClass::Virus;
  if (s == "cure") return SampleClass::Cure;
  throw std::runtime_error("event log: bad sample class '" + s + "'");
}

json strain_json(const std::optional<Strain>& s) { return s ? json(*s) : json(nullptr); }

std::optional<Strain> strain_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<Strain>();
}

std::string round_line(const RoundLog& r) {
  std::string states, virus, cure, once;
  for (const auto& a : r.agents) {
    states += state_char(a.state);
    virus += a.virus_carrier ? '1' : '0';
    cure += a.cure_carrier ? '1' : '0';
    once += a.once_infected ? '1' : '0';
  }
  json pairs = json::array();
  for (const auto& e : r.pairs) {
    pairs.push_back(json::array({e.questioner, e.responder, std::string(1, state_char(e.q_state_before)),
                                 std::string(1, state_char(e.a_state_before)), e.q_carrier, e.retrieved.value,
                                 class_name(e.retrieved_class), strain_json(e.question.malicious),
                                 strain_json(e.answer.malicious), std::string(1, state_char(e.a_state_after)),
                                 e.detected}));
  }
  json line{{"round", r.round}, {"detections", r.detections}, {"states", states}, {"virus", virus},
            {"cure", cure},     {"once", once},               {"pairs", pairs}};
  return line.dump();
}

RoundLog parse_round(const std::string& text) {
  const json j = json::parse(text);
  RoundLog r;
  r.round = j.at("round").get<std::uint32_t>();
  r.detections = j.at("detections").get<std::uint32_t>();
  const auto states = j.at("states").get<std::string>();
  const auto virus = j.at("virus").get<std::string>();
  const auto cure = j.at("cure").get<std::string>();
  const auto once = j.at("once").get<std::string>();
  if (virus.size() != states.size() || cure.size() != states.size() || once.size() != states.size()) {
    throw std::runtime_error("event log: snapshot columns differ in length");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    r.agents.push_back({state_from(states[i]), virus[i] == '1', cure[i] == '1', once[i] == '1'});
  }
  for (const auto& p : j.at("pairs")) {
    PairEvent e;
    e.round = r.round;
    e.questioner = p.at(0).get<AgentId>();
    e.responder = p.at(1).get<AgentId>();
    e.q_state_before = state_from(p.at(2).get<std::string>().at(0));
    e.a_state_before = state_from(p.at(3).get<std::string>().at(0));
    e.q_carrier = p.at(4).get<bool>();
    e.retrieved = SampleId{p.at(5).get<std::uint64_t>()};
    e.retrieved_class = class_from(p.at(6).get<std::string>());
    e.question.malicious = strain_from(p.at(7));
    e.answer.malicious = strain_from(p.at(8));
    e.a_state_after = state_from(p.at(9).get<std::string>().at(0));
    e.detected = p.at(10).get<bool>();
    r.pairs.push_back(e);
  }
  return r;
}

}  // namespace

void write_event_log(const std::filesystem::path& path, const EventLog& log) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  GzHandle f(gzopen(path.c_str(), "wb6"));
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : log) {
    const std::string line = round_line(r) + "\n";
    if (gzwrite(f.get(), line.data(), static_cast<unsigned>(line.size())) != static_cast<int>(line.size())) {
      throw std::runtime_error("write failed: " + path.string());
    }
  }
}

EventLog read_event_log(const std::filesystem::path& path) {
  GzHandle f(gzopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("cannot read event log " + path.string());
  EventLog log;
  std::string line;
  char buf[1 << 16];
  while (gzgets(f.get(), buf, sizeof buf) != nullptr) {
    line += buf;
    if (line.back() != '\n') continue;
    line.pop_back();
    if (!line.empty()) {
      try {
        log.push_back(parse_round(line));
      } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": malformed record: " + e.what());
      }
    }
    line.clear();
  }
  int err = 0;
  gzerror(f.get(), &err);
  if (err != Z_OK && err != Z_STREAM_END) throw std::runtime_error(path.string() + ": corrupt gzip stream");
  if (!line.empty()) throw std::runtime_error(path.string() + ": truncated record");
  return log;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

}  // namespace cowpox
