#pragma once

// File formats: metrics CSV, aggregate CSV, run summary, compressed event
// logs and content digests.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cowpox/events.hpp"
#include "cowpox/metrics.hpp"

namespace cowpox {

/// Fixed column order of every per-replicate metrics file.
inline constexpr const char* kMetricsHeader =
    "round,current_rate,cumulative_rate,beta_t,alpha_q,recovered,carriers_virus,carriers_cure,detections";

/// Six significant digits, "%g" style.
std::string format_real(double v);

void write_metrics_csv(std::ostream& out, const MetricsTable& table);
void write_metrics_csv(const std::filesystem::path& path, const MetricsTable& table);

/// Parses a file written by write_metrics_csv. Estimator counts are not stored
/// and come back as zero. Throws std::runtime_error on a schema mismatch.
MetricsTable read_metrics_csv(const std::filesystem::path& path);

/// Per-round mean and sample standard deviation of every metric column
/// across replicates. All tables must have the same length.
void write_aggregate_csv(std::ostream& out, std::span<const MetricsTable> tables);
void write_aggregate_csv(const std::filesystem::path& path, std::span<const MetricsTable> tables);

/// Table-style statistics of one current/cumulative curve.
struct CurveSummary {
  double peak_current = 0.0;
  std::uint32_t peak_round = 0;
  std::optional<std::uint32_t> first_current_le_10;  // first round after the peak with current <= 0.10
  std::optional<std::uint32_t> first_cumulative_ge_85;
  std::optional<std::uint32_t> first_cumulative_ge_95;
  double final_current = 0.0;
  double final_cumulative = 0.0;
};

CurveSummary summarize_curve(std::span<const double> current, std::span<const double> cumulative,
                             std::span<const std::uint32_t> rounds);

/// Round-wise median (mean of the two middle values for even counts).
std::vector<double> median_curve(std::span<const MetricsTable> tables, double MetricsRow::*field);
std::vector<double> mean_curve(std::span<const MetricsTable> tables, double MetricsRow::*field);

struct RunSummary {
  CurveSummary mean;
  CurveSummary median;
  std::vector<CurveSummary> replicates;
};

RunSummary summarize_run(std::span<const MetricsTable> tables);

/// Structured text (JSON) rendering.
std::string summary_json(const RunSummary& s);

/// One JSON object per round, gzip-compressed.
void write_event_log(const std::filesystem::path& path, const EventLog& log);
EventLog read_event_log(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace cowpox
