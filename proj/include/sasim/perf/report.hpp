#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sasim/perf/baseline.hpp"
#include "sasim/perf/metrics.hpp"

namespace sasim {
namespace perf {

inline constexpr int kSchemaVersion = 1;

// One {kernel, metric, series, value} sample consumable by any plotting
// tool; bar charts use raw values, radar charts normalized ones.
struct ChartPoint {
  std::string kernel;
  std::string metric;
  std::string series;
  double value = 0.0;
};

// Per-kernel join of a simulated report against the reference rows.
struct ComparisonRow {
  std::string key;
  std::string kernel;
  PerfReport sim;
  std::optional<PerfReport> table_sa;   // spatial-array reference row
  std::optional<PerfReport> table_hls;  // HLS reference row
  // vs the spatial-array reference row
  std::optional<double> latency_delta_cycles;
  std::optional<double> latency_delta_pct;
  // HLS/spatial-array ratios, hand-computable from the reference tables
  std::optional<double> hls_sa_latency_ratio;
  std::optional<double> sa_hls_power_ratio;
  std::optional<double> sa_hls_area_ratio;
};

// The aggregate over all kernels: HLS area/power sum over the largest
// configuration of every kernel, the spatial array keeps its single
// constants because one fabric serves every kernel.
struct AllAggregate {
  double hls_area_mm2 = 0.0;
  double hls_power_mw = 0.0;
  double sa_area_mm2 = 0.0;
  double sa_power_mw = 0.0;
  int kernels = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<ChartPoint> radar;  // normalized, per-kernel maxima = 1
  std::vector<ChartPoint> bars;   // raw values
  std::optional<AllAggregate> all;
  std::vector<std::string> warnings;
};

ComparisonReport compare(const std::vector<PerfReport>& sims,
                         const BaselineTable& baseline);

// Divide every (kernel, metric) group by its maximum across series.
// Idempotent: applying it twice is the identity.
std::vector<ChartPoint> normalize_points(std::vector<ChartPoint> points);

// --- serialization ---

nlohmann::ordered_json report_to_json(const PerfReport& report);
PerfReport report_from_json(const nlohmann::json& j);
std::string report_to_csv(const std::vector<PerfReport>& reports);

nlohmann::ordered_json comparison_to_json(const ComparisonReport& report);
std::string comparison_to_csv(const ComparisonReport& report);
nlohmann::ordered_json chart_to_json(const std::vector<ChartPoint>& points);

}  // namespace perf
}  // namespace sasim
