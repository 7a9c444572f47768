#include "sasim/perf/baseline.hpp"

#include <set>
#include <sstream>
#include <vector>

#include "sasim/baseline_data.hpp"
#include "sasim/error.hpp"

namespace sasim {
namespace perf {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

NumKind kind_of(const std::string& s) {
  if (s == "real") return NumKind::Real;
  if (s == "complex") return NumKind::Complex;
  throw ConfigError("baseline dtype must be real or complex, got " + s);
}

constexpr const char* kHeader =
    "kernel,in_rows,in_cols,w_rows,w_cols,dtype_in,dtype_w,latency,"
    "lower_bound,throughput,area_mm2,power_mw,source,multipliers";

}  // namespace

BaselineTable BaselineTable::from_csv(const std::string& text) {
  BaselineTable table;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw ConfigError("baseline CSV header mismatch");
  }
  std::set<std::string> seen;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 14) {
      throw ConfigError("baseline CSV row needs 14 cells: " + line);
    }
    PerfReport r;
    const auto kind = kernel_from_name(cells[0]);
    if (!kind) throw ConfigError("unknown baseline kernel " + cells[0]);
    r.kernel.kind = *kind;
    r.kernel.in_rows = std::stoll(cells[1]);
    r.kernel.in_cols = std::stoll(cells[2]);
    r.kernel.w_rows = std::stoll(cells[3]);
    r.kernel.w_cols = std::stoll(cells[4]);
    if (r.kernel.kind == KernelKind::MatchedFilter) {
      // The dataset stores the stream count in the second shape slot.
      r.kernel.streams = r.kernel.in_cols;
      r.kernel.in_cols = 1;
    }
    r.kernel.dtype_in = kind_of(cells[5]);
    r.kernel.dtype_w = kind_of(cells[6]);
    r.latency_cycles = std::stoll(cells[7]);
    r.lower_bound_cycles = std::stoll(cells[8]);
    r.throughput_gops = std::stod(cells[9]);
    r.area_mm2 = std::stod(cells[10]);
    r.power_mw = std::stod(cells[11]);
    const auto source = source_from_name(cells[12]);
    if (!source) throw ConfigError("unknown baseline source " + cells[12]);
    r.source = *source;
    r.multipliers = std::stoi(cells[13]);
    if (r.lower_bound_cycles > 0) {
      r.utilization_pct = 100.0 *
                          static_cast<double>(r.lower_bound_cycles) /
                          static_cast<double>(r.latency_cycles);
    }
    const std::string uniq = report_key(r.kernel) + "|" + cells[12];
    if (!seen.insert(uniq).second) {
      throw ConfigError("duplicate baseline row " + uniq);
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

const BaselineTable& BaselineTable::shipped() {
  static const BaselineTable table = from_csv(kBaselineCsv);
  return table;
}

const PerfReport* BaselineTable::find(const std::string& key,
                                      Source source) const {
  for (const auto& row : rows) {
    if (row.source == source && report_key(row.kernel) == key) return &row;
  }
  return nullptr;
}

}  // namespace perf
}  // namespace sasim
