#pragma once

#include <string>
#include <vector>

#include "sasim/perf/metrics.hpp"

namespace sasim {
namespace perf {

// Reference rows parsed from the shipped CSV dataset (spatial-array rows
// and HLS rows, keyed by kernel/shape/dtype + source).
struct BaselineTable {
  std::vector<PerfReport> rows;

  // Parse CSV text with the canonical header. Throws ConfigError on
  // malformed rows or duplicate keys within one source.
  static BaselineTable from_csv(const std::string& text);

  // The dataset compiled into the library.
  static const BaselineTable& shipped();

  const PerfReport* find(const std::string& key, Source source) const;
};

}  // namespace perf
}  // namespace sasim
