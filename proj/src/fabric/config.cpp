#include "sasim/fabric/config.hpp"

#include <string>

#include "sasim/error.hpp"

namespace sasim {
namespace fabric {

void ArrayConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
  };
  positive(rows, "rows");
  positive(cols, "cols");
  positive(top_reads_per_cycle, "top_reads_per_cycle");
  positive(left_reads_per_cycle, "left_reads_per_cycle");
  positive(pe_buffer_depth, "pe_buffer_depth");
  positive(column_shift_bandwidth, "column_shift_bandwidth");
  positive(injection_points, "injection_points");
  positive(long_op_latency, "long_op_latency");
  positive(accumulator_port_words, "accumulator_port_words");
  if (injection_points > rows) {
    throw ConfigError("injection_points cannot exceed the row count");
  }
  if (clock_ghz <= 0.0) throw ConfigError("clock_ghz must be positive");
}

int64_t weight_load_latency(int rows, int injection_points,
                            int column_shift_bandwidth) {
  if (rows < 1 || injection_points < 1 || injection_points > rows ||
      column_shift_bandwidth < 1) {
    throw ConfigError("weight_load_latency arguments outside valid domain");
  }
  const int64_t beta = (rows + injection_points - 1) / injection_points;
  const int64_t bc = column_shift_bandwidth;
  const int64_t gamma = (beta + bc - 1) / bc;
  return gamma + (gamma - 1) * bc + (bc - 1);
}

}  // namespace fabric
}  // namespace sasim
