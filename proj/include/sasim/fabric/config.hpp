#pragma once

#include <cstdint>

#include "sasim/numeric.hpp"

namespace sasim {
namespace fabric {

// Static description of the array: grid size, per-bank read budgets,
// buffer depths, shift bandwidth, injection points and MAC timing.
struct ArrayConfig {
  int rows = 8;
  int cols = 8;
  int top_reads_per_cycle = 2;   // per column bank
  int left_reads_per_cycle = 1;  // per row bank
  int pe_buffer_depth = 8;       // weight slots per PE
  int accumulators = 0;          // 0 means "one per column"
  double clock_ghz = 1.0;
  int column_shift_bandwidth = 1;  // b_c, words/cycle between vertical PEs
  int injection_points = 1;        // n_j per column
  int long_op_latency = 4;         // reciprocal / inverse-sqrt units
  int accumulator_port_words = 2;  // drain/write words per accumulator/cycle

  int accumulator_count() const { return accumulators > 0 ? accumulators : cols; }

  // Multiplier occupancy in cycles: 1 real*real, 2 mixed, 4 complex*complex.
  int mac_latency(NumKind a, NumKind b) const {
    const int f = mult_factor(a, b);
    return f == 1 ? 1 : (f == 2 ? 2 : 4);
  }

  int pe_count() const { return rows * cols; }

  void validate() const;
};

// Cycles for the last PE of a column to receive its word under the
// injection-region model: beta = ceil(rows / n_j) PEs per region,
// gamma = ceil(beta / b_c) pumps, total gamma + (gamma-1)*b_c + (b_c-1).
int64_t weight_load_latency(int rows, int injection_points,
                            int column_shift_bandwidth);

}  // namespace fabric
}  // namespace sasim
