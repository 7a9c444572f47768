#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sasim/fabric/schedule.hpp"
#include "sasim/kernel_spec.hpp"

namespace sasim {
namespace mappers {

// One pending weight transfer into a PE buffer slot.
struct WeightLoad {
  int row = 0;
  int slot = 0;
  fabric::ValueRef ref;
  int words = 1;
};

// Emission helper shared by all mappers. Keeps per-cycle port bookkeeping
// (bank read budgets, column shift bandwidth, multiplier occupancy,
// accumulator drain/write bandwidth) so a mapper can place micro-ops
// greedily and get back the cycle an operation actually lands on.
// Cycle numbering starts at 1.
class ScheduleBuilder {
 public:
  ScheduleBuilder(const KernelSpec& spec, const fabric::ArrayConfig& cfg);

  const fabric::ArrayConfig& cfg() const { return cfg_; }
  int rows() const { return cfg_.rows; }
  int cols() const { return cfg_.cols; }

  // Multiplier occupancy for the kernel's operand kinds.
  int mac_cycles() const { return cfg_.mac_latency(spec_.dtype_in, spec_.dtype_w); }
  int in_words() const { return spec_.dtype_in == NumKind::Complex ? 2 : 1; }
  int w_words() const { return spec_.dtype_w == NumKind::Complex ? 2 : 1; }
  int out_words() const { return out_words_; }

  // First cycle a PE's multiplier is free.
  int64_t pe_free(int row, int col) const;

  // Streams a set of weights through one column bank starting no earlier
  // than `earliest`; returns the cycle from which all of them are usable
  // (port time plus injection-chain latency).
  int64_t load_weights(int col, int64_t earliest,
                       const std::vector<WeightLoad>& loads);

  // Injects one element (possibly several SRAM words) and returns the
  // cycle it becomes available to fires.
  int64_t inject_top(int col, int64_t earliest, fabric::ValueRef ref,
                     int words);
  int64_t inject_left(int row, int64_t earliest, fabric::ValueRef ref,
                      int words, bool loopback = false);

  // slot = -1 fires from the direct `a` reference instead of a buffer slot.
  void fire(int64_t cycle, int row, int col, int slot, fabric::FireOp fop,
            fabric::ValueRef a, fabric::ValueRef b, bool conj_b, int latency,
            fabric::DestSpace dest_space, uint32_t dest,
            fabric::PEMode mode = fabric::PEMode::Accumulate);

  // Advances a column's contents one row downward; picks the next cycle
  // with shift bandwidth available and returns it.
  int64_t shift_down(int col, int64_t earliest);

  // Drain a column partial into its accumulator and commit the pending
  // value to the output; returns the write cycle actually used.
  int64_t drain_write(int64_t earliest, int acc, uint32_t dest);
  // Element-wise commit without a column drain.
  int64_t write_only(int64_t earliest, int acc, uint32_t dest);

  void set_scratch(uint32_t size) { sched_.scratch_size = size; }

  fabric::Schedule take();

 private:
  int64_t port_place(uint16_t bank, int64_t earliest, int words);
  int64_t acc_place(std::vector<std::vector<int>>& used, int acc,
                    int64_t earliest, int words);

  const KernelSpec spec_;
  const fabric::ArrayConfig cfg_;
  int out_words_ = 1;
  fabric::Schedule sched_;
  std::vector<std::vector<uint8_t>> bank_used_;   // [bank][cycle]
  std::vector<std::vector<uint8_t>> shift_used_;  // [col][cycle]
  std::vector<std::vector<int>> drain_used_;      // [acc][cycle] words
  std::vector<std::vector<int>> write_used_;
  std::vector<int64_t> pe_free_;
};

}  // namespace mappers
}  // namespace sasim
