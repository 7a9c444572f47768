#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sasim/fabric/schedule.hpp"
#include "sasim/tensor.hpp"

namespace sasim {
namespace fabric {

// Read-side accounting for one SRAM bank.
struct SramBank {
  enum class Side : uint8_t { Top, Left, Loopback };
  Side side = Side::Top;
  int index = 0;        // column for Top, row for Left
  int read_budget = 0;  // words per cycle
  int64_t total_reads = 0;
  int peak_reads_per_cycle = 0;
};

struct TraceEvent {
  int32_t cycle = 0;
  OpType op = OpType::FireMac;
  uint16_t row = 0;   // PE row or bank row
  uint16_t col = 0;   // PE col / bank id / accumulator
  uint16_t slot = 0xFFFF;
  uint8_t words = 0;
  uint8_t latency = 0;
  uint8_t loopback = 0;  // inject came from the reinjection buffer
  std::complex<double> value{0.0, 0.0};  // loaded weight / written output
};

using Trace = std::vector<TraceEvent>;

struct SimResult {
  Tensor output;
  int64_t latency_cycles = 0;
  int64_t mult_busy_cycles = 0;    // summed over PEs
  int64_t stall_cycles_memory = 0; // cycles with no multiplier active
  std::vector<SramBank> banks;
  std::optional<Trace> trace;

  int64_t bank_reads(SramBank::Side side) const;
};

// Per-PE run-time state during execution.
struct PEState {
  std::vector<std::complex<double>> weight_slots;
  std::vector<int32_t> slot_loaded_at;  // -1 when never loaded
  int64_t busy_until = 0;               // first free cycle of the multiplier
  uint16_t busy_slot = 0xFFFF;          // slot read by the in-flight MAC
};

// Execute a schedule against operand tensors. Deterministic; throws
// ResourceViolationError / ScheduleError on contract violations.
SimResult simulate(const Schedule& schedule,
                   const std::vector<Tensor>& operands,
                   const ArrayConfig& config, bool with_trace = false);

struct ResourceViolation {
  int64_t cycle = 0;
  std::string resource;
  std::string detail;
};

struct ResourceReport {
  std::vector<ResourceViolation> violations;
  std::vector<SramBank> banks;  // peak utilization per bank
  bool clean() const { return violations.empty(); }
};

// Static walk of a schedule checking per-cycle read budgets, column shift
// bandwidth and weight-buffer depths. Returns violations, never throws
// on budget problems.
ResourceReport assert_resources(const Schedule& schedule,
                                const ArrayConfig& config);

// Re-derive per-cycle budget and weight-stationary checks from an emitted
// trace. Used to audit simulation runs independently of the engine.
ResourceReport verify_trace(const Trace& trace, const ArrayConfig& config);

}  // namespace fabric
}  // namespace sasim
