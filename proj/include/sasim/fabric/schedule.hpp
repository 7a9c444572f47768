#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sasim/fabric/config.hpp"
#include "sasim/numeric.hpp"

namespace sasim {
namespace fabric {

enum class OpType : uint8_t {
  LoadWeight,       // top bank -> PE weight slot
  InjectTop,        // top bank -> column operand stream
  InjectLeft,       // left bank (or loopback buffer) -> row operand stream
  ShiftDown,        // one vertical hop in a column (b_c budget applies)
  ShiftRight,       // one horizontal hop in a row
  FireMac,          // occupy a PE multiplier for its MAC latency
  DrainColumn,      // move a column partial into a bottom accumulator
  AccumulateWrite,  // round a pending accumulator and write the output word
};

enum class PEMode : uint8_t { Accumulate, ElementWise };

// Arithmetic performed by a FireMac.
enum class FireOp : uint8_t {
  Mac,      // pending[dest] += a * b
  MacSub,   // pending[dest] -= a * b
  MagSq,    // pending[dest] += |b|^2 (real lane)
  Mul,      // scratch/pending[dest] = a * b (overwrite)
  Mov,      // dest = b
  Recip,    // scratch[dest] = 1 / b       (F64 datapath only)
  InvSqrt,  // scratch[dest] = 1 / sqrt(b) (F64 datapath only)
};

// Where a value reference points.
enum class RefSpace : uint8_t {
  Operand0,  // first operand tensor (input)
  Operand1,  // second operand tensor (weight)
  Scratch,   // simulator-managed intermediate store
  Zero,      // synthesized zero (padding), never read from SRAM
  None,
};

struct ValueRef {
  RefSpace space = RefSpace::None;
  uint32_t index = 0;
};

inline ValueRef ref_in(uint32_t i) { return {RefSpace::Operand0, i}; }
inline ValueRef ref_w(uint32_t i) { return {RefSpace::Operand1, i}; }
inline ValueRef ref_scratch(uint32_t i) { return {RefSpace::Scratch, i}; }
inline ValueRef ref_zero() { return {RefSpace::Zero, 0}; }

// Destination space of a FireMac result.
enum class DestSpace : uint8_t { Pending, Scratch };

// One cycle-tagged micro-op. Field use varies by type; unused fields stay
// at their defaults. Kept compact: large schedules run to millions of ops.
struct MicroOp {
  int32_t cycle = 0;
  OpType type = OpType::FireMac;
  PEMode mode = PEMode::Accumulate;
  FireOp fop = FireOp::Mac;
  DestSpace dest_space = DestSpace::Pending;
  uint8_t words = 0;        // SRAM words consumed by injects/loads
  uint8_t latency = 1;      // multiplier occupancy for FireMac
  uint8_t conj_b = 0;       // FireMac uses conj of the b operand
  uint8_t loopback = 0;     // InjectLeft reads the reinjection buffer
  uint16_t row = 0;         // PE row / bank row
  uint16_t col = 0;         // PE col / bank col / accumulator index
  uint16_t slot = 0xFFFF;   // weight slot (LoadWeight, FireMac a-side)
  ValueRef a;               // LoadWeight source / FireMac a operand
  ValueRef b;               // FireMac b operand / inject source
  uint32_t dest = 0;        // pending-accumulator or scratch index
};

// Bank numbering: [0, cols) top banks, [cols, cols+rows) left banks,
// cols+rows is the loopback/reinjection buffer.
struct BankId {
  static uint16_t top(int col) { return static_cast<uint16_t>(col); }
  static uint16_t left(const ArrayConfig& cfg, int row) {
    return static_cast<uint16_t>(cfg.cols + row);
  }
  static uint16_t loopback(const ArrayConfig& cfg) {
    return static_cast<uint16_t>(cfg.cols + cfg.rows);
  }
  static int count(const ArrayConfig& cfg) { return cfg.cols + cfg.rows + 1; }
};

// A compiled micro-op program. Executing it twice yields identical
// results; all run-time state lives in the simulator.
struct Schedule {
  std::vector<MicroOp> ops;
  int64_t out_rows = 0;
  int64_t out_cols = 0;
  NumKind out_kind = NumKind::Real;
  Precision precision = Precision::Q15;
  uint32_t scratch_size = 0;
  std::string label;

  int64_t last_cycle() const;

  // Line-delimited JSON, one op per line, for inspection and golden files.
  void to_jsonl(std::ostream& os) const;
};

}  // namespace fabric
}  // namespace sasim
