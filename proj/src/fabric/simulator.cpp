#include "sasim/fabric/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sasim {
namespace fabric {

namespace {

constexpr int32_t kNotAvailable = INT32_MAX;

std::string at_cycle(int64_t cycle) {
  return " at cycle " + std::to_string(cycle);
}

// Exact conversion back to raw Q1.15 words; tensor construction guarantees
// grid membership for Q15 data.
CValue to_cvalue(std::complex<double> z) {
  return {Scalar::from_raw(static_cast<int32_t>(std::llround(
              z.real() * Scalar::kScale))),
          Scalar::from_raw(static_cast<int32_t>(std::llround(
              z.imag() * Scalar::kScale)))};
}

struct BankState {
  SramBank info;
  int reads_this_cycle = 0;
};

std::vector<BankState> make_banks(const ArrayConfig& cfg) {
  std::vector<BankState> banks(static_cast<size_t>(BankId::count(cfg)));
  for (int c = 0; c < cfg.cols; ++c) {
    auto& b = banks[BankId::top(c)].info;
    b.side = SramBank::Side::Top;
    b.index = c;
    b.read_budget = cfg.top_reads_per_cycle;
  }
  for (int r = 0; r < cfg.rows; ++r) {
    auto& b = banks[BankId::left(cfg, r)].info;
    b.side = SramBank::Side::Left;
    b.index = r;
    b.read_budget = cfg.left_reads_per_cycle;
  }
  auto& lb = banks[BankId::loopback(cfg)].info;
  lb.side = SramBank::Side::Loopback;
  lb.index = 0;
  lb.read_budget = 1;
  return banks;
}

uint16_t inject_bank(const ArrayConfig& cfg, const MicroOp& op) {
  if (op.type == OpType::InjectTop || op.type == OpType::LoadWeight) {
    return BankId::top(op.col);
  }
  return op.loopback ? BankId::loopback(cfg) : BankId::left(cfg, op.row);
}

// Shared per-cycle resource walk used by both simulate() and
// assert_resources(). `on_violation` either records or throws.
class ResourceTracker {
 public:
  ResourceTracker(const ArrayConfig& cfg, std::vector<BankState>& banks)
      : cfg_(cfg),
        banks_(banks),
        shift_down_(static_cast<size_t>(cfg.cols), 0),
        drains_(static_cast<size_t>(cfg.accumulator_count()), 0),
        writes_(static_cast<size_t>(cfg.accumulator_count()), 0) {}

  void begin_cycle() {
    for (auto& b : banks_) b.reads_this_cycle = 0;
    std::fill(shift_down_.begin(), shift_down_.end(), 0);
    std::fill(drains_.begin(), drains_.end(), 0);
    std::fill(writes_.begin(), writes_.end(), 0);
  }

  // Returns a violation description or empty string.
  std::string account(const MicroOp& op) {
    switch (op.type) {
      case OpType::LoadWeight:
      case OpType::InjectTop:
      case OpType::InjectLeft: {
        auto& b = banks_[inject_bank(cfg_, op)];
        b.reads_this_cycle += op.words;
        b.info.total_reads += op.words;
        b.info.peak_reads_per_cycle =
            std::max(b.info.peak_reads_per_cycle, b.reads_this_cycle);
        if (b.reads_this_cycle > b.info.read_budget) {
          std::ostringstream os;
          os << (b.info.side == SramBank::Side::Top
                     ? "top bank "
                     : (b.info.side == SramBank::Side::Left ? "left bank "
                                                            : "loopback "))
             << b.info.index << ": " << b.reads_this_cycle
             << " reads exceed budget " << b.info.read_budget;
          return os.str();
        }
        return {};
      }
      case OpType::ShiftDown: {
        auto& count = shift_down_[op.col];
        if (++count > cfg_.column_shift_bandwidth) {
          return "column " + std::to_string(op.col) +
                 " shift bandwidth exceeded";
        }
        return {};
      }
      case OpType::DrainColumn: {
        drains_[op.col % drains_.size()] += std::max<int>(1, op.words);
        if (drains_[op.col % drains_.size()] > cfg_.accumulator_port_words) {
          return "accumulator " + std::to_string(op.col) +
                 " drain bandwidth exceeded";
        }
        return {};
      }
      case OpType::AccumulateWrite: {
        writes_[op.col % writes_.size()] += std::max<int>(1, op.words);
        if (writes_[op.col % writes_.size()] > cfg_.accumulator_port_words) {
          return "accumulator " + std::to_string(op.col) +
                 " write bandwidth exceeded";
        }
        return {};
      }
      default:
        return {};
    }
  }

 private:
  const ArrayConfig& cfg_;
  std::vector<BankState>& banks_;
  std::vector<int> shift_down_;
  std::vector<int> drains_;
  std::vector<int> writes_;
};

void check_geometry(const MicroOp& op, const ArrayConfig& cfg) {
  switch (op.type) {
    case OpType::LoadWeight:
    case OpType::FireMac:
      if (op.row >= cfg.rows || op.col >= cfg.cols) {
        throw ScheduleError("micro-op references PE (" +
                            std::to_string(op.row) + "," +
                            std::to_string(op.col) + ") outside the grid");
      }
      break;
    case OpType::InjectTop:
    case OpType::ShiftDown:
      if (op.col >= cfg.cols) {
        throw ScheduleError("micro-op references column outside the grid");
      }
      break;
    case OpType::InjectLeft:
    case OpType::ShiftRight:
      if (!op.loopback && op.row >= cfg.rows) {
        throw ScheduleError("micro-op references row outside the grid");
      }
      break;
    case OpType::DrainColumn:
    case OpType::AccumulateWrite:
      if (op.col >= cfg.accumulator_count()) {
        throw ScheduleError("micro-op references missing accumulator");
      }
      break;
  }
}

}  // namespace

int64_t SimResult::bank_reads(SramBank::Side side) const {
  int64_t total = 0;
  for (const auto& b : banks) {
    if (b.side == side) total += b.total_reads;
  }
  return total;
}

SimResult simulate(const Schedule& schedule,
                   const std::vector<Tensor>& operands,
                   const ArrayConfig& config, bool with_trace) {
  config.validate();
  if (schedule.ops.empty()) {
    throw ScheduleError("empty schedule: nothing to execute");
  }
  if (schedule.out_rows <= 0 || schedule.out_cols <= 0) {
    throw ScheduleError("schedule has no output shape");
  }

  std::vector<MicroOp> ops = schedule.ops;
  std::stable_sort(ops.begin(), ops.end(),
                   [](const MicroOp& a, const MicroOp& b) {
                     return a.cycle < b.cycle;
                   });

  const bool fixed = schedule.precision == Precision::Q15;
  const size_t out_size =
      static_cast<size_t>(schedule.out_rows * schedule.out_cols);

  // Operand availability: cycle at which each element was injected.
  std::vector<std::vector<int32_t>> avail;
  avail.reserve(operands.size());
  for (const auto& t : operands) {
    avail.emplace_back(static_cast<size_t>(t.size()), kNotAvailable);
  }

  std::vector<PEState> pes(static_cast<size_t>(config.pe_count()));
  for (auto& pe : pes) {
    pe.weight_slots.assign(static_cast<size_t>(config.pe_buffer_depth),
                           {0.0, 0.0});
    pe.slot_loaded_at.assign(static_cast<size_t>(config.pe_buffer_depth), -1);
  }
  auto pe_at = [&](const MicroOp& op) -> PEState& {
    return pes[static_cast<size_t>(op.row) * config.cols + op.col];
  };

  std::vector<CAccum> pending_fx;
  std::vector<std::complex<double>> pending_f64;
  if (fixed) {
    pending_fx.assign(out_size, CAccum{});
  } else {
    pending_f64.assign(out_size, {0.0, 0.0});
  }
  std::vector<std::complex<double>> scratch(schedule.scratch_size, {0.0, 0.0});
  std::vector<int32_t> scratch_avail(schedule.scratch_size, kNotAvailable);

  auto banks = make_banks(config);
  ResourceTracker tracker(config, banks);

  const int64_t horizon = schedule.last_cycle() + 8;
  std::vector<bool> busy_any(static_cast<size_t>(horizon) + 1, false);

  SimResult result;
  result.output = Tensor::zeros(schedule.out_rows, schedule.out_cols,
                                schedule.out_kind, schedule.precision);
  Trace trace;

  auto resolve = [&](const ValueRef& ref,
                     int64_t cycle) -> std::complex<double> {
    switch (ref.space) {
      case RefSpace::Zero:
        return {0.0, 0.0};
      case RefSpace::Scratch:
        if (ref.index >= scratch.size()) {
          throw ScheduleError("scratch reference out of range" +
                              at_cycle(cycle));
        }
        if (scratch_avail[ref.index] > cycle) {
          throw ScheduleError("scratch value read before it was produced" +
                              at_cycle(cycle));
        }
        return scratch[ref.index];
      case RefSpace::Operand0:
      case RefSpace::Operand1: {
        const size_t k = ref.space == RefSpace::Operand0 ? 0 : 1;
        if (k >= operands.size() ||
            ref.index >= static_cast<uint32_t>(operands[k].size())) {
          throw ScheduleError("operand reference out of range" +
                              at_cycle(cycle));
        }
        if (avail[k][ref.index] > cycle) {
          throw ScheduleError("operand element used before injection" +
                              at_cycle(cycle));
        }
        return operands[k].at(ref.index);
      }
      case RefSpace::None:
        break;
    }
    throw ScheduleError("unresolvable value reference" + at_cycle(cycle));
  };

  auto record_inject = [&](const ValueRef& ref, int64_t cycle) {
    if (ref.space == RefSpace::Operand0 || ref.space == RefSpace::Operand1) {
      const size_t k = ref.space == RefSpace::Operand0 ? 0 : 1;
      if (k >= operands.size() ||
          ref.index >= static_cast<uint32_t>(operands[k].size())) {
        throw ScheduleError("inject references missing operand element" +
                            at_cycle(cycle));
      }
      auto& a = avail[k][ref.index];
      a = std::min<int32_t>(a, static_cast<int32_t>(cycle));
    }
  };

  int64_t current_cycle = INT64_MIN;
  int64_t latency = 0;

  for (const auto& op : ops) {
    if (op.cycle < 1) {
      throw ScheduleError("micro-op scheduled before cycle 1");
    }
    check_geometry(op, config);
    if (op.cycle != current_cycle) {
      current_cycle = op.cycle;
      tracker.begin_cycle();
    }
    if (auto v = tracker.account(op); !v.empty()) {
      throw ResourceViolationError(v + at_cycle(op.cycle));
    }
    latency = std::max<int64_t>(latency, op.cycle);

    switch (op.type) {
      case OpType::LoadWeight: {
        auto& pe = pe_at(op);
        if (op.slot >= config.pe_buffer_depth) {
          throw ScheduleError("weight buffer overflow: slot " +
                              std::to_string(op.slot) + " exceeds depth " +
                              std::to_string(config.pe_buffer_depth));
        }
        if (pe.busy_until > op.cycle && pe.busy_slot == op.slot) {
          throw ScheduleError(
              "weight overwritten while a dependent multiply is in flight" +
              at_cycle(op.cycle));
        }
        // The load itself is the SRAM read that makes the element visible.
        record_inject(op.a, op.cycle);
        const auto v = resolve(op.a, op.cycle);
        pe.weight_slots[op.slot] = v;
        pe.slot_loaded_at[op.slot] = op.cycle;
        if (with_trace) {
          trace.push_back({op.cycle, op.type, op.row, op.col, op.slot,
                           op.words, 0, 0, v});
        }
        break;
      }
      case OpType::InjectTop:
      case OpType::InjectLeft: {
        record_inject(op.b, op.cycle);
        if (with_trace) {
          trace.push_back({op.cycle, op.type, op.row, op.col, op.slot,
                           op.words, 0, op.loopback, {0.0, 0.0}});
        }
        break;
      }
      case OpType::ShiftDown:
      case OpType::ShiftRight:
      case OpType::DrainColumn: {
        if (with_trace) {
          trace.push_back({op.cycle, op.type, op.row, op.col, op.slot,
                           op.words, 0, 0, {0.0, 0.0}});
        }
        break;
      }
      case OpType::FireMac: {
        auto& pe = pe_at(op);
        if (pe.busy_until > op.cycle) {
          throw ScheduleError("multiplier fired while busy" +
                              at_cycle(op.cycle));
        }
        std::complex<double> a_val{0.0, 0.0};
        bool a_from_slot = false;
        if (op.slot != 0xFFFF) {
          if (op.slot >= config.pe_buffer_depth ||
              pe.slot_loaded_at[op.slot] < 0 ||
              pe.slot_loaded_at[op.slot] > op.cycle) {
            throw ScheduleError("fire reads an unloaded weight slot" +
                                at_cycle(op.cycle));
          }
          a_val = pe.weight_slots[op.slot];
          a_from_slot = true;
        } else if (op.a.space != RefSpace::None) {
          a_val = resolve(op.a, op.cycle);
        }
        std::complex<double> b_val = op.b.space == RefSpace::None
                                         ? std::complex<double>{0.0, 0.0}
                                         : resolve(op.b, op.cycle);
        if (op.conj_b) b_val = std::conj(b_val);

        const int lat = op.latency;
        pe.busy_until = op.cycle + lat;
        pe.busy_slot = a_from_slot ? op.slot : 0xFFFF;
        result.mult_busy_cycles += lat;
        for (int64_t t = op.cycle; t < op.cycle + lat && t <= horizon; ++t) {
          busy_any[static_cast<size_t>(t)] = true;
        }
        const int64_t done = op.cycle + lat - 1;
        latency = std::max(latency, done);

        if (fixed) {
          if (op.dest_space != DestSpace::Pending ||
              op.dest >= pending_fx.size()) {
            throw ScheduleError("fixed-point fire with bad destination" +
                                at_cycle(op.cycle));
          }
          const CValue a_fx = to_cvalue(a_val);
          CValue b_fx = to_cvalue(b_val);
          CAccum prod;
          switch (op.fop) {
            case FireOp::Mac:
            case FireOp::MacSub:
            case FireOp::Mul:
              prod = cmul_exact(a_fx, b_fx);
              break;
            case FireOp::MagSq: {
              const int64_t br = b_fx.re.raw(), bi = b_fx.im.raw();
              prod = {br * br + bi * bi, 0};
              break;
            }
            default:
              throw ScheduleError(
                  "operation unsupported on the fixed-point datapath" +
                  at_cycle(op.cycle));
          }
          if (op.fop == FireOp::MacSub) {
            pending_fx[op.dest].sub(prod);
          } else if (op.fop == FireOp::Mul) {
            pending_fx[op.dest] = prod;
          } else {
            pending_fx[op.dest].add(prod);
          }
        } else {
          std::complex<double> value;
          switch (op.fop) {
            case FireOp::Mac:
            case FireOp::MacSub:
            case FireOp::Mul:
              value = a_val * b_val;
              break;
            case FireOp::MagSq:
              value = {std::norm(b_val), 0.0};
              break;
            case FireOp::Mov:
              value = b_val;
              break;
            case FireOp::Recip:
              if (std::abs(b_val) < 1e-12) {
                throw SingularMatrixError("reciprocal of a zero pivot" +
                                          at_cycle(op.cycle));
              }
              value = 1.0 / b_val;
              break;
            case FireOp::InvSqrt:
              if (b_val.real() <= 0.0 || b_val.imag() != 0.0) {
                throw NotPositiveDefiniteError(
                    "inverse square root of a non-positive pivot" +
                    at_cycle(op.cycle));
              }
              value = 1.0 / std::sqrt(b_val.real());
              break;
          }
          if (op.dest_space == DestSpace::Scratch) {
            if (op.dest >= scratch.size()) {
              throw ScheduleError("scratch destination out of range" +
                                  at_cycle(op.cycle));
            }
            if (op.fop == FireOp::Mac) {
              scratch[op.dest] += value;
            } else if (op.fop == FireOp::MacSub) {
              scratch[op.dest] -= value;
            } else {
              scratch[op.dest] = value;
            }
            scratch_avail[op.dest] =
                static_cast<int32_t>(op.cycle + lat);
          } else {
            if (op.dest >= pending_f64.size()) {
              throw ScheduleError("pending destination out of range" +
                                  at_cycle(op.cycle));
            }
            switch (op.fop) {
              case FireOp::MacSub:
                pending_f64[op.dest] -= value;
                break;
              case FireOp::Mul:
              case FireOp::Mov:
                pending_f64[op.dest] = value;
                break;
              default:
                pending_f64[op.dest] += value;
                break;
            }
          }
        }
        if (with_trace) {
          trace.push_back({op.cycle, op.type, op.row, op.col, op.slot, 0,
                           static_cast<uint8_t>(lat), 0, {0.0, 0.0}});
        }
        break;
      }
      case OpType::AccumulateWrite: {
        if (op.dest >= out_size) {
          throw ScheduleError("output write out of range" + at_cycle(op.cycle));
        }
        std::complex<double> value;
        if (fixed) {
          value = accum_round(pending_fx[op.dest]).to_complex();
          pending_fx[op.dest] = CAccum{};
        } else {
          value = pending_f64[op.dest];
          pending_f64[op.dest] = {0.0, 0.0};
        }
        if (schedule.out_kind == NumKind::Real && value.imag() != 0.0) {
          throw ScheduleError("nonzero imaginary part written to real output" +
                              at_cycle(op.cycle));
        }
        result.output.set(op.dest, value);
        if (with_trace) {
          trace.push_back({op.cycle, op.type, op.row, op.col, op.slot, 0, 0, 0,
                           value});
        }
        break;
      }
    }
  }

  result.latency_cycles = latency;
  int64_t busy_cycles = 0;
  for (int64_t t = 1; t <= latency && t <= horizon; ++t) {
    if (busy_any[static_cast<size_t>(t)]) ++busy_cycles;
  }
  result.stall_cycles_memory = latency - busy_cycles;
  result.banks.reserve(banks.size());
  for (const auto& b : banks) result.banks.push_back(b.info);
  if (with_trace) result.trace = std::move(trace);
  return result;
}

ResourceReport assert_resources(const Schedule& schedule,
                                const ArrayConfig& config) {
  config.validate();
  ResourceReport report;
  auto banks = make_banks(config);
  ResourceTracker tracker(config, banks);

  std::vector<MicroOp> ops = schedule.ops;
  std::stable_sort(ops.begin(), ops.end(),
                   [](const MicroOp& a, const MicroOp& b) {
                     return a.cycle < b.cycle;
                   });
  int64_t current_cycle = INT64_MIN;
  for (const auto& op : ops) {
    if (op.cycle != current_cycle) {
      current_cycle = op.cycle;
      tracker.begin_cycle();
    }
    try {
      check_geometry(op, config);
    } catch (const ScheduleError& e) {
      report.violations.push_back({op.cycle, "geometry", e.what()});
      continue;
    }
    if (op.type == OpType::LoadWeight && op.slot >= config.pe_buffer_depth) {
      report.violations.push_back(
          {op.cycle, "weight buffer",
           "slot " + std::to_string(op.slot) + " exceeds depth " +
               std::to_string(config.pe_buffer_depth)});
    }
    if (auto v = tracker.account(op); !v.empty()) {
      report.violations.push_back({op.cycle, "budget", v});
    }
    if (report.violations.size() >= 256) break;  // enough to diagnose
  }
  report.banks.reserve(banks.size());
  for (const auto& b : banks) report.banks.push_back(b.info);
  return report;
}

ResourceReport verify_trace(const Trace& trace, const ArrayConfig& config) {
  ResourceReport report;
  auto banks = make_banks(config);

  // Per-cycle read totals, rebuilt from the raw events.
  std::vector<int> reads(banks.size(), 0);
  int64_t cycle = INT64_MIN;
  // In-flight MACs per PE: (busy-until, slot).
  std::vector<std::pair<int64_t, uint16_t>> busy(
      static_cast<size_t>(config.pe_count()), {0, 0xFFFF});

  for (const auto& ev : trace) {
    if (ev.cycle != cycle) {
      cycle = ev.cycle;
      std::fill(reads.begin(), reads.end(), 0);
    }
    switch (ev.op) {
      case OpType::LoadWeight:
      case OpType::InjectTop:
      case OpType::InjectLeft: {
        MicroOp like;
        like.type = ev.op;
        like.row = ev.row;
        like.col = ev.col;
        like.loopback = ev.loopback;
        const uint16_t bank = inject_bank(config, like);
        reads[bank] += ev.words;
        if (reads[bank] > banks[bank].info.read_budget) {
          report.violations.push_back(
              {ev.cycle, "budget",
               "bank " + std::to_string(bank) + " exceeded its read budget"});
        }
        if (ev.op == OpType::LoadWeight) {
          auto& [until, slot] =
              busy[static_cast<size_t>(ev.row) * config.cols + ev.col];
          if (until > ev.cycle && slot == ev.slot) {
            report.violations.push_back(
                {ev.cycle, "weight-stationary",
                 "weight slot rewritten during an in-flight multiply"});
          }
        }
        break;
      }
      case OpType::FireMac: {
        auto& [until, slot] =
            busy[static_cast<size_t>(ev.row) * config.cols + ev.col];
        if (until > ev.cycle) {
          report.violations.push_back(
              {ev.cycle, "multiplier", "PE fired while busy"});
        }
        until = ev.cycle + ev.latency;
        slot = ev.slot;
        break;
      }
      default:
        break;
    }
  }
  for (const auto& b : banks) report.banks.push_back(b.info);
  return report;
}

}  // namespace fabric
}  // namespace sasim
