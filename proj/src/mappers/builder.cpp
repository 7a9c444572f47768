#include "sasim/mappers/builder.hpp"

#include <algorithm>

#include "sasim/error.hpp"

namespace sasim {
namespace mappers {

using fabric::BankId;
using fabric::MicroOp;
using fabric::OpType;

ScheduleBuilder::ScheduleBuilder(const KernelSpec& spec,
                                 const fabric::ArrayConfig& cfg)
    : spec_(spec), cfg_(cfg) {
  spec.validate();
  cfg.validate();
  sched_.out_rows = spec.out_rows();
  sched_.out_cols = spec.out_cols();
  sched_.out_kind = spec.out_kind();
  sched_.precision = spec.precision();
  sched_.label = spec.describe();
  out_words_ = sched_.out_kind == NumKind::Complex ? 2 : 1;
  bank_used_.resize(static_cast<size_t>(BankId::count(cfg)));
  shift_used_.resize(static_cast<size_t>(cfg.cols));
  drain_used_.resize(static_cast<size_t>(cfg.accumulator_count()));
  write_used_.resize(static_cast<size_t>(cfg.accumulator_count()));
  pe_free_.assign(static_cast<size_t>(cfg.pe_count()), 1);
}

namespace {

// Grow-on-demand access into a per-cycle usage vector.
template <typename T>
T& slot_at(std::vector<T>& v, int64_t cycle) {
  if (cycle >= static_cast<int64_t>(v.size())) {
    v.resize(static_cast<size_t>(cycle) + 64, T{});
  }
  return v[static_cast<size_t>(cycle)];
}

}  // namespace

int64_t ScheduleBuilder::pe_free(int row, int col) const {
  return pe_free_[static_cast<size_t>(row) * cfg_.cols + col];
}

int64_t ScheduleBuilder::port_place(uint16_t bank, int64_t earliest,
                                    int words) {
  auto& used = bank_used_[bank];
  const int budget = bank < static_cast<uint16_t>(cfg_.cols)
                         ? cfg_.top_reads_per_cycle
                         : (bank == BankId::loopback(cfg_)
                                ? 1
                                : cfg_.left_reads_per_cycle);
  int64_t t = std::max<int64_t>(earliest, 1);
  while (slot_at(used, t) + words > budget) ++t;
  used[static_cast<size_t>(t)] = static_cast<uint8_t>(used[static_cast<size_t>(t)] + words);
  return t;
}

int64_t ScheduleBuilder::load_weights(int col, int64_t earliest,
                                      const std::vector<WeightLoad>& loads) {
  if (loads.empty()) return std::max<int64_t>(earliest, 1);
  const uint16_t bank = BankId::top(col);
  int64_t first = 0, last = 0;
  for (const auto& ld : loads) {
    if (ld.slot < 0 || ld.slot >= cfg_.pe_buffer_depth) {
      throw ScheduleError("weight load targets a slot beyond the buffer depth");
    }
    const int per_cycle = std::min(ld.words, cfg_.top_reads_per_cycle);
    int64_t t = 0;
    for (int w = 0; w < ld.words; w += per_cycle) {
      t = port_place(bank, t == 0 ? earliest : t, std::min(per_cycle, ld.words - w));
    }
    MicroOp op;
    op.cycle = static_cast<int32_t>(t);
    op.type = OpType::LoadWeight;
    op.row = static_cast<uint16_t>(ld.row);
    op.col = static_cast<uint16_t>(col);
    op.slot = static_cast<uint16_t>(ld.slot);
    op.words = static_cast<uint8_t>(ld.words);
    op.a = ld.ref;
    sched_.ops.push_back(op);
    if (first == 0) first = t;
    last = std::max(last, t);
  }
  const int64_t chain = fabric::weight_load_latency(
      cfg_.rows, cfg_.injection_points, cfg_.column_shift_bandwidth);
  return std::max(last + 1, first + chain);
}

int64_t ScheduleBuilder::inject_top(int col, int64_t earliest,
                                    fabric::ValueRef ref, int words) {
  const uint16_t bank = BankId::top(col);
  const int per_cycle = std::min(words, cfg_.top_reads_per_cycle);
  int64_t t = earliest;
  for (int w = 0; w < words; w += per_cycle) {
    const int chunk = std::min(per_cycle, words - w);
    t = port_place(bank, t, chunk);
    MicroOp op;
    op.cycle = static_cast<int32_t>(t);
    op.type = OpType::InjectTop;
    op.col = static_cast<uint16_t>(col);
    op.words = static_cast<uint8_t>(chunk);
    if (w + chunk >= words) op.b = ref;  // element usable once fully read
    sched_.ops.push_back(op);
    ++t;
  }
  return t - 1;
}

int64_t ScheduleBuilder::inject_left(int row, int64_t earliest,
                                     fabric::ValueRef ref, int words,
                                     bool loopback) {
  const uint16_t bank =
      loopback ? BankId::loopback(cfg_) : BankId::left(cfg_, row);
  const int budget = loopback ? 1 : cfg_.left_reads_per_cycle;
  const int per_cycle = std::min(words, budget);
  int64_t t = earliest;
  for (int w = 0; w < words; w += per_cycle) {
    const int chunk = std::min(per_cycle, words - w);
    t = port_place(bank, t, chunk);
    MicroOp op;
    op.cycle = static_cast<int32_t>(t);
    op.type = OpType::InjectLeft;
    op.row = static_cast<uint16_t>(row);
    op.words = static_cast<uint8_t>(chunk);
    op.loopback = loopback ? 1 : 0;
    if (w + chunk >= words) op.b = ref;
    sched_.ops.push_back(op);
    ++t;
  }
  return t - 1;
}

void ScheduleBuilder::fire(int64_t cycle, int row, int col, int slot,
                           fabric::FireOp fop, fabric::ValueRef a,
                           fabric::ValueRef b, bool conj_b, int latency,
                           fabric::DestSpace dest_space, uint32_t dest,
                           fabric::PEMode mode) {
  auto& free_at = pe_free_[static_cast<size_t>(row) * cfg_.cols + col];
  if (cycle < free_at) {
    throw ScheduleError("mapper fired PE (" + std::to_string(row) + "," +
                        std::to_string(col) + ") while busy");
  }
  free_at = cycle + latency;
  MicroOp op;
  op.cycle = static_cast<int32_t>(cycle);
  op.type = OpType::FireMac;
  op.mode = mode;
  op.fop = fop;
  op.dest_space = dest_space;
  op.latency = static_cast<uint8_t>(latency);
  op.conj_b = conj_b ? 1 : 0;
  op.row = static_cast<uint16_t>(row);
  op.col = static_cast<uint16_t>(col);
  op.slot = slot < 0 ? 0xFFFF : static_cast<uint16_t>(slot);
  op.a = a;
  op.b = b;
  op.dest = dest;
  sched_.ops.push_back(op);
}

int64_t ScheduleBuilder::shift_down(int col, int64_t earliest) {
  auto& used = shift_used_[static_cast<size_t>(col)];
  int64_t t = std::max<int64_t>(earliest, 1);
  while (slot_at(used, t) >= cfg_.column_shift_bandwidth) ++t;
  ++used[static_cast<size_t>(t)];
  MicroOp op;
  op.cycle = static_cast<int32_t>(t);
  op.type = OpType::ShiftDown;
  op.col = static_cast<uint16_t>(col);
  sched_.ops.push_back(op);
  return t;
}

int64_t ScheduleBuilder::acc_place(std::vector<std::vector<int>>& used,
                                   int acc, int64_t earliest, int words) {
  auto& v = used[static_cast<size_t>(acc)];
  int64_t t = std::max<int64_t>(earliest, 1);
  while (slot_at(v, t) + words > cfg_.accumulator_port_words) ++t;
  v[static_cast<size_t>(t)] += words;
  return t;
}

int64_t ScheduleBuilder::drain_write(int64_t earliest, int acc,
                                     uint32_t dest) {
  int64_t t = std::max<int64_t>(earliest, 1);
  // Find a cycle with both drain and write bandwidth left.
  for (;;) {
    auto& d = drain_used_[static_cast<size_t>(acc)];
    auto& w = write_used_[static_cast<size_t>(acc)];
    if (slot_at(d, t) + out_words_ <= cfg_.accumulator_port_words &&
        slot_at(w, t) + out_words_ <= cfg_.accumulator_port_words) {
      d[static_cast<size_t>(t)] += out_words_;
      w[static_cast<size_t>(t)] += out_words_;
      break;
    }
    ++t;
  }
  MicroOp drain;
  drain.cycle = static_cast<int32_t>(t);
  drain.type = OpType::DrainColumn;
  drain.col = static_cast<uint16_t>(acc);
  drain.words = static_cast<uint8_t>(out_words_);
  sched_.ops.push_back(drain);
  MicroOp op;
  op.cycle = static_cast<int32_t>(t);
  op.type = OpType::AccumulateWrite;
  op.col = static_cast<uint16_t>(acc);
  op.words = static_cast<uint8_t>(out_words_);
  op.dest = dest;
  sched_.ops.push_back(op);
  return t;
}

int64_t ScheduleBuilder::write_only(int64_t earliest, int acc,
                                    uint32_t dest) {
  const int64_t t = acc_place(write_used_, acc, earliest, out_words_);
  MicroOp op;
  op.cycle = static_cast<int32_t>(t);
  op.type = OpType::AccumulateWrite;
  op.col = static_cast<uint16_t>(acc);
  op.words = static_cast<uint8_t>(out_words_);
  op.dest = dest;
  sched_.ops.push_back(op);
  return t;
}

fabric::Schedule ScheduleBuilder::take() {
  if (sched_.ops.empty()) {
    throw ScheduleError("mapper produced an empty schedule");
  }
  return std::move(sched_);
}

}  // namespace mappers
}  // namespace sasim
