#include "sasim/fabric/schedule.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace sasim {
namespace fabric {

namespace {

const char* op_name(OpType t) {
  switch (t) {
    case OpType::LoadWeight: return "load_weight";
    case OpType::InjectTop: return "inject_top";
    case OpType::InjectLeft: return "inject_left";
    case OpType::ShiftDown: return "shift_down";
    case OpType::ShiftRight: return "shift_right";
    case OpType::FireMac: return "fire_mac";
    case OpType::DrainColumn: return "drain_column";
    case OpType::AccumulateWrite: return "accumulate_write";
  }
  return "unknown";
}

const char* space_name(RefSpace s) {
  switch (s) {
    case RefSpace::Operand0: return "in";
    case RefSpace::Operand1: return "w";
    case RefSpace::Scratch: return "scratch";
    case RefSpace::Zero: return "zero";
    case RefSpace::None: return "none";
  }
  return "none";
}

}  // namespace

int64_t Schedule::last_cycle() const {
  int64_t last = 0;
  for (const auto& op : ops) last = std::max<int64_t>(last, op.cycle);
  return last;
}

void Schedule::to_jsonl(std::ostream& os) const {
  for (const auto& op : ops) {
    nlohmann::ordered_json j;
    j["cycle"] = op.cycle;
    j["op"] = op_name(op.type);
    j["row"] = op.row;
    j["col"] = op.col;
    if (op.slot != 0xFFFF) j["slot"] = op.slot;
    if (op.words) j["words"] = op.words;
    if (op.type == OpType::FireMac) {
      j["latency"] = op.latency;
      j["mode"] = op.mode == PEMode::Accumulate ? "accumulate" : "elementwise";
    }
    if (op.a.space != RefSpace::None) {
      j["a"] = {{"space", space_name(op.a.space)}, {"index", op.a.index}};
    }
    if (op.b.space != RefSpace::None) {
      j["b"] = {{"space", space_name(op.b.space)}, {"index", op.b.index}};
    }
    if (op.type == OpType::FireMac || op.type == OpType::AccumulateWrite) {
      j["dest"] = op.dest;
    }
    os << j.dump() << "\n";
  }
}

}  // namespace fabric
}  // namespace sasim
