#include <algorithm>

#include "sasim/mappers/builder.hpp"
#include "sasim/mappers/mappers.hpp"

namespace sasim {
namespace mappers {

using fabric::DestSpace;
using fabric::FireOp;
using fabric::PEMode;
using fabric::ValueRef;

// Element-wise mode: no weights, every element is fed from its column's
// top bank, costed as one full complex multiply (4 cycles of multiplier
// occupancy), and routed out individually.
fabric::Schedule map_vecmagsq(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.in_rows;
  const int r = cfg.rows, c = cfg.cols;
  const int lat = cfg.mac_latency(NumKind::Complex, NumKind::Complex);
  const int iw = b.in_words();

  for (int64_t i = 0; i < n; ++i) {
    const int col = static_cast<int>(i % c);
    const int row = static_cast<int>((i / c) % r);
    const auto ref = fabric::ref_in(static_cast<uint32_t>(i));
    const int64_t avail = b.inject_top(col, 1 + i / c, ref, iw);
    const int64_t fc = std::max(avail, b.pe_free(row, col));
    b.fire(fc, row, col, -1, FireOp::MagSq, ValueRef{}, ref, false, lat,
           DestSpace::Pending, static_cast<uint32_t>(i),
           PEMode::ElementWise);
    b.write_only(fc + lat, col, static_cast<uint32_t>(i));
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
