#include <algorithm>
#include <vector>

#include "sasim/mappers/builder.hpp"
#include "sasim/mappers/mappers.hpp"

namespace sasim {
namespace mappers {

using fabric::DestSpace;
using fabric::FireOp;
using fabric::ValueRef;

// Forward substitution, one outer iteration per column (j mod c). The
// running right-hand side lives in scratch; each solved x[j] multiplies
// the remaining coefficients of row j (the factor is stored transposed)
// on the iteration's column, and the updated values propagate rightward
// — wrapping from the rightmost column through the reinjection buffer
// back into the leftmost one.
fabric::Schedule map_trisolve(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.w_rows;
  const int r = cfg.rows, c = cfg.cols;
  const int lat = 1;  // real double datapath
  const int lng = cfg.long_op_latency;
  const uint32_t sx = static_cast<uint32_t>(n);       // x[j] slots
  const uint32_t srec = static_cast<uint32_t>(2 * n);  // reciprocal slots
  b.set_scratch(static_cast<uint32_t>(3 * n));

  // Right-hand side enters from the left banks and parks in scratch.
  std::vector<int64_t> b_avail(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const int row = static_cast<int>(i % r);
    const auto ref = fabric::ref_in(static_cast<uint32_t>(i));
    const int64_t avail = b.inject_left(row, 1, ref, 2);
    const int64_t fc =
        std::max(avail, b.pe_free(row, static_cast<int>((i / r) % c)));
    b.fire(fc, row, static_cast<int>((i / r) % c), -1, FireOp::Mov,
           ValueRef{}, ref, false, lat, DestSpace::Scratch,
           static_cast<uint32_t>(i));
    b_avail[static_cast<size_t>(i)] = fc + lat;
  }

  std::vector<int64_t> load_cursor(static_cast<size_t>(c), 1);
  int64_t wrap_avail = 0;
  for (int64_t j = 0; j < n; ++j) {
    const int col = static_cast<int>(j % c);
    // Coefficients a[j, j:] stream down this iteration's column.
    std::vector<WeightLoad> loads;
    for (int64_t i = j; i < n; ++i) {
      loads.push_back({static_cast<int>(i % r),
                       static_cast<int>((i - j) % cfg.pe_buffer_depth),
                       fabric::ref_w(static_cast<uint32_t>(j * n + i)), 2});
    }
    const int64_t ready =
        b.load_weights(col, load_cursor[static_cast<size_t>(col)], loads);
    load_cursor[static_cast<size_t>(col)] = ready;

    const int prow = static_cast<int>(j % r);
    const int64_t t0 =
        std::max({ready, b_avail[static_cast<size_t>(j)], wrap_avail});
    // 1/a[j,j], then x[j] = b[j] * recip.
    const int64_t trec = std::max(t0, b.pe_free(prow, col));
    b.fire(trec, prow, col, -1, FireOp::Recip, ValueRef{},
           fabric::ref_w(static_cast<uint32_t>(j * n + j)), false, lng,
           DestSpace::Scratch, srec + static_cast<uint32_t>(j));
    const int64_t tx = std::max(trec + lng, b.pe_free(prow, col));
    b.fire(tx, prow, col, -1, FireOp::Mul,
           fabric::ref_scratch(static_cast<uint32_t>(j)),
           fabric::ref_scratch(srec + static_cast<uint32_t>(j)), false, lat,
           DestSpace::Scratch, sx + static_cast<uint32_t>(j));
    const int64_t x_avail = tx + lat;
    const auto x_ref = fabric::ref_scratch(sx + static_cast<uint32_t>(j));
    // Commit x[j].
    const int64_t tm = std::max(x_avail, b.pe_free(prow, col));
    b.fire(tm, prow, col, -1, FireOp::Mov, ValueRef{}, x_ref, false, lat,
           DestSpace::Pending, static_cast<uint32_t>(j));
    b.drain_write(tm + lat + 1, col, static_cast<uint32_t>(j));
    // Fold x[j] into every remaining right-hand-side entry.
    for (int64_t i = j + 1; i < n; ++i) {
      const int row = static_cast<int>(i % r);
      const int64_t fc = std::max(x_avail, b.pe_free(row, col));
      b.fire(fc, row, col, -1, FireOp::MacSub,
             fabric::ref_w(static_cast<uint32_t>(j * n + i)), x_ref, false,
             lat, DestSpace::Scratch, static_cast<uint32_t>(i));
      b_avail[static_cast<size_t>(i)] =
          std::max(b_avail[static_cast<size_t>(i)], fc + lat);
    }
    // Hand over to the next column: one lateral hop, or a trip through
    // the reinjection buffer when wrapping off the right edge.
    if (j + 1 < n) {
      if (col == c - 1) {
        wrap_avail = b.inject_left(static_cast<int>((j + 1) % r),
                                   b_avail[static_cast<size_t>(j + 1)],
                                   ValueRef{}, 2, /*loopback=*/true);
      } else {
        wrap_avail = b_avail[static_cast<size_t>(j + 1)] + 1;
      }
    }
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
