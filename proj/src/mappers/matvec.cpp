#include <algorithm>
#include <vector>

#include "sasim/error.hpp"
#include "sasim/mappers/builder.hpp"
#include "sasim/mappers/mappers.hpp"

namespace sasim {
namespace mappers {

using fabric::DestSpace;
using fabric::FireOp;
using fabric::ValueRef;

namespace {

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

int ceil_log2(int64_t v) {
  int bits = 0;
  while ((int64_t{1} << bits) < v) ++bits;
  return bits;
}

}  // namespace

// Weight vector resident in the columns, one private input stream per
// column bank (no reuse across columns). Short vectors are replicated
// down each column; long ones are split into per-column segments whose
// partial sums meet in the group's accumulator. Vectors beyond the array
// capacity run as sequential chunks with external accumulation.
fabric::Schedule map_matvec(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.in_rows;
  const int64_t k = spec.in_cols;
  const int r = cfg.rows, c = cfg.cols;
  const int lat = b.mac_cycles();
  const int iw = b.in_words(), ww = b.w_words();

  if (k <= r) {
    // Replication: floor(r/k) copies of the vector per column.
    const int64_t rep = std::max<int64_t>(1, r / k);
    const int64_t period = std::max<int64_t>(k, ceil_div(lat, rep));
    int64_t base = 1;
    for (int col = 0; col < c; ++col) {
      std::vector<WeightLoad> loads;
      for (int64_t cp = 0; cp < rep; ++cp) {
        for (int64_t e = 0; e < k; ++e) {
          loads.push_back({static_cast<int>(cp * k + e), 0,
                           fabric::ref_w(static_cast<uint32_t>(e)), ww});
        }
      }
      base = std::max(base, b.load_weights(col, 1, loads));
    }
    for (int64_t i = 0; i < n; ++i) {
      const int col = static_cast<int>(i % c);
      const int64_t batch = i / c;
      const int64_t cp = batch % rep;
      const int64_t start = base + batch * period;
      int64_t last = start;
      for (int64_t e = 0; e < k; ++e) {
        const auto ref = fabric::ref_in(static_cast<uint32_t>(i * k + e));
        const int64_t avail = b.inject_top(col, start + e, ref, iw);
        const int row = static_cast<int>(cp * k + e);
        const int64_t fc = std::max({start + e, avail, b.pe_free(row, col)});
        b.fire(fc, row, col, 0, FireOp::Mac, ValueRef{}, ref, false, lat,
               DestSpace::Pending, static_cast<uint32_t>(i));
        last = std::max(last, fc);
      }
      const int64_t bottom = cp * k + k - 1;
      b.drain_write(last + lat + (r - 1 - bottom) + 1, col,
                    static_cast<uint32_t>(i));
    }
    return b.take();
  }

  // Segments: g adjacent columns share one input row; longer vectors fall
  // back to sequential chunks accumulating externally in the pending bank.
  const int64_t cap = static_cast<int64_t>(r) * c;
  const int64_t nchunks = ceil_div(k, cap);
  std::vector<int64_t> col_last_fire(static_cast<size_t>(c), 0);
  int64_t base = 1;
  for (int64_t ch = 0; ch < nchunks; ++ch) {
    const int64_t off = ch * cap;
    const int64_t kc = std::min(cap, k - off);
    const int64_t g = ceil_div(kc, r);
    const int64_t ng = c / g;
    const int64_t seg = ceil_div(kc, g);
    const int64_t period = std::max<int64_t>(seg, lat);
    int64_t ready = base;
    for (int64_t grp = 0; grp < ng; ++grp) {
      for (int64_t s = 0; s < g; ++s) {
        const int64_t len = std::min(seg, kc - s * seg);
        if (len <= 0) continue;
        const int col = static_cast<int>(grp * g + s);
        std::vector<WeightLoad> loads;
        for (int64_t e = 0; e < len; ++e) {
          loads.push_back(
              {static_cast<int>(e), 0,
               fabric::ref_w(static_cast<uint32_t>(off + s * seg + e)), ww});
        }
        const int64_t earliest =
            std::max(base, col_last_fire[static_cast<size_t>(col)] + lat);
        ready = std::max(ready, b.load_weights(col, earliest, loads));
      }
    }
    const int extra = g > 1 ? ceil_log2(g) : 0;
    int64_t chunk_end = ready;
    for (int64_t i = 0; i < n; ++i) {
      const int64_t grp = i % ng;
      const int64_t start = ready + (i / ng) * period;
      int64_t last = start;
      for (int64_t s = 0; s < g; ++s) {
        const int64_t len = std::min(seg, kc - s * seg);
        const int col = static_cast<int>(grp * g + s);
        for (int64_t e = 0; e < len; ++e) {
          const auto ref = fabric::ref_in(
              static_cast<uint32_t>(i * k + off + s * seg + e));
          const int64_t avail = b.inject_top(col, start + e, ref, iw);
          const int row = static_cast<int>(e);
          const int64_t fc = std::max({start + e, avail, b.pe_free(row, col)});
          b.fire(fc, row, col, 0, FireOp::Mac, ValueRef{}, ref, false, lat,
                 DestSpace::Pending, static_cast<uint32_t>(i));
          last = std::max(last, fc);
          col_last_fire[static_cast<size_t>(col)] =
              std::max(col_last_fire[static_cast<size_t>(col)], fc);
        }
      }
      if (ch == nchunks - 1) {
        b.drain_write(last + lat + (r - seg) + extra + 1,
                      static_cast<int>(grp * g), static_cast<uint32_t>(i));
      }
      chunk_end = std::max(chunk_end, last + lat);
    }
    base = chunk_end;
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
