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

}  // namespace

// Weight-stationary GEMM. The weight matrix is tiled onto the grid
// (vertical tiles buffered in the movement slots, horizontal passes over
// the column dimension); each input row enters at the left edge once per
// pass and is reused across every column while partial sums accumulate
// in-array. Short K is replicated vertically so several input rows
// stream in parallel.
fabric::Schedule map_matmul(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.in_rows;
  const int64_t k = spec.in_cols;
  const int64_t m = spec.w_cols;
  const int r = cfg.rows, c = cfg.cols;
  const int depth = cfg.pe_buffer_depth;
  const int lat = b.mac_cycles();
  const int iw = b.in_words(), ww = b.w_words();
  const int su = std::max(iw, lat);  // per-tile sub-period of a row

  const int64_t rep = k <= r ? std::max<int64_t>(1, r / k) : 1;
  const int64_t tv = k <= r ? 1 : ceil_div(k, r);
  const int64_t th = ceil_div(m, c);
  const int64_t slab_tiles = std::min<int64_t>(tv, depth);
  const int64_t nslabs = ceil_div(tv, slab_tiles);
  // With enough buffer slots every tile of every pass stays resident and
  // nothing is ever reloaded; otherwise tiles are reloaded per pass at
  // the cost of extra top-bank reads (the logged tradeoff).
  const bool all_resident = nslabs == 1 && th * tv <= depth;

  // PE row holding weight element k within tile s (copy cp).
  auto pe_row_of = [&](int64_t cp, int64_t s, int64_t kk) {
    return rep > 1 ? static_cast<int>(cp * k + kk)
                   : static_cast<int>(kk - s * r);
  };

  auto load_pass = [&](int64_t h, int64_t s0, int64_t tiles, int64_t earliest,
                       auto slot_of) {
    int64_t ready = earliest;
    const int64_t cols_h = std::min<int64_t>(c, m - h * c);
    for (int64_t col = 0; col < cols_h; ++col) {
      const int64_t wcol = h * c + col;
      std::vector<WeightLoad> loads;
      for (int64_t t = 0; t < tiles; ++t) {
        const int64_t s = s0 + t;
        for (int64_t kk = s * r; kk < std::min(k, (s + 1) * r); ++kk) {
          for (int64_t cp = 0; cp < rep; ++cp) {
            loads.push_back({pe_row_of(cp, s, kk), slot_of(h, t),
                             fabric::ref_w(static_cast<uint32_t>(kk * m + wcol)),
                             ww});
          }
        }
      }
      ready = std::max(ready,
                       b.load_weights(static_cast<int>(col), earliest, loads));
    }
    return ready;
  };

  // Streams every input row once and fires the resident tiles against it.
  // Returns the cycle after which all multiplies of the pass are retired.
  auto run_pass = [&](int64_t h, int64_t s0, int64_t tiles, int64_t base,
                      auto slot_of, bool commit) {
    const int64_t cols_h = std::min<int64_t>(c, m - h * c);
    const int64_t period = tiles * su;
    const int64_t batches = ceil_div(n, rep);
    int64_t end = base;
    std::vector<int64_t> last_fire(static_cast<size_t>(cols_h));
    for (int64_t batch = 0; batch < batches; ++batch) {
      const int64_t base_b = base + batch * period;
      for (int64_t cp = 0; cp < rep; ++cp) {
        const int64_t i = batch * rep + cp;
        if (i >= n) break;
        std::fill(last_fire.begin(), last_fire.end(), 0);
        for (int64_t t = 0; t < tiles; ++t) {
          const int64_t s = s0 + t;
          for (int64_t kk = s * r; kk < std::min(k, (s + 1) * r); ++kk) {
            const int row = pe_row_of(cp, s, kk);
            const auto ref =
                fabric::ref_in(static_cast<uint32_t>(i * k + kk));
            const int64_t avail =
                b.inject_left(row, base_b + t * su - (iw - 1), ref, iw);
            for (int64_t j = 0; j < cols_h; ++j) {
              const int64_t fc =
                  std::max({base_b + t * su + j, avail,
                            b.pe_free(row, static_cast<int>(j))});
              b.fire(fc, row, static_cast<int>(j), slot_of(h, t),
                     FireOp::Mac, ValueRef{}, ref, false, lat,
                     DestSpace::Pending,
                     static_cast<uint32_t>(i * m + h * c + j));
              auto& lf = last_fire[static_cast<size_t>(j)];
              lf = std::max(lf, fc);
              end = std::max(end, fc + lat);
            }
          }
        }
        if (commit) {
          const int64_t last_k = std::min(k, (s0 + tiles) * r) - 1;
          const int64_t bottom = pe_row_of(cp, s0 + tiles - 1, last_k);
          for (int64_t j = 0; j < cols_h; ++j) {
            b.drain_write(last_fire[static_cast<size_t>(j)] + lat +
                              (r - 1 - bottom) + 1 + cp,
                          static_cast<int>(j),
                          static_cast<uint32_t>(i * m + h * c + j));
          }
        }
      }
    }
    return end;
  };

  if (all_resident) {
    const auto slot_of = [tv](int64_t h, int64_t t) {
      return static_cast<int>(h * tv + t);
    };
    int64_t base = 1;
    for (int64_t h = 0; h < th; ++h) {
      base = std::max(base, load_pass(h, 0, tv, 1, slot_of));
    }
    for (int64_t h = 0; h < th; ++h) {
      base = run_pass(h, 0, tv, base, slot_of, /*commit=*/true);
    }
  } else {
    // Reload path: slots cycle per slab; passes run back to back.
    const auto slot_of = [](int64_t, int64_t t) {
      return static_cast<int>(t);
    };
    int64_t cursor = 1;
    for (int64_t slab = 0; slab < nslabs; ++slab) {
      const int64_t s0 = slab * slab_tiles;
      const int64_t tiles = std::min(slab_tiles, tv - s0);
      const bool commit = slab == nslabs - 1;
      for (int64_t h = 0; h < th; ++h) {
        const int64_t ready = load_pass(h, s0, tiles, cursor, slot_of);
        cursor = run_pass(h, s0, tiles, ready, slot_of, commit);
      }
    }
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
