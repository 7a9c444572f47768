#include <algorithm>
#include <vector>

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

// out = A^T B accumulated over blocks of B rows. B rows are stacked
// vertically as 8-row tiles filling the movement-buffer slots (one
// resident group at a time); the matching A elements stream in from the
// left banks and are reused across all columns of the horizontal pass.
// Weight loads for the next group ride the otherwise idle top ports
// while the current group computes, and pending accumulators carry the
// partial sums across groups.
fabric::Schedule map_outer_product(const KernelSpec& spec,
                                   const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t m = spec.in_rows;
  const int64_t d = spec.in_cols;
  const int r = cfg.rows, c = cfg.cols;
  const int depth = cfg.pe_buffer_depth;
  const int lat = b.mac_cycles();
  const int iw = b.in_words(), ww = b.w_words();
  const int su = std::max(iw, lat);

  const int64_t group_rows = static_cast<int64_t>(r) * depth;
  const int64_t ngroups = ceil_div(m, group_rows);
  const int64_t th = ceil_div(d, c);

  // Last multiply that read each (column, slot); the next group's load
  // for that slot must wait for it to retire.
  std::vector<int64_t> slot_last_fire(
      static_cast<size_t>(c) * depth, 0);
  std::vector<int64_t> last_fire(static_cast<size_t>(c));

  int64_t block_base = 1;
  for (int64_t dt = 0; dt < th; ++dt) {
    const int64_t cols_h = std::min<int64_t>(c, d - dt * c);
    for (int64_t gi = 0; gi < ngroups; ++gi) {
      const int64_t g0 = gi * group_rows;
      const int64_t rows_g = std::min(group_rows, m - g0);
      const int64_t slots = ceil_div(rows_g, r);
      const int64_t period = slots * su;

      int64_t bb = block_base;
      for (int64_t col = 0; col < cols_h; ++col) {
        const int64_t wcol = dt * c + col;
        for (int64_t s = 0; s < slots; ++s) {
          const int64_t rows_s = std::min<int64_t>(r, rows_g - s * r);
          std::vector<WeightLoad> loads;
          for (int64_t rho = 0; rho < rows_s; ++rho) {
            loads.push_back(
                {static_cast<int>(rho), static_cast<int>(s),
                 fabric::ref_w(static_cast<uint32_t>((g0 + s * r + rho) * d +
                                                     wcol)),
                 ww});
          }
          const int64_t earliest =
              slot_last_fire[static_cast<size_t>(col * depth + s)] + lat;
          const int64_t ready =
              b.load_weights(static_cast<int>(col), earliest, loads);
          bb = std::max(bb, ready - s * su);
        }
      }

      for (int64_t i = 0; i < d; ++i) {
        const int64_t base_i = bb + i * period;
        std::fill(last_fire.begin(), last_fire.end(), 0);
        for (int64_t s = 0; s < slots; ++s) {
          const int64_t rows_s = std::min<int64_t>(r, rows_g - s * r);
          for (int64_t rho = 0; rho < rows_s; ++rho) {
            const auto ref = fabric::ref_in(
                static_cast<uint32_t>((g0 + s * r + rho) * d + i));
            const int64_t avail = b.inject_left(
                static_cast<int>(rho), base_i + s * su - (iw - 1), ref, iw);
            for (int64_t col = 0; col < cols_h; ++col) {
              const int64_t fc =
                  std::max({base_i + s * su + col, avail,
                            b.pe_free(static_cast<int>(rho),
                                      static_cast<int>(col))});
              b.fire(fc, static_cast<int>(rho), static_cast<int>(col),
                     static_cast<int>(s), FireOp::Mac, ValueRef{}, ref, false,
                     lat, DestSpace::Pending,
                     static_cast<uint32_t>(i * d + dt * c + col));
              auto& lf = last_fire[static_cast<size_t>(col)];
              lf = std::max(lf, fc);
              auto& slf =
                  slot_last_fire[static_cast<size_t>(col * depth + s)];
              slf = std::max(slf, fc);
            }
          }
        }
        if (gi == ngroups - 1) {
          for (int64_t col = 0; col < cols_h; ++col) {
            b.drain_write(last_fire[static_cast<size_t>(col)] + lat + 2,
                          static_cast<int>(col),
                          static_cast<uint32_t>(i * d + dt * c + col));
          }
        }
      }
      block_base = bb + d * period;
    }
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
