#include <algorithm>
#include <functional>
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

// Shared sliding-window engine. The filter sits in column segments in
// reverse order (first tap at the bottom); each window step shifts the
// resident input down by the stride and injects only the fresh samples,
// while window indices round-robin over the replica groups. Taps beyond
// the array capacity run as sequential chunks accumulating externally.
struct ConvJob {
  int64_t taps = 0;
  int64_t windows = 0;
  int64_t stride = 1;
  int64_t zero_from = 0;  // x indices >= this synthesize zeros (padding)
  bool conj_template = false;
  std::function<ValueRef(int64_t)> x_ref;     // sample index -> operand ref
  std::function<ValueRef(int64_t)> tap_ref;   // tap index -> weight ref
  std::function<uint32_t(int64_t)> dest_of;   // window index -> output index
};

void run_conv_job(ScheduleBuilder& b, const ConvJob& job, bool commit,
                  std::vector<int64_t>& col_last_fire, int64_t& cursor) {
  const auto& cfg = b.cfg();
  const int r = cfg.rows, c = cfg.cols;
  const int lat = b.mac_cycles();
  const int iw = b.in_words(), ww = b.w_words();
  const int64_t cap = static_cast<int64_t>(r) * c;
  const int64_t nchunks = ceil_div(job.taps, cap);

  for (int64_t ch = 0; ch < nchunks; ++ch) {
    const int64_t off = ch * cap;
    const int64_t kc = std::min(cap, job.taps - off);
    const int64_t g = ceil_div(kc, r);
    const int64_t ng = c / g;
    const int64_t seg = ceil_div(kc, g);
    const int64_t steady = std::min(seg, ng * job.stride);
    const int64_t period =
        std::max<int64_t>({static_cast<int64_t>(lat), steady,
                           ceil_div(steady * iw, cfg.top_reads_per_cycle)});
    const int extra = g > 1 ? ceil_log2(g) : 0;

    // Reverse-order load: the first tap of each segment lands on the
    // bottommost row of its column.
    int64_t ready = cursor;
    for (int64_t grp = 0; grp < ng; ++grp) {
      for (int64_t s = 0; s < g; ++s) {
        const int64_t len = std::min(seg, kc - s * seg);
        if (len <= 0) continue;
        const int col = static_cast<int>(grp * g + s);
        std::vector<WeightLoad> loads;
        for (int64_t e = len - 1; e >= 0; --e) {
          loads.push_back({static_cast<int>(len - 1 - e), 0,
                           job.tap_ref(off + s * seg + e), ww});
        }
        const int64_t earliest =
            std::max(cursor, col_last_fire[static_cast<size_t>(col)] + lat);
        ready = std::max(ready, b.load_weights(col, earliest, loads));
      }
    }

    std::vector<int64_t> next_base(static_cast<size_t>(ng), ready);
    for (int64_t w = 0; w < job.windows; ++w) {
      const int64_t grp = w % ng;
      const int64_t start = next_base[static_cast<size_t>(grp)];
      int64_t fire_at = start + period - 1;
      for (int64_t s = 0; s < g; ++s) {
        const int64_t len = std::min(seg, kc - s * seg);
        if (len <= 0) continue;
        const int col = static_cast<int>(grp * g + s);
        const int64_t tap_lo = off + s * seg;
        const int64_t fresh = w < ng ? len : std::min(len, ng * job.stride);
        int64_t t = start;
        for (int64_t q = 0; q < fresh; ++q) {
          const int64_t idx = w * job.stride + tap_lo + len - fresh + q;
          b.shift_down(col, start + q);
          if (idx >= job.zero_from) continue;  // padding, nothing to read
          const int64_t avail = b.inject_top(col, t, job.x_ref(idx), iw);
          t = avail + 1;
          fire_at = std::max(fire_at, avail);
        }
      }
      int64_t lastf = fire_at;
      for (int64_t s = 0; s < g; ++s) {
        const int64_t len = std::min(seg, kc - s * seg);
        if (len <= 0) continue;
        const int col = static_cast<int>(grp * g + s);
        for (int64_t e = 0; e < len; ++e) {
          const int64_t tap = off + s * seg + e;
          const int64_t idx = w * job.stride + tap;
          const ValueRef a =
              idx >= job.zero_from ? fabric::ref_zero() : job.x_ref(idx);
          const int row = static_cast<int>(len - 1 - e);
          const int64_t fc = std::max(fire_at, b.pe_free(row, col));
          b.fire(fc, row, col, -1, FireOp::Mac, a, job.tap_ref(tap),
                 job.conj_template, lat, DestSpace::Pending, job.dest_of(w));
          lastf = std::max(lastf, fc);
          col_last_fire[static_cast<size_t>(col)] =
              std::max(col_last_fire[static_cast<size_t>(col)], fc);
        }
      }
      if (commit && ch == nchunks - 1) {
        b.drain_write(lastf + lat + (r - seg) + extra + 1,
                      static_cast<int>(grp * g), job.dest_of(w));
      }
      next_base[static_cast<size_t>(grp)] =
          std::max(start, lastf - (period - 1)) + period;
      cursor = std::max(cursor, lastf + lat);
    }
  }
}

}  // namespace

// Single- and multi-channel 1-D convolution / FIR. Channels run back to
// back, each arranging its filter column over the replica groups.
fabric::Schedule map_conv1d(const KernelSpec& spec,
                            const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t k = spec.w_rows;
  const int64_t oc = spec.w_cols;
  const int64_t windows = spec.window_count();
  std::vector<int64_t> col_last_fire(static_cast<size_t>(cfg.cols), 0);
  int64_t cursor = 1;
  for (int64_t ch = 0; ch < oc; ++ch) {
    ConvJob job;
    job.taps = k;
    job.windows = windows;
    job.stride = spec.stride;
    job.zero_from = spec.in_rows;
    job.x_ref = [](int64_t idx) {
      return fabric::ref_in(static_cast<uint32_t>(idx));
    };
    job.tap_ref = [oc, ch](int64_t tap) {
      return fabric::ref_w(static_cast<uint32_t>(tap * oc + ch));
    };
    job.dest_of = [windows, ch](int64_t w) {
      return static_cast<uint32_t>(ch * windows + w);
    };
    run_conv_job(b, job, /*commit=*/true, col_last_fire, cursor);
  }
  return b.take();
}

// Sliding correlation against the conjugated template: the convolution
// engine with stride 1, N+1 lags per stream (the tail windows read
// synthesized zeros instead of SRAM) and streams scheduled back to back.
fabric::Schedule map_matched_filter(const KernelSpec& spec,
                                    const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.in_rows;
  const int64_t streams = spec.streams;
  const int64_t lags = n + 1;
  std::vector<int64_t> col_last_fire(static_cast<size_t>(cfg.cols), 0);
  int64_t cursor = 1;
  for (int64_t s = 0; s < streams; ++s) {
    ConvJob job;
    job.taps = spec.w_rows;
    job.windows = lags;
    job.stride = 1;
    job.zero_from = n;
    job.conj_template = true;
    job.x_ref = [streams, s](int64_t idx) {
      return fabric::ref_in(static_cast<uint32_t>(idx * streams + s));
    };
    job.tap_ref = [](int64_t tap) {
      return fabric::ref_w(static_cast<uint32_t>(tap));
    };
    job.dest_of = [streams, s](int64_t w) {
      return static_cast<uint32_t>(w * streams + s);
    };
    run_conv_job(b, job, /*commit=*/true, col_last_fire, cursor);
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
