#include <algorithm>
#include <vector>

#include "sasim/mappers/builder.hpp"
#include "sasim/mappers/mappers.hpp"

namespace sasim {
namespace mappers {

using fabric::DestSpace;
using fabric::FireOp;
using fabric::ValueRef;

// Right-looking Cholesky on the double datapath. The upper-triangular
// working copy of A lives in scratch; iteration k computes 1/sqrt(pivot)
// on column 0, emits column k of L from there, and spreads the trailing
// rank-1 update over the remaining array columns. Iterations are
// serialized by a barrier: the next pivot is only valid once every
// trailing update of the previous step has retired.
fabric::Schedule map_cholesky(const KernelSpec& spec,
                              const fabric::ArrayConfig& cfg) {
  ScheduleBuilder b(spec, cfg);
  const int64_t n = spec.w_rows;
  const int r = cfg.rows, c = cfg.cols;
  const int lat = 1;  // real double datapath
  const int lng = cfg.long_op_latency;
  const uint32_t nn = static_cast<uint32_t>(n * n);
  // Scratch layout: [0, n*n) upper-triangular working matrix (row-major,
  // entry (k, i) with k <= i), then per-pivot invsqrt / reciprocal, then
  // one alpha staging slot per trailing row.
  auto s_a = [n](int64_t k, int64_t i) {
    return static_cast<uint32_t>(k * n + i);
  };
  auto s_invsq = [nn, n](int64_t k) {
    return nn + static_cast<uint32_t>(k);
  };
  auto s_inv = [nn, n](int64_t k) {
    return nn + static_cast<uint32_t>(n + k);
  };
  auto s_alpha = [nn, n](int64_t j) {
    return nn + static_cast<uint32_t>(2 * n + j);
  };
  b.set_scratch(nn + static_cast<uint32_t>(3 * n));

  // Stage the upper triangle of A into scratch via the top banks.
  int64_t init_done = 1;
  for (int64_t k = 0; k < n; ++k) {
    for (int64_t i = k; i < n; ++i) {
      const int col = static_cast<int>(i % c);
      const int row = static_cast<int>(k % r);
      const auto ref = fabric::ref_in(static_cast<uint32_t>(k * n + i));
      const int64_t avail = b.inject_top(col, 1, ref, 2);
      const int64_t fc = std::max(avail, b.pe_free(row, col));
      b.fire(fc, row, col, -1, FireOp::Mov, ValueRef{}, ref, false, lat,
             DestSpace::Scratch, s_a(k, i));
      init_done = std::max(init_done, fc + lat);
    }
  }

  int64_t barrier = init_done;
  std::vector<int64_t> alpha_avail(static_cast<size_t>(n));
  for (int64_t k = 0; k < n; ++k) {
    const int prow = static_cast<int>(k % r);
    const auto pivot = fabric::ref_scratch(s_a(k, k));
    // invsqrt(pivot) on column 0, then L[k][k] = pivot * invsqrt and the
    // scalar reciprocal feeding the trailing update.
    const int64_t tq = std::max(barrier, b.pe_free(prow, 0));
    b.fire(tq, prow, 0, -1, FireOp::InvSqrt, ValueRef{}, pivot, false, lng,
           DestSpace::Scratch, s_invsq(k));
    const int64_t isq_avail = tq + lng;
    const auto isq = fabric::ref_scratch(s_invsq(k));
    const int64_t td = std::max(isq_avail, b.pe_free(prow, 0));
    b.fire(td, prow, 0, -1, FireOp::Mul, pivot, isq, false, lat,
           DestSpace::Pending, static_cast<uint32_t>(k * n + k));
    b.drain_write(td + lat + 1, 0, static_cast<uint32_t>(k * n + k));
    const int irow = static_cast<int>((k + 1) % r);
    const int64_t ti = std::max(isq_avail, b.pe_free(irow, 0));
    b.fire(ti, irow, 0, -1, FireOp::Mul, isq, isq, false, lat,
           DestSpace::Scratch, s_inv(k));
    const int64_t inv_avail = ti + lat;
    // Column k of L below the diagonal, still on array column 0.
    for (int64_t i = k + 1; i < n; ++i) {
      const int row = static_cast<int>(i % r);
      const int64_t fc = std::max(isq_avail, b.pe_free(row, 0));
      b.fire(fc, row, 0, -1, FireOp::Mul, fabric::ref_scratch(s_a(k, i)),
             isq, false, lat, DestSpace::Pending,
             static_cast<uint32_t>(i * n + k));
      b.drain_write(fc + lat + 1, 0, static_cast<uint32_t>(i * n + k));
    }
    // Trailing update: row j gets alpha = a[k][j]/pivot, then
    // a[j][i] -= alpha * a[k][i] for i >= j, spread over columns 1..c-1.
    int64_t iter_end = inv_avail;
    for (int64_t j = k + 1; j < n; ++j) {
      const int col = c > 1 ? 1 + static_cast<int>((j - k - 1) % (c - 1)) : 0;
      const int row = static_cast<int>(j % r);
      const int64_t fc = std::max(inv_avail, b.pe_free(row, col));
      b.fire(fc, row, col, -1, FireOp::Mul, fabric::ref_scratch(s_inv(k)),
             fabric::ref_scratch(s_a(k, j)), false, lat, DestSpace::Scratch,
             s_alpha(j));
      alpha_avail[static_cast<size_t>(j)] = fc + lat;
    }
    for (int64_t j = k + 1; j < n; ++j) {
      const int col = c > 1 ? 1 + static_cast<int>((j - k - 1) % (c - 1)) : 0;
      const auto alpha = fabric::ref_scratch(s_alpha(j));
      for (int64_t i = j; i < n; ++i) {
        const int row = static_cast<int>(i % r);
        const int64_t fc =
            std::max(alpha_avail[static_cast<size_t>(j)], b.pe_free(row, col));
        b.fire(fc, row, col, -1, FireOp::MacSub, alpha,
               fabric::ref_scratch(s_a(k, i)), false, lat, DestSpace::Scratch,
               s_a(j, i));
        iter_end = std::max(iter_end, fc + lat);
      }
    }
    barrier = iter_end;
  }
  return b.take();
}

}  // namespace mappers
}  // namespace sasim
