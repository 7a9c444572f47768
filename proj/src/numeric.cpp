#include "sasim/numeric.hpp"

#include <cmath>
#include <string>

#include "sasim/kernel_spec.hpp"

namespace sasim {

Scalar Scalar::from_raw(int32_t raw) {
  if (raw > kMaxRaw || raw < kMinRaw) {
    throw OverflowError("fixed-point raw value " + std::to_string(raw) +
                        " outside the 16-bit operand range");
  }
  return Scalar(raw);
}

Scalar Scalar::from_double(double v) {
  // Round-to-nearest-even onto the 2^-15 grid.
  const double scaled = v * kScale;
  const double rounded = std::nearbyint(scaled);
  if (rounded > kMaxRaw || rounded < kMinRaw || !std::isfinite(v)) {
    throw OverflowError("value " + std::to_string(v) +
                        " not representable in Q1.15");
  }
  return Scalar(static_cast<int32_t>(rounded));
}

bool Scalar::representable(double v) {
  if (!std::isfinite(v)) return false;
  const double scaled = v * kScale;
  return scaled == std::nearbyint(scaled) && scaled <= kMaxRaw &&
         scaled >= kMinRaw;
}

CAccum cmul_exact(CValue a, CValue b) {
  const int64_t ar = a.re.raw(), ai = a.im.raw();
  const int64_t br = b.re.raw(), bi = b.im.raw();
  return {ar * br - ai * bi, ar * bi + ai * br};
}

int32_t round_q30_to_q15(int64_t q30) {
  // Arithmetic shift with round-to-nearest, ties to even.
  const int64_t half = int64_t{1} << (Scalar::kFracBits - 1);
  int64_t q = (q30 + half) >> Scalar::kFracBits;
  // Tie case: the discarded fraction was exactly one half.
  if ((q30 & ((int64_t{1} << Scalar::kFracBits) - 1)) == half && (q & 1)) {
    q -= 1;
  }
  if (q > Scalar::kMaxRaw || q < Scalar::kMinRaw) {
    throw OverflowError("accumulator writeback overflows the operand word");
  }
  return static_cast<int32_t>(q);
}

CValue accum_round(const CAccum& acc) {
  return {Scalar::from_raw(round_q30_to_q15(acc.re)),
          Scalar::from_raw(round_q30_to_q15(acc.im))};
}

CValue cmul(CValue a, CValue b) { return accum_round(cmul_exact(a, b)); }

int mult_factor(NumKind a, NumKind b) {
  const int fa = (a == NumKind::Complex) ? 2 : 1;
  const int fb = (b == NumKind::Complex) ? 2 : 1;
  return fa * fb;
}

namespace {

// MACs * factor, counting one multiplication and one addition per real
// multiply (a real MAC is 2 ops, a complex MAC 8).
OpCount mac_ops(int64_t macs, int factor) {
  OpCount c;
  c.real_mults = macs * factor;
  c.total_ops = 2 * c.real_mults;
  return c;
}

}  // namespace

OpCount count_ops(const KernelSpec& spec) {
  spec.validate();
  const int f = mult_factor(spec.dtype_in, spec.dtype_w);
  switch (spec.kind) {
    case KernelKind::MatVec:
      return mac_ops(spec.in_rows * spec.in_cols, f);
    case KernelKind::MatMul:
      return mac_ops(spec.in_rows * spec.in_cols * spec.w_cols, f);
    case KernelKind::Conv1D:
    case KernelKind::Fir:
      return mac_ops(spec.window_count() * spec.w_rows * spec.w_cols, f);
    case KernelKind::MatchedFilter:
      return mac_ops(spec.streams * (spec.in_rows + 1) * spec.w_rows, f);
    case KernelKind::VecMagSq:
      // Each magnitude-squared element is costed as one full complex MAC.
      return mac_ops(spec.in_rows, 4);
    case KernelKind::OuterProduct:
      return mac_ops(spec.in_rows * spec.in_cols * spec.w_cols, f);
    case KernelKind::TriSolve: {
      const int64_t n = spec.w_rows;
      OpCount c;
      c.real_mults = n + n * (n - 1) / 2;        // divisions + update mults
      c.total_ops = c.real_mults + n * (n - 1) / 2;  // plus update adds
      return c;
    }
    case KernelKind::Cholesky: {
      const int64_t n = spec.w_rows;
      int64_t mults = 0, adds = 0;
      for (int64_t k = 0; k < n; ++k) {
        mults += 2;             // invsqrt and reciprocal of the pivot
        mults += n - k;         // scaling the factor column
        for (int64_t j = k + 1; j < n; ++j) {
          mults += 1 + (n - j);  // alpha plus one multiply per update
          adds += n - j;
        }
      }
      OpCount c;
      c.real_mults = mults;
      c.total_ops = mults + adds;
      return c;
    }
  }
  throw ConfigError("unsupported kernel kind in count_ops");
}

}  // namespace sasim
