#pragma once

#include <complex>
#include <cstdint>

#include "sasim/error.hpp"

namespace sasim {

enum class NumKind { Real, Complex };

// Storage/arithmetic precision of a tensor.
//   Q15 - 16-bit Q1.15 operands with 64-bit extended accumulation.
//   F64 - double-precision datapath (triangular solve, Cholesky).
enum class Precision { Q15, F64 };

// Signed Q1.15 fixed-point operand word.
//
// Construction from a double quantizes to the 2^-15 grid with
// round-to-nearest-even and range-checks the result; out-of-range values
// raise OverflowError rather than wrapping.
class Scalar {
 public:
  static constexpr int kFracBits = 15;
  static constexpr int32_t kScale = 1 << kFracBits;
  static constexpr int32_t kMaxRaw = 32767;
  static constexpr int32_t kMinRaw = -32768;

  constexpr Scalar() = default;

  static Scalar from_raw(int32_t raw);
  static Scalar from_double(double v);

  // True when v already lies exactly on the Q1.15 grid and in range.
  static bool representable(double v);

  constexpr int32_t raw() const { return raw_; }
  constexpr double to_double() const {
    return static_cast<double>(raw_) / kScale;
  }

  friend constexpr bool operator==(Scalar a, Scalar b) {
    return a.raw_ == b.raw_;
  }

 private:
  explicit constexpr Scalar(int32_t raw) : raw_(raw) {}
  int32_t raw_ = 0;
};

// Fixed-point complex operand. Real-kind values keep im == 0.
struct CValue {
  Scalar re;
  Scalar im;

  static CValue from_doubles(double re, double im) {
    return {Scalar::from_double(re), Scalar::from_double(im)};
  }
  std::complex<double> to_complex() const {
    return {re.to_double(), im.to_double()};
  }
  friend bool operator==(const CValue& a, const CValue& b) {
    return a.re == b.re && a.im == b.im;
  }
};

// Extended-precision complex accumulator in Q2.30. Products of Q1.15
// operands are exact here, and at least 2^20 of them can be summed
// without overflowing the 64-bit lanes.
struct CAccum {
  int64_t re = 0;
  int64_t im = 0;

  void add(const CAccum& p) {
    re += p.re;
    im += p.im;
  }
  void sub(const CAccum& p) {
    re -= p.re;
    im -= p.im;
  }
};

// Exact complex product in Q2.30; nothing is rounded.
CAccum cmul_exact(CValue a, CValue b);

// Complex product rounded back to Q1.15 on writeback
// (round-to-nearest-even). Raises OverflowError when the rounded result
// does not fit the operand word.
CValue cmul(CValue a, CValue b);

// Round an accumulator back to a Q1.15 operand pair.
CValue accum_round(const CAccum& acc);

// Round a raw Q2.30 lane to a Q1.15 raw word (round-to-nearest-even).
int32_t round_q30_to_q15(int64_t q30);

struct OpCount {
  int64_t real_mults = 0;
  int64_t total_ops = 0;  // multiplications + additions
};

// Real multiplications consumed by one MAC for the given operand kinds:
// 1 for real*real, 2 mixed, 4 for complex*complex.
int mult_factor(NumKind a, NumKind b);

struct KernelSpec;
OpCount count_ops(const KernelSpec& spec);

}  // namespace sasim
