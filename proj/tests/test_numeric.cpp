#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sasim/kernel_spec.hpp"
#include "sasim/numeric.hpp"

using namespace sasim;

TEST_CASE("round-to-nearest-even on the writeback path") {
  // q30 value exactly halfway between two q15 words: -1.5 ulps -> -2.
  CHECK(round_q30_to_q15(-3 * (1 << 14)) == -2);
  CHECK(round_q30_to_q15(3 * (1 << 14)) == 2);
  CHECK(round_q30_to_q15(1 << 14) == 0);  // 0.5 ulp ties to even 0
  CHECK(round_q30_to_q15((1 << 14) + 1) == 1);
  CHECK(round_q30_to_q15(-(1 << 14)) == 0);
  CHECK(round_q30_to_q15(5 * (1 << 14)) == 2);  // 2.5 -> 2
  CHECK(round_q30_to_q15(int64_t{7} << 15) == 7);
}

TEST_CASE("scalar construction quantizes and range-checks") {
  CHECK(Scalar::from_double(0.5).raw() == 1 << 14);
  CHECK(Scalar::from_double(-1.0).raw() == -32768);
  CHECK(Scalar::from_double(1.0 - 1.0 / 32768).raw() == 32767);
  CHECK_THROWS_AS(Scalar::from_double(1.0), OverflowError);
  CHECK_THROWS_AS(Scalar::from_raw(32768), OverflowError);
  // Ties to even on the operand grid too.
  CHECK(Scalar::from_double(1.5 / 32768).raw() == 2);
  CHECK(Scalar::from_double(2.5 / 32768).raw() == 2);
  CHECK(Scalar::representable(0.25));
  CHECK_FALSE(Scalar::representable(1.0 / 3.0));
}

TEST_CASE("exact complex products never round") {
  const CValue a{Scalar::from_raw(32767), Scalar::from_raw(-32768)};
  const CValue b{Scalar::from_raw(-32768), Scalar::from_raw(32767)};
  const CAccum p = cmul_exact(a, b);
  CHECK(p.re == int64_t{32767} * -32768 - int64_t{-32768} * 32767);
  CHECK(p.im == int64_t{32767} * 32767 + int64_t{-32768} * -32768);
}

TEST_CASE("accumulator writeback overflow raises") {
  CAccum acc{int64_t{32768} << 15, 0};  // rounds to +1.0, not representable
  CHECK_THROWS_AS(accum_round(acc), OverflowError);
}

TEST_CASE("multiplication cost factors") {
  CHECK(mult_factor(NumKind::Real, NumKind::Real) == 1);
  CHECK(mult_factor(NumKind::Real, NumKind::Complex) == 2);
  CHECK(mult_factor(NumKind::Complex, NumKind::Real) == 2);
  CHECK(mult_factor(NumKind::Complex, NumKind::Complex) == 4);
}

TEST_CASE("operation counts per kernel") {
  KernelSpec mv;
  mv.kind = KernelKind::MatVec;
  mv.in_rows = 1024;
  mv.in_cols = 4;
  mv.w_rows = 4;
  mv.w_cols = 1;
  mv.dtype_in = mv.dtype_w = NumKind::Complex;
  CHECK(count_ops(mv).real_mults == 16384);
  CHECK(count_ops(mv).total_ops == 32768);

  KernelSpec mf;
  mf.kind = KernelKind::MatchedFilter;
  mf.in_rows = 1024;
  mf.in_cols = 1;
  mf.w_rows = 32;
  mf.w_cols = 1;
  mf.streams = 8;
  mf.dtype_in = mf.dtype_w = NumKind::Complex;
  CHECK(count_ops(mf).real_mults == 8 * 1025 * 32 * 4);

  KernelSpec vms;
  vms.kind = KernelKind::VecMagSq;
  vms.in_rows = 512;
  vms.in_cols = 1;
  vms.dtype_in = vms.dtype_w = NumKind::Complex;
  CHECK(count_ops(vms).real_mults == 2048);  // costed as full complex MACs
  CHECK(count_ops(vms).total_ops == 4096);

  KernelSpec ts;
  ts.kind = KernelKind::TriSolve;
  ts.in_rows = 32;
  ts.in_cols = 1;
  ts.w_rows = ts.w_cols = 32;
  CHECK(count_ops(ts).real_mults == 32 + 32 * 31 / 2);
}
