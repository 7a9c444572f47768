#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "sasim/cli/commands.hpp"
#include "sasim/oracle.hpp"
#include "sasim/tensor.hpp"

using namespace sasim;

namespace {

// Independent fixed-point MAC chain on the raw words: exact 64-bit
// accumulation, one round-to-nearest-even at the end.
struct Acc {
  int64_t re = 0, im = 0;
  void mac(CValue a, CValue b, bool conj_b = false) {
    const int64_t ar = a.re.raw(), ai = a.im.raw();
    const int64_t br = b.re.raw();
    const int64_t bi = conj_b ? -int64_t{b.im.raw()} : b.im.raw();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  std::complex<double> rounded() const {
    return {round_q30_to_q15(re) / 32768.0, round_q30_to_q15(im) / 32768.0};
  }
};

KernelSpec make_spec(KernelKind kind, int64_t ir, int64_t ic, int64_t wr,
                     int64_t wc, NumKind din, NumKind dw) {
  KernelSpec s;
  s.kind = kind;
  s.in_rows = ir;
  s.in_cols = ic;
  s.w_rows = wr;
  s.w_cols = wc;
  s.dtype_in = din;
  s.dtype_w = dw;
  return s;
}

}  // namespace

TEST_CASE("matmul oracle matches a brute-force fixed-point product") {
  for (const auto kind : {NumKind::Real, NumKind::Complex}) {
    const auto spec =
        make_spec(KernelKind::MatMul, 13, 5, 5, 7, kind, kind);
    const auto [a, b] = cli::make_operands(spec, 7);
    const Tensor got = oracle::ref_matmul(a, b);
    for (int64_t i = 0; i < 13; ++i) {
      for (int64_t j = 0; j < 7; ++j) {
        Acc acc;
        for (int64_t k = 0; k < 5; ++k) {
          acc.mac(a.fixed_at(i, k), b.fixed_at(k, j));
        }
        CHECK(got.at(i, j) == acc.rounded());
      }
    }
  }
}

TEST_CASE("matvec oracle is the single-column matmul") {
  const auto spec = make_spec(KernelKind::MatVec, 9, 6, 6, 1,
                              NumKind::Complex, NumKind::Complex);
  const auto [a, w] = cli::make_operands(spec, 11);
  const Tensor got = oracle::ref_matvec(a, w);
  const Tensor ref = oracle::ref_matmul(a, w);
  CHECK(got == ref);
}

TEST_CASE("conv oracle: valid windows, strides and channels") {
  const auto spec = make_spec(KernelKind::Conv1D, 40, 1, 5, 3,
                              NumKind::Complex, NumKind::Real);
  const auto [x, h] = cli::make_operands(spec, 3);
  for (const int64_t stride : {1, 2, 3}) {
    const int64_t windows = (40 - 5) / stride + 1;
    const Tensor got = oracle::ref_conv1d(x, h, stride);
    REQUIRE(got.rows() == 3);
    REQUIRE(got.cols() == windows);
    for (int64_t ch = 0; ch < 3; ++ch) {
      for (int64_t w = 0; w < windows; ++w) {
        Acc acc;
        for (int64_t k = 0; k < 5; ++k) {
          acc.mac(x.fixed_at(w * stride + k, 0), h.fixed_at(k, ch));
        }
        CHECK(got.at(ch, w) == acc.rounded());
      }
    }
  }
}

TEST_CASE("matched filter: conjugated template, zero tail, streams") {
  KernelSpec spec = make_spec(KernelKind::MatchedFilter, 24, 1, 6, 1,
                              NumKind::Complex, NumKind::Complex);
  spec.streams = 3;
  const auto [x, h] = cli::make_operands(spec, 5);
  REQUIRE(x.cols() == 3);
  const Tensor got = oracle::ref_matched_filter(x, h);
  REQUIRE(got.rows() == 25);
  REQUIRE(got.cols() == 3);
  for (int64_t s = 0; s < 3; ++s) {
    for (int64_t lag = 0; lag <= 24; ++lag) {
      Acc acc;
      for (int64_t k = 0; k < 6; ++k) {
        const int64_t idx = lag + k;
        if (idx >= 24) continue;  // zero padding past the input
        acc.mac(x.fixed_at(idx, s), h.fixed_at(k, 0), /*conj_b=*/true);
      }
      CHECK(got.at(lag, s) == acc.rounded());
    }
  }
}

TEST_CASE("vecmagsq oracle") {
  const auto spec = make_spec(KernelKind::VecMagSq, 33, 1, 33, 1,
                              NumKind::Complex, NumKind::Complex);
  const auto [x, w] = cli::make_operands(spec, 17);
  const Tensor got = oracle::ref_vecmagsq(x);
  REQUIRE(got.kind() == NumKind::Real);
  for (int64_t i = 0; i < 33; ++i) {
    Acc acc;
    acc.mac(x.fixed_at(i, 0), x.fixed_at(i, 0), /*conj_b=*/true);
    CHECK(got.at(i, 0) == acc.rounded());
  }
}

TEST_CASE("outer product accumulates row outer products, equals A^T B") {
  const auto spec = make_spec(KernelKind::OuterProduct, 50, 4, 50, 4,
                              NumKind::Complex, NumKind::Complex);
  const auto [a, b] = cli::make_operands(spec, 23);
  const Tensor got = oracle::ref_outer_product(a, b);
  REQUIRE(got.rows() == 4);
  REQUIRE(got.cols() == 4);
  for (int64_t i = 0; i < 4; ++i) {
    for (int64_t j = 0; j < 4; ++j) {
      Acc acc;
      for (int64_t m = 0; m < 50; ++m) {
        acc.mac(a.fixed_at(m, i), b.fixed_at(m, j));
      }
      CHECK(got.at(i, j) == acc.rounded());
    }
  }
}

TEST_CASE("trisolve oracle solves the transposed-storage system") {
  KernelSpec spec = make_spec(KernelKind::TriSolve, 17, 1, 17, 17,
                              NumKind::Real, NumKind::Real);
  const auto [b, a] = cli::make_operands(spec, 31);
  const Tensor x = oracle::ref_trisolve(a, b);
  // Row j of the stored factor holds the coefficients a[j, j:]; solving
  // means M x = b with M[i][j] = stored(j, i). Verify by substitution.
  for (int64_t i = 0; i < 17; ++i) {
    double sum = 0.0;
    for (int64_t j = 0; j <= i; ++j) {
      sum += a.at(j, i).real() * x.at(j, 0).real();
    }
    CHECK(std::abs(sum - b.at(i, 0).real()) < 1e-10);
  }
}

TEST_CASE("cholesky oracle: L L^T reconstructs the matrix") {
  KernelSpec spec = make_spec(KernelKind::Cholesky, 12, 12, 12, 12,
                              NumKind::Real, NumKind::Real);
  const auto [a_in, a] = cli::make_operands(spec, 41);
  const Tensor l = oracle::ref_cholesky(a);
  for (int64_t i = 0; i < 12; ++i) {
    // Lower triangular with positive diagonal.
    CHECK(l.at(i, i).real() > 0.0);
    for (int64_t j = i + 1; j < 12; ++j) CHECK(l.at(i, j) == 0.0);
  }
  for (int64_t i = 0; i < 12; ++i) {
    for (int64_t j = 0; j <= i; ++j) {
      double sum = 0.0;
      for (int64_t k = 0; k < 12; ++k) {
        sum += l.at(i, k).real() * l.at(j, k).real();
      }
      // Stored upper-triangular entry (j, i) is the symmetric value.
      CHECK(std::abs(sum - a.at(j, i).real()) < 1e-9);
    }
  }
}

TEST_CASE("cholesky oracle rejects non-positive-definite input") {
  std::vector<std::complex<double>> vals = {{1.0, 0.0}, {4.0, 0.0},
                                            {0.0, 0.0}, {2.0, 0.0}};
  const Tensor bad =
      Tensor::from_doubles(2, 2, NumKind::Real, vals);  // 4^2 > 1*2
  CHECK_THROWS_AS(oracle::ref_cholesky(bad), NotPositiveDefiniteError);
}

TEST_CASE("trisolve oracle rejects a singular pivot") {
  std::vector<std::complex<double>> vals = {{0.0, 0.0}, {1.0, 0.0},
                                            {0.0, 0.0}, {1.0, 0.0}};
  const Tensor a = Tensor::from_doubles(2, 2, NumKind::Real, vals);
  std::vector<std::complex<double>> bv = {{1.0, 0.0}, {1.0, 0.0}};
  const Tensor b = Tensor::from_doubles(2, 1, NumKind::Real, bv);
  CHECK_THROWS_AS(oracle::ref_trisolve(a, b), SingularMatrixError);
}

TEST_CASE("dispatch runs the kernel named in KernelSpec") {
  const auto spec = make_spec(KernelKind::MatMul, 4, 3, 3, 2, NumKind::Real,
                              NumKind::Real);
  const auto [a, b] = cli::make_operands(spec, 2);
  CHECK(oracle::run(spec, a, b) == oracle::ref_matmul(a, b));
}
