#include "sasim/oracle.hpp"

#include <cmath>
#include <string>

namespace sasim {
namespace oracle {

namespace {

void require_shapes(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

bool is_q15(const Tensor& t) { return t.precision() == Precision::Q15; }

// a * conj(b) in the exact extended format.
CAccum cmul_conj_exact(CValue a, CValue b) {
  const int64_t ar = a.re.raw(), ai = a.im.raw();
  const int64_t br = b.re.raw(), bi = b.im.raw();
  return {ar * br + ai * bi, ai * br - ar * bi};
}

NumKind result_kind(const Tensor& a, const Tensor& b) {
  return (a.kind() == NumKind::Complex || b.kind() == NumKind::Complex)
             ? NumKind::Complex
             : NumKind::Real;
}

}  // namespace

Tensor ref_matmul(const Tensor& a, const Tensor& b) {
  require_shapes(a.cols() == b.rows(), "matmul shape mismatch");
  require_shapes(is_q15(a) && is_q15(b), "matmul expects Q15 operands");
  Tensor out = Tensor::zeros(a.rows(), b.cols(), result_kind(a, b));
  for (int64_t i = 0; i < a.rows(); ++i) {
    for (int64_t j = 0; j < b.cols(); ++j) {
      CAccum acc;
      for (int64_t k = 0; k < a.cols(); ++k) {
        acc.add(cmul_exact(a.fixed_at(i, k), b.fixed_at(k, j)));
      }
      out.set(i, j, accum_round(acc).to_complex());
    }
  }
  return out;
}

Tensor ref_matvec(const Tensor& a, const Tensor& w) {
  require_shapes(w.cols() == 1 && a.cols() == w.rows(),
                 "matvec shape mismatch");
  return ref_matmul(a, w);
}

Tensor ref_conv1d(const Tensor& x, const Tensor& h, int64_t stride,
                  int64_t window_count) {
  require_shapes(x.cols() == 1, "conv input must be a column vector");
  require_shapes(stride >= 1, "stride must be >= 1");
  require_shapes(h.rows() <= x.rows(), "filter longer than input");
  require_shapes(is_q15(x) && is_q15(h), "conv expects Q15 operands");
  const int64_t full = (x.rows() - h.rows()) / stride + 1;
  const int64_t windows = window_count < 0 ? full : window_count;
  require_shapes(windows >= 1 && windows <= full,
                 "window count outside valid range");
  Tensor out = Tensor::zeros(h.cols(), windows, result_kind(x, h));
  for (int64_t ch = 0; ch < h.cols(); ++ch) {
    for (int64_t j = 0; j < windows; ++j) {
      CAccum acc;
      for (int64_t k = 0; k < h.rows(); ++k) {
        acc.add(cmul_exact(x.fixed_at(j * stride + k, 0), h.fixed_at(k, ch)));
      }
      out.set(ch, j, accum_round(acc).to_complex());
    }
  }
  return out;
}

Tensor ref_matched_filter(const Tensor& x, const Tensor& h) {
  require_shapes(h.cols() == 1 && h.rows() <= x.rows(),
                 "matched filter template mismatch");
  require_shapes(is_q15(x) && is_q15(h), "matched filter expects Q15");
  const int64_t n = x.rows();
  const int64_t k = h.rows();
  const int64_t lags = n + 1;  // input zero-padded by the template length
  Tensor out = Tensor::zeros(lags, x.cols(), result_kind(x, h));
  for (int64_t s = 0; s < x.cols(); ++s) {
    for (int64_t lag = 0; lag < lags; ++lag) {
      CAccum acc;
      for (int64_t t = 0; t < k; ++t) {
        const int64_t idx = lag + t;
        if (idx >= n) continue;  // padding region contributes zero
        acc.add(cmul_conj_exact(x.fixed_at(idx, s), h.fixed_at(t, 0)));
      }
      out.set(lag, s, accum_round(acc).to_complex());
    }
  }
  return out;
}

Tensor ref_vecmagsq(const Tensor& x) {
  require_shapes(x.cols() == 1, "vecmagsq input must be a column vector");
  require_shapes(is_q15(x), "vecmagsq expects a Q15 operand");
  Tensor out = Tensor::zeros(x.rows(), 1, NumKind::Real);
  for (int64_t i = 0; i < x.rows(); ++i) {
    const CAccum acc = cmul_conj_exact(x.fixed_at(i, 0), x.fixed_at(i, 0));
    out.set(i, 0, accum_round(acc).to_complex());
  }
  return out;
}

Tensor ref_outer_product(const Tensor& a, const Tensor& b) {
  require_shapes(a.rows() == b.rows() && a.cols() == b.cols(),
                 "outer product operands must share the MxD shape");
  require_shapes(is_q15(a) && is_q15(b), "outer product expects Q15");
  const int64_t d = a.cols();
  Tensor out = Tensor::zeros(d, d, result_kind(a, b));
  for (int64_t i = 0; i < d; ++i) {
    for (int64_t j = 0; j < d; ++j) {
      CAccum acc;
      for (int64_t m = 0; m < a.rows(); ++m) {
        acc.add(cmul_exact(a.fixed_at(m, i), b.fixed_at(m, j)));
      }
      out.set(i, j, accum_round(acc).to_complex());
    }
  }
  return out;
}

Tensor ref_trisolve(const Tensor& a, const Tensor& b) {
  require_shapes(a.rows() == a.cols(), "triangular factor must be square");
  require_shapes(b.cols() == 1 && b.rows() == a.rows(),
                 "right-hand side must be an N-vector");
  const int64_t n = a.rows();
  std::vector<double> rhs(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) rhs[static_cast<size_t>(i)] = b.at(i, 0).real();
  Tensor out = Tensor::zeros(n, 1, NumKind::Real, Precision::F64);
  for (int64_t j = 0; j < n; ++j) {
    const double pivot = a.at(j, j).real();
    if (std::abs(pivot) < 1e-12) {
      throw SingularMatrixError("zero pivot at row " + std::to_string(j));
    }
    const double xj = rhs[static_cast<size_t>(j)] / pivot;
    out.set(j, 0, xj);
    for (int64_t i = j + 1; i < n; ++i) {
      rhs[static_cast<size_t>(i)] -= a.at(j, i).real() * xj;
    }
  }
  return out;
}

Tensor ref_cholesky(const Tensor& a) {
  require_shapes(a.rows() == a.cols(), "cholesky input must be square");
  const int64_t n = a.rows();
  // Working copy of the trailing matrix, updated right-looking.
  std::vector<double> w(static_cast<size_t>(n * n));
  for (int64_t i = 0; i < n * n; ++i) w[static_cast<size_t>(i)] = a.at(i).real();
  auto at = [&](int64_t r, int64_t c) -> double& {
    return w[static_cast<size_t>(r * n + c)];
  };
  Tensor out = Tensor::zeros(n, n, NumKind::Real, Precision::F64);
  for (int64_t k = 0; k < n; ++k) {
    const double pivot = at(k, k);
    if (pivot <= 0.0) {
      throw NotPositiveDefiniteError("non-positive pivot at step " +
                                     std::to_string(k));
    }
    const double invsqr = 1.0 / std::sqrt(pivot);
    const double inv = 1.0 / pivot;
    out.set(k, k, invsqr * pivot);
    for (int64_t i = k + 1; i < n; ++i) out.set(i, k, invsqr * at(k, i));
    for (int64_t j = k + 1; j < n; ++j) {
      const double alpha = inv * at(k, j);
      for (int64_t i = j; i < n; ++i) {
        at(j, i) -= alpha * at(k, i);
      }
    }
  }
  return out;
}

Tensor run(const KernelSpec& spec, const Tensor& input, const Tensor& weight) {
  spec.validate();
  switch (spec.kind) {
    case KernelKind::MatVec: return ref_matvec(input, weight);
    case KernelKind::MatMul: return ref_matmul(input, weight);
    case KernelKind::Conv1D:
    case KernelKind::Fir:
      return ref_conv1d(input, weight, spec.stride, spec.window_count());
    case KernelKind::MatchedFilter: return ref_matched_filter(input, weight);
    case KernelKind::VecMagSq: return ref_vecmagsq(input);
    case KernelKind::OuterProduct: return ref_outer_product(input, weight);
    case KernelKind::TriSolve: return ref_trisolve(weight, input);
    case KernelKind::Cholesky: return ref_cholesky(weight);
  }
  throw ConfigError("unsupported kernel kind");
}

}  // namespace oracle
}  // namespace sasim
