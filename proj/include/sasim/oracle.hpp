#pragma once

#include "sasim/kernel_spec.hpp"
#include "sasim/tensor.hpp"

namespace sasim {
namespace oracle {

// Golden reference implementations for all nine kernels. The Q15 kernels
// accumulate in the extended fixed-point format and round once on
// writeback, so the spatial-array simulation must match them bit for bit.

Tensor ref_matmul(const Tensor& a, const Tensor& b);
Tensor ref_matvec(const Tensor& a, const Tensor& w);

// Valid cross-correlation windows, one output row per filter column
// (output channel): out[ch][j] = sum_k x[j*stride + k] * h[k][ch].
Tensor ref_conv1d(const Tensor& x, const Tensor& h, int64_t stride,
                  int64_t window_count = -1);

// Sliding correlation against the conjugated template with w_rows zeros
// appended per stream; input columns are streams, output is
// (N + 1) x streams lags.
Tensor ref_matched_filter(const Tensor& x, const Tensor& h);

Tensor ref_vecmagsq(const Tensor& x);

// sum_m row_m(A)^T row_m(B); algebraically A^T * B.
Tensor ref_outer_product(const Tensor& a, const Tensor& b);

// Forward substitution where row j of A supplies the coefficients
// a[j, j:] (the triangular factor stored transposed). Double datapath.
Tensor ref_trisolve(const Tensor& a, const Tensor& b);

// Right-looking factorization returning lower-triangular L with
// L * L^T = A. Double datapath.
Tensor ref_cholesky(const Tensor& a);

// Dispatch on a KernelSpec with operand tensors in kernel order
// (input first, weight second).
Tensor run(const KernelSpec& spec, const Tensor& input, const Tensor& weight);

}  // namespace oracle
}  // namespace sasim
