#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sasim/numeric.hpp"

namespace sasim {

// Row-major 2-D operand array. Elements are stored as complex doubles;
// for Q15 tensors every component is guaranteed to lie on the Q1.15 grid
// (enforced at construction), so Q15 arithmetic on the raw words is
// recoverable exactly.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(int64_t rows, int64_t cols, NumKind kind,
                      Precision prec = Precision::Q15);

  // Quantizes arbitrary doubles onto the Q1.15 grid.
  static Tensor quantized(int64_t rows, int64_t cols, NumKind kind,
                          std::span<const std::complex<double>> values);

  // F64 tensor from raw doubles.
  static Tensor from_doubles(int64_t rows, int64_t cols, NumKind kind,
                             std::span<const std::complex<double>> values);

  int64_t rows() const { return rows_; }
  int64_t cols() const { return cols_; }
  int64_t size() const { return rows_ * cols_; }
  NumKind kind() const { return kind_; }
  Precision precision() const { return prec_; }

  std::complex<double> at(int64_t r, int64_t c) const {
    return data_[static_cast<size_t>(r * cols_ + c)];
  }
  std::complex<double> at(int64_t idx) const {
    return data_[static_cast<size_t>(idx)];
  }
  // Validates grid membership for Q15 tensors and the real-kind invariant.
  void set(int64_t r, int64_t c, std::complex<double> v);
  void set(int64_t idx, std::complex<double> v);

  CValue fixed_at(int64_t r, int64_t c) const;
  CValue fixed_at(int64_t idx) const;

  const std::vector<std::complex<double>>& data() const { return data_; }

  // SRAM words per element: 1 for real, 2 for complex.
  int words_per_element() const { return kind_ == NumKind::Complex ? 2 : 1; }

  bool operator==(const Tensor& other) const;

  // CSV layout: header "rows,cols,kind" then one "re,im" pair per cell.
  void to_csv(std::ostream& os) const;
  static Tensor from_csv(std::istream& is, Precision prec = Precision::Q15);

 private:
  Tensor(int64_t rows, int64_t cols, NumKind kind, Precision prec);

  int64_t rows_ = 0;
  int64_t cols_ = 0;
  NumKind kind_ = NumKind::Real;
  Precision prec_ = Precision::Q15;
  std::vector<std::complex<double>> data_;
};

// Max relative elementwise deviation, scaled by the largest magnitude in
// `ref`. Used for the F64 kernels' 1e-9 acceptance checks.
double max_rel_error(const Tensor& got, const Tensor& ref);

}  // namespace sasim
