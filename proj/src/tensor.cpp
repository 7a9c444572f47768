#include "sasim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace sasim {

Tensor::Tensor(int64_t rows, int64_t cols, NumKind kind, Precision prec)
    : rows_(rows), cols_(cols), kind_(kind), prec_(prec) {
  if (rows <= 0 || cols <= 0) {
    throw ConfigError("tensor shape must be positive, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  data_.assign(static_cast<size_t>(rows * cols), {0.0, 0.0});
}

Tensor Tensor::zeros(int64_t rows, int64_t cols, NumKind kind,
                     Precision prec) {
  return Tensor(rows, cols, kind, prec);
}

Tensor Tensor::quantized(int64_t rows, int64_t cols, NumKind kind,
                         std::span<const std::complex<double>> values) {
  Tensor t(rows, cols, kind, Precision::Q15);
  if (static_cast<int64_t>(values.size()) != rows * cols) {
    throw ConfigError("value count does not match tensor shape");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    const CValue q = CValue::from_doubles(
        values[i].real(), kind == NumKind::Real ? 0.0 : values[i].imag());
    t.data_[i] = q.to_complex();
  }
  return t;
}

Tensor Tensor::from_doubles(int64_t rows, int64_t cols, NumKind kind,
                            std::span<const std::complex<double>> values) {
  Tensor t(rows, cols, kind, Precision::F64);
  if (static_cast<int64_t>(values.size()) != rows * cols) {
    throw ConfigError("value count does not match tensor shape");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    t.data_[i] = kind == NumKind::Real
                     ? std::complex<double>{values[i].real(), 0.0}
                     : values[i];
  }
  return t;
}

void Tensor::set(int64_t idx, std::complex<double> v) {
  if (kind_ == NumKind::Real && v.imag() != 0.0) {
    throw ConfigError("real-kind tensor element with nonzero imaginary part");
  }
  if (prec_ == Precision::Q15 &&
      (!Scalar::representable(v.real()) || !Scalar::representable(v.imag()))) {
    throw OverflowError("element off the Q1.15 grid assigned to Q15 tensor");
  }
  data_[static_cast<size_t>(idx)] = v;
}

void Tensor::set(int64_t r, int64_t c, std::complex<double> v) {
  set(r * cols_ + c, v);
}

CValue Tensor::fixed_at(int64_t idx) const {
  const auto v = data_[static_cast<size_t>(idx)];
  return CValue::from_doubles(v.real(), v.imag());
}

CValue Tensor::fixed_at(int64_t r, int64_t c) const {
  return fixed_at(r * cols_ + c);
}

bool Tensor::operator==(const Tensor& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         kind_ == other.kind_ && data_ == other.data_;
}

void Tensor::to_csv(std::ostream& os) const {
  os << rows_ << "," << cols_ << ","
     << (kind_ == NumKind::Complex ? "complex" : "real") << "\n";
  os.precision(17);
  for (const auto& v : data_) {
    os << v.real() << "," << v.imag() << "\n";
  }
}

Tensor Tensor::from_csv(std::istream& is, Precision prec) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty tensor CSV");
  std::istringstream header(line);
  int64_t rows = 0, cols = 0;
  std::string kind_str;
  char comma = 0;
  header >> rows >> comma >> cols >> comma;
  std::getline(header, kind_str);
  NumKind kind;
  if (kind_str == "real") {
    kind = NumKind::Real;
  } else if (kind_str == "complex") {
    kind = NumKind::Complex;
  } else {
    throw ConfigError("tensor CSV kind must be 'real' or 'complex', got '" +
                      kind_str + "'");
  }
  Tensor t(rows, cols, kind, prec);
  for (int64_t i = 0; i < rows * cols; ++i) {
    if (!std::getline(is, line)) {
      throw ConfigError("tensor CSV truncated at row " + std::to_string(i));
    }
    std::istringstream cell(line);
    double re = 0, im = 0;
    cell >> re >> comma >> im;
    if (prec == Precision::Q15) {
      const CValue q = CValue::from_doubles(re, im);
      t.set(i, q.to_complex());
    } else {
      t.set(i, {re, im});
    }
  }
  return t;
}

double max_rel_error(const Tensor& got, const Tensor& ref) {
  if (got.rows() != ref.rows() || got.cols() != ref.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double scale = 0.0;
  for (const auto& v : ref.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (int64_t i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got.at(i) - ref.at(i)) / scale);
  }
  return worst;
}

}  // namespace sasim
