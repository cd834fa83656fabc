#include "tri/matrix.hpp"

#include <algorithm>

#include "tri/error.hpp"

namespace tri {

using algebra::FieldElement;

Matrix::Matrix(const algebra::FieldDesc& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(const algebra::FieldDesc& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, const FieldElement& v) {
  if (&v.field() != field_) throw DomainError("matrix entry from a different field");
  data_[i * cols_ + j] = v.raw();
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint32_t v) { return v == 0; });
}

Matrix Matrix::twisted(std::uint64_t i) const {
  Matrix out = *this;
  for (auto& v : out.data_) v = field_->frobenius(v, i);
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.field_ != b.field_) throw DomainError("matrix field mismatch");
  if (a.cols_ != b.rows_) throw DomainError("matrix shape mismatch");
  const algebra::FieldDesc& f = *a.field_;
  Matrix out(f, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const std::uint32_t aik = a.data_[i * a.cols_ + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        std::uint32_t& dst = out.data_[i * b.cols_ + j];
        dst = f.add(dst, f.mul(aik, b.data_[k * b.cols_ + j]));
      }
    }
  return out;
}

std::size_t Matrix::rank() const {
  const algebra::FieldDesc& f = *field_;
  std::vector<std::uint32_t> m = data_;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows_ && m[pivot * cols_ + col] == 0) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != rank)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m[pivot * cols_ + j], m[rank * cols_ + j]);
    const std::uint32_t inv = f.inv(m[rank * cols_ + col]);
    for (std::size_t j = col; j < cols_; ++j) m[rank * cols_ + j] = f.mul(m[rank * cols_ + j], inv);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == rank) continue;
      const std::uint32_t c = m[i * cols_ + col];
      if (c == 0) continue;
      for (std::size_t j = col; j < cols_; ++j)
        m[i * cols_ + j] = f.sub(m[i * cols_ + j], f.mul(c, m[rank * cols_ + j]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace tri
