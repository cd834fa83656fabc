#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tri/algebra/field.hpp"

namespace tri {

/// Dense row-major matrix over a finite field.
class Matrix {
 public:
  Matrix(const algebra::FieldDesc& field, std::size_t rows, std::size_t cols);
  static Matrix identity(const algebra::FieldDesc& field, std::size_t n);

  const algebra::FieldDesc& field() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  algebra::FieldElement at(std::size_t i, std::size_t j) const { return {*field_, data_[i * cols_ + j]}; }
  void set(std::size_t i, std::size_t j, const algebra::FieldElement& v);

  bool is_zero() const;
  /// Entrywise a -> a^(p^i).
  Matrix twisted(std::uint64_t i) const;
  std::size_t rank() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  const algebra::FieldDesc* field_;
  std::size_t rows_, cols_;
  std::vector<std::uint32_t> data_;
};

}  // namespace tri
