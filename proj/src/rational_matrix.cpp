#include "plogit/rational_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace plogit {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::select_columns(std::span<const std::size_t> columns) const {
  RationalMatrix out(rows_, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= cols_) throw std::out_of_range("column index out of range");
    for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, columns[k]);
  }
  return out;
}

RationalMatrix RationalMatrix::select_rows(std::span<const std::size_t> rows) const {
  RationalMatrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= rows_) throw std::out_of_range("row index out of range");
    std::copy(row(rows[k]).begin(), row(rows[k]).end(), out.row(k).begin());
  }
  return out;
}

void RationalMatrix::append_rows(const RationalMatrix& other) {
  if (rows_ == 0) {
    *this = other;
    return;
  }
  if (other.cols_ != cols_) throw std::invalid_argument("append_rows: column mismatch");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  rows_ += other.rows_;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  RationalMatrix c(a.rows(), b.cols());
  Rational acc;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k) != 0 && b(k, j) != 0) acc += a(i, k) * b(k, j);
      }
      c(i, j) = acc;
    }
  }
  return c;
}

std::string to_string(const RationalMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

}  // namespace plogit
