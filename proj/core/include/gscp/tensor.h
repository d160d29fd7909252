#ifndef GSCP_TENSOR_H_
#define GSCP_TENSOR_H_

#include <cassert>
#include <span>
#include <vector>

namespace gscp {

// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  T operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<T> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const T> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// out = a * b (accumulate when `accumulate` is set).
template <typename T>
void matmul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate = false);
// out = a^T * b
template <typename T>
void matmul_at_b(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate = false);
// out = a * b^T
template <typename T>
void matmul_a_bt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate = false);

}  // namespace gscp

#endif  // GSCP_TENSOR_H_
