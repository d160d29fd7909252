#include "gscp/tensor.h"

#include <algorithm>
#include <stdexcept>

namespace gscp {

namespace {

void check(bool ok) {
  if (!ok) throw std::logic_error("matrix shape mismatch");
}

}  // namespace

template <typename T>
void matmul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate) {
  check(a.cols() == b.rows());
  if (!accumulate || out.rows() != a.rows() || out.cols() != b.cols()) {
    check(!accumulate);
    out = Matrix<T>(a.rows(), b.cols());
  }
  const int inner = a.cols();
  const int cols = b.cols();
  for (int i = 0; i < a.rows(); ++i) {
    T* o = out.row(i).data();
    const T* ar = a.row(i).data();
    for (int k = 0; k < inner; ++k) {
      const T s = ar[k];
      if (s == T(0)) continue;
      const T* br = b.row(k).data();
      for (int j = 0; j < cols; ++j) o[j] += s * br[j];
    }
  }
}

template <typename T>
void matmul_at_b(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate) {
  check(a.rows() == b.rows());
  if (!accumulate || out.rows() != a.cols() || out.cols() != b.cols()) {
    check(!accumulate);
    out = Matrix<T>(a.cols(), b.cols());
  }
  const int cols = b.cols();
  for (int r = 0; r < a.rows(); ++r) {
    const T* ar = a.row(r).data();
    const T* br = b.row(r).data();
    for (int i = 0; i < a.cols(); ++i) {
      const T s = ar[i];
      if (s == T(0)) continue;
      T* o = out.row(i).data();
      for (int j = 0; j < cols; ++j) o[j] += s * br[j];
    }
  }
}

template <typename T>
void matmul_a_bt(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, bool accumulate) {
  check(a.cols() == b.cols());
  if (!accumulate || out.rows() != a.rows() || out.cols() != b.rows()) {
    check(!accumulate);
    out = Matrix<T>(a.rows(), b.rows());
  }
  const int inner = a.cols();
  for (int i = 0; i < a.rows(); ++i) {
    const T* ar = a.row(i).data();
    T* o = out.row(i).data();
    for (int j = 0; j < b.rows(); ++j) {
      const T* br = b.row(j).data();
      T acc = T(0);
      for (int k = 0; k < inner; ++k) acc += ar[k] * br[k];
      o[j] += acc;
    }
  }
}

template void matmul<float>(const Matrix<float>&, const Matrix<float>&, Matrix<float>&, bool);
template void matmul<double>(const Matrix<double>&, const Matrix<double>&, Matrix<double>&, bool);
template void matmul_at_b<float>(const Matrix<float>&, const Matrix<float>&, Matrix<float>&, bool);
template void matmul_at_b<double>(const Matrix<double>&, const Matrix<double>&, Matrix<double>&, bool);
template void matmul_a_bt<float>(const Matrix<float>&, const Matrix<float>&, Matrix<float>&, bool);
template void matmul_a_bt<double>(const Matrix<double>&, const Matrix<double>&, Matrix<double>&, bool);

}  // namespace gscp
