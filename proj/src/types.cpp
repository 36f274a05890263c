#include "dusff/types.hpp"

namespace dusff {

Matrix kron(const Matrix& a, const Matrix& b) {
  const auto m = a.rows(), n = a.cols(), p = b.rows(), q = b.cols();
  Matrix out(m * p, n * q);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.block(i * p, j * q, p, q) = a(i, j) * b;
    }
  }
  return out;
}

Vector vectorize(const Matrix& a) {
  const auto n = a.cols();
  Vector v(a.rows() * n);
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index k = 0; k < n; ++k) v(j * n + k) = a(j, k);
  }
  return v;
}

Matrix unvectorize(const Vector& v, int rows) {
  const Eigen::Index cols = v.size() / rows;
  Matrix a(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index k = 0; k < cols; ++k) a(j, k) = v(j * cols + k);
  }
  return a;
}

}  // namespace dusff
