#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dusff {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Structural identities (algebra relations, involutions) are held to a tighter
// tolerance than unitarity/duality residuals, which accumulate rounding from
// QR factorizations and long gate products.
struct Tolerances {
  double structural = 1e-12;
  double unitarity = 1e-10;
};

// Dense construction refuses above this dimension; callers are pointed to the
// matrix-free paths. 8192^2 complex doubles is ~1 GiB, the most this box
// should ever pin for a single operator.
inline constexpr std::int64_t kDenseDimCap = 8192;

// Raised when a requested computation exceeds a configured size/work budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an iterative solver exhausts its budget; carries the residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual = 0.0;
};

// Site of the half-integer periodic lattice Lambda_n = (1/2)Z_{2n}, stored as
// twice its value so all indexing stays integral. Even <-> integer site,
// odd <-> half-odd-integer site.
struct HalfSite {
  int doubled = 0;

  static HalfSite integer(int x) { return {2 * x}; }
  static HalfSite half_odd(int x) { return {2 * x + 1}; }  // x + 1/2

  bool is_integer() const { return (doubled % 2) == 0; }
};

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
  return max_abs(a - a.adjoint()) < tol;
}

inline bool is_unitary(const Matrix& a, double tol = 1e-10) {
  Matrix g = a.adjoint() * a;
  g.diagonal().array() -= 1.0;
  return max_abs(g) < tol;
}

inline bool is_traceless(const Matrix& a, double tol = 1e-12) {
  return std::abs(a.trace()) < tol;
}

inline double unitarity_residual(const Matrix& a) {
  Matrix g = a.adjoint() * a;
  g.diagonal().array() -= 1.0;
  return max_abs(g);
}

// d^n with overflow guard; n is a slot count, never large enough for the
// result to matter beyond int64 in valid configurations.
inline std::int64_t int_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t{1} << 56) / base) {
      throw ResourceError("dimension overflow: " + std::to_string(base) + "^" +
                          std::to_string(exp));
    }
    r *= base;
  }
  return r;
}

// Kronecker product, (A kron B)(i*p+k, j*q+l) = A(i,j) B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// Operator <-> vector isomorphism |A> with <A|B> = tr(A^dag B).
// v(j*n + k) = A(j, k), so (X kron Y*)|A> = |X A Y^dag>.
Vector vectorize(const Matrix& a);
Matrix unvectorize(const Vector& v, int rows);

}  // namespace dusff
