#include "dusff/algebra.hpp"

#include <cmath>

namespace dusff {

namespace {

void require_dim(int d) {
  if (d < 2) throw std::invalid_argument("qudit dimension must be >= 2");
}

void require_dense(std::int64_t dim) {
  if (dim > kDenseDimCap) {
    throw ResourceError("dense construction refused at dimension " +
                        std::to_string(dim) + " (cap " +
                        std::to_string(kDenseDimCap) +
                        "); use the matrix-free paths");
  }
}

}  // namespace

std::vector<Matrix> gell_mann_generators(int d) {
  require_dim(d);
  std::vector<Matrix> gens;
  gens.reserve(static_cast<std::size_t>(d) * d - 1);
  // Interleaved ordering: for each k, the off-diagonal pairs with j < k
  // followed by the k-th diagonal generator. Reproduces Pauli (x, y, z) at
  // d=2 and the standard lambda_1..lambda_8 at d=3.
  for (int k = 1; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      gens.push_back(sym);
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = Cplx(0, -1);
      asym(k, j) = Cplx(0, 1);
      gens.push_back(asym);
    }
    Matrix diag = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (k * (k + 1.0)));
    for (int j = 0; j < k; ++j) diag(j, j) = norm;
    diag(k, k) = -k * norm;
    gens.push_back(diag);
  }
  return gens;
}

SpinMatrices spin_matrices(int d) {
  require_dim(d);
  const double j = (d - 1) / 2.0;
  Matrix s3 = Matrix::Zero(d, d);
  Matrix raise = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const double m = -j + r;
    s3(r, r) = m;
    if (r + 1 < d) raise(r + 1, r) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  SpinMatrices s;
  s.s1 = 0.5 * (raise + raise.adjoint());
  s.s2 = Cplx(0, -0.5) * (raise - raise.adjoint());
  s.s3 = s3;
  return s;
}

std::vector<std::int64_t> shift_permutation(int n, int d, int steps) {
  const std::int64_t dim = int_pow(d, n);
  const int k = ((steps % n) + n) % n;
  std::vector<std::int64_t> perm(static_cast<std::size_t>(dim));
  // Basis index I = sum_p digit_p d^{n-1-p}; Pi moves the digit at slot p to
  // slot p+1 (mod n), so k steps rotate the digit string right by k.
  std::vector<int> digits(n);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t rest = idx;
    for (int p = n - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rest % d);
      rest /= d;
    }
    std::int64_t out = 0;
    for (int p = 0; p < n; ++p) {
      out = out * d + digits[((p - k) % n + n) % n];
    }
    perm[static_cast<std::size_t>(idx)] = out;
  }
  return perm;
}

Matrix shift_operator(int n, int d) {
  if (n < 1) throw std::invalid_argument("shift_operator: n must be >= 1");
  require_dim(d);
  const std::int64_t dim = int_pow(d, n);
  require_dense(dim);
  auto perm = shift_permutation(n, d, 1);
  Matrix pi = Matrix::Zero(dim, dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) pi(perm[idx], idx) = 1.0;
  return pi;
}

Matrix reflection_operator(int n, int d) {
  if (n < 1) throw std::invalid_argument("reflection_operator: n must be >= 1");
  require_dim(d);
  const std::int64_t dim = int_pow(d, n);
  require_dense(dim);
  Matrix refl = Matrix::Zero(dim, dim);
  std::vector<int> digits(n);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t rest = idx;
    for (int p = n - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rest % d);
      rest /= d;
    }
    std::int64_t out = 0;
    for (int p = 0; p < n; ++p) out = out * d + digits[n - 1 - p];
    refl(out, idx) = 1.0;
  }
  return refl;
}

Matrix swap_gate(int d) {
  require_dim(d);
  Matrix s = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  }
  return s;
}

Matrix embed_one_at_slot(const Matrix& op, int slot, int m, int d) {
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("embed_one_at_slot: operator is not one-site");
  }
  if (slot < 0 || slot >= m) throw std::out_of_range("slot out of range");
  const std::int64_t dim = int_pow(d, m);
  require_dense(dim);
  const std::int64_t stride = int_pow(d, m - 1 - slot);
  const std::int64_t outer = dim / (stride * d);
  Matrix out = Matrix::Zero(dim, dim);
  for (std::int64_t hi = 0; hi < outer; ++hi) {
    for (std::int64_t lo = 0; lo < stride; ++lo) {
      const std::int64_t base = hi * stride * d + lo;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          if (op(a, b) != 0.0) out(base + a * stride, base + b * stride) = op(a, b);
        }
      }
    }
  }
  return out;
}

Matrix embed_two_at_slots(const Matrix& op, int first_slot, int m, int d) {
  if (op.rows() != d * d || op.cols() != d * d) {
    throw std::invalid_argument("embed_two_at_slots: operator is not two-site");
  }
  if (m < 2) throw std::invalid_argument("embed_two_at_slots: need >= 2 slots");
  if (first_slot < 0 || first_slot >= m) throw std::out_of_range("slot out of range");
  const int p = first_slot;
  const int q = (first_slot + 1) % m;
  const std::int64_t dim = int_pow(d, m);
  require_dense(dim);
  const std::int64_t sp = int_pow(d, m - 1 - p);
  const std::int64_t sq = int_pow(d, m - 1 - q);
  Matrix out = Matrix::Zero(dim, dim);
  // Iterate over all indices with zero digits at p and q, then fill the d^2
  // block. The "rest" indices are enumerated by skipping those digit places.
  const std::int64_t rest_count = dim / (static_cast<std::int64_t>(d) * d);
  std::vector<int> digits(m);
  for (std::int64_t r = 0; r < rest_count; ++r) {
    std::int64_t rest = r;
    std::int64_t base = 0;
    for (int s = m - 1; s >= 0; --s) {
      if (s == p || s == q) continue;
      const int dig = static_cast<int>(rest % d);
      rest /= d;
      base += dig * int_pow(d, m - 1 - s);
    }
    for (int a1 = 0; a1 < d; ++a1) {
      for (int a2 = 0; a2 < d; ++a2) {
        const std::int64_t row = base + a1 * sp + a2 * sq;
        for (int b1 = 0; b1 < d; ++b1) {
          for (int b2 = 0; b2 < d; ++b2) {
            const Cplx v = op(a1 * d + a2, b1 * d + b2);
            if (v != 0.0) out(row, base + b1 * sp + b2 * sq) = v;
          }
        }
      }
    }
  }
  return out;
}

Matrix embed_local(const Matrix& op, HalfSite site, int n, int d) {
  const int m = 2 * n;
  const int slot = ((site.doubled % m) + m) % m;
  if (op.rows() == d) {
    return embed_one_at_slot(op, slot, m, d);
  }
  if (op.rows() == d * d) {
    // Two-site operators live on (site - 1/2, site).
    return embed_two_at_slots(op, (slot - 1 + m) % m, m, d);
  }
  throw std::invalid_argument("embed_local: operator must act on 1 or 2 sites");
}

Matrix sublattice_magnetization(int a, int iota, int t, int d) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (a < 1 || a > d * d - 1) throw std::out_of_range("generator index");
  if (iota != 0 && iota != 1) throw std::out_of_range("sublattice index");
  const auto gens = gell_mann_generators(d);
  const Matrix& sigma = gens[static_cast<std::size_t>(a - 1)];
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  Matrix out = Matrix::Zero(dim, dim);
  for (int tau = 0; tau < t; ++tau) {
    out += embed_one_at_slot(sigma, 2 * tau + iota, m, d);
  }
  return out;
}

Matrix double_magnetization(int a, int b, int iota, int t, int d) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (a < 1 || a > d * d - 1 || b < 1 || b > d * d - 1) {
    throw std::out_of_range("generator index");
  }
  const auto gens = gell_mann_generators(d);
  const Matrix& sa = gens[static_cast<std::size_t>(a - 1)];
  const Matrix& sb = gens[static_cast<std::size_t>(b - 1)];
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  Matrix out = Matrix::Zero(dim, dim);
  for (int tau = 0; tau < t; ++tau) {
    const int first = 2 * tau + iota;
    out += embed_one_at_slot(sa, first, m, d) *
           embed_one_at_slot(sb, (first + 1) % m, m, d);
  }
  return out;
}

Matrix full_lattice_magnetization(int a, int t, int d) {
  return sublattice_magnetization(a, 0, t, d) +
         sublattice_magnetization(a, 1, t, d);
}

Matrix coproduct(const Matrix& op, int copies) {
  if (copies < 1) throw std::invalid_argument("coproduct: copies must be >= 1");
  const std::int64_t n = op.rows();
  const std::int64_t total = int_pow(n, copies);
  require_dense(total);
  Matrix out = Matrix::Zero(total, total);
  const Matrix id = Matrix::Identity(n, n);
  for (int j = 0; j < copies; ++j) {
    Matrix term = Matrix::Identity(1, 1);
    for (int p = 0; p < copies; ++p) term = kron(term, p == j ? op : id);
    out += term;
  }
  return out;
}

Matrix tensor_power(const Matrix& op, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  Matrix out = op;
  for (int i = 1; i < n; ++i) out = kron(out, op);
  return out;
}

}  // namespace dusff
