#include "dusff/gates.hpp"

#include <cmath>

#include "dusff/algebra.hpp"

namespace dusff {

DualGateParams DualGateParams::plain(double coupling, int d) {
  DualGateParams p;
  p.u1 = p.u2 = p.u3 = p.u4 = Matrix::Identity(d, d);
  p.coupling = coupling;
  return p;
}

Matrix interaction_core(double coupling, int d) {
  const auto spin = spin_matrices(d);
  Matrix phase = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const double mm = spin.s3(i, i).real() * spin.s3(k, k).real();
      phase(i * d + k, i * d + k) = std::exp(Cplx(0, coupling * mm));
    }
  }
  return swap_gate(d) * phase;
}

Matrix build_dual_gate(const DualGateParams& params, int d) {
  for (const Matrix* u : {&params.u1, &params.u2, &params.u3, &params.u4}) {
    if (u->rows() != d || u->cols() != d || !is_unitary(*u, 1e-10)) {
      throw std::invalid_argument("build_dual_gate: local factor is not unitary");
    }
  }
  return kron(params.u1, params.u2) * interaction_core(params.coupling, d) *
         kron(params.u3, params.u4);
}

Matrix dual_reshuffle(const Matrix& gate) {
  const int dd = static_cast<int>(gate.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(dd))));
  if (d * d != dd || gate.cols() != dd) {
    throw std::invalid_argument("dual_reshuffle: dimension is not d^2 square");
  }
  Matrix out(dd, dd);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out(j * d + l, i * d + k) = gate(i * d + j, k * d + l);
  return out;
}

Matrix dual_reshuffle_inverse(const Matrix& gate) {
  const int dd = static_cast<int>(gate.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(dd))));
  if (d * d != dd || gate.cols() != dd) {
    throw std::invalid_argument("dual_reshuffle_inverse: dimension is not d^2 square");
  }
  Matrix out(dd, dd);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out(i * d + j, k * d + l) = gate(j * d + l, i * d + k);
  return out;
}

DualityCheck check_dual_unitary(const Matrix& gate, double tol) {
  DualityCheck c;
  c.unitarity_residual = unitarity_residual(gate);
  c.dual_residual = unitarity_residual(dual_reshuffle(gate));
  c.ok = c.unitarity_residual < tol && c.dual_residual < tol;
  return c;
}

Matrix haar_unitary(int d, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Cplx(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (int j = 0; j < d; ++j) {
    const Cplx rij = r(j, j);
    q.col(j) *= rij / std::abs(rij);
  }
  return q;
}

Matrix build_time_reversal_gate(const Matrix& u1, const Matrix& u2,
                                double coupling, int d) {
  DualGateParams p;
  p.u1 = u1;
  p.u2 = u2;
  p.u3 = u1.transpose();
  p.u4 = u2.transpose();
  p.coupling = coupling;
  return build_dual_gate(p, d);
}

}  // namespace dusff
