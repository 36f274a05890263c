#pragma once

#include "dusff/rng.hpp"
#include "dusff/types.hpp"

namespace dusff {

// Parameters of the dual-unitary two-site gate family
//   (u1 x u2) S exp(i J s3 x s3) (u3 x u4),  J in [0, pi].
// J = 0 gives a (dressed) SWAP and is flagged non-interacting.
struct DualGateParams {
  Matrix u1, u2, u3, u4;
  double coupling = 0.0;  // J

  bool interacting() const { return coupling != 0.0; }
  static DualGateParams plain(double coupling, int d);
};

// Residuals of the two unitarity clauses (direct and index-reshuffled).
struct DualityCheck {
  bool ok = false;
  double unitarity_residual = 0.0;
  double dual_residual = 0.0;
};

// S exp(i J s3 x s3) on d^2; the interaction core shared by all gate builders.
Matrix interaction_core(double coupling, int d);

// (u1 x u2) S e^{iJ s3 s3} (u3 x u4). Throws if any u_i fails unitarity.
Matrix build_dual_gate(const DualGateParams& params, int d);

// Index reshuffle O~_{jl,ik} = O_{ij,kl} with row-major two-site composite
// indices (row of O = i*d+j, column = k*d+l). An entry permutation, hence
// Frobenius-norm preserving and invertible.
Matrix dual_reshuffle(const Matrix& gate);

// Inverse of dual_reshuffle.
Matrix dual_reshuffle_inverse(const Matrix& gate);

DualityCheck check_dual_unitary(const Matrix& gate, double tol = 1e-10);

inline bool is_dual_unitary(const Matrix& gate, double tol = 1e-10) {
  return check_dual_unitary(gate, tol).ok;
}

// Haar-distributed unitary via QR of a complex Gaussian matrix with the R
// diagonal phases fixed.
Matrix haar_unitary(int d, RngStream& rng);

// Symmetric dual-unitary gate (u1 x u2) S e^{iJ s3 s3} (u1^T x u2^T); equals
// its own transpose, which is what the time-reversal-invariant circuits need.
Matrix build_time_reversal_gate(const Matrix& u1, const Matrix& u2,
                                double coupling, int d);

}  // namespace dusff
