#pragma once

#include <string>
#include <vector>

#include "dusff/disorder.hpp"
#include "dusff/types.hpp"

namespace dusff {

struct QuadratureSpec {
  int nodes_per_axis = 9;
  std::int64_t grid_cap = 20000;  // above this the product grid falls back to MC
  int mc_nodes = 4096;
  std::uint64_t mc_seed = 777;
};

// One factor of an averaging operator: a discrete measure over field vectors
// realized as weights w_k and unitaries V_k = exp(i theta_k . M), acting on a
// vectorized operator as A -> sum_k w_k V_k A V_k^dag. Weights sum to one, so
// the map is non-expansive and fixes anything commuting with every V_k.
struct AveragingStage {
  std::vector<double> weights;
  std::vector<Matrix> unitaries;

  void apply(const Matrix& in, Matrix& out, bool adjoint) const;
  Matrix dense_super(bool adjoint) const;  // sum_k w_k (V kron V*), D x D
};

// Everything needed to apply the disorder-averaged space transfer matrix
//   T = (RU kron RU*) O_int (RW kron RW*) O_half
// on the doubled space of dimension D = (d^{2 t n})^2. RU and RW are the
// sideways-propagating rows built from the reshuffled gates (tensor powers of
// them for moment order n > 1). O_half averages the fields on half-odd space
// sites with plain magnetizations; O_int the integer-site fields, whose
// exponentials carry transposed magnetizations after the index reshuffle.
struct TransferContext {
  int d = 2;
  int t = 1;
  int moment_order = 1;
  bool time_reversal = false;
  std::int64_t op_dim = 0;  // d^{2 t n}
  Matrix row_u, row_w;
  std::vector<AveragingStage> avg_half;  // applied first
  std::vector<AveragingStage> avg_int;   // applied between the rows
  DisorderDistribution dist = DisorderDistribution::gaussian(2, 0.2);
  QuadratureSpec quad;

  std::int64_t doubled_dim() const { return op_dim * op_dim; }
};

// Row operator of one sublattice: the product over that sublattice of
// embedded reshuffled gates. Refuses gates that fail the duality check, since
// the row would not be unitary.
Matrix dual_row_operator(const Matrix& gate, int t, int d, double tol = 1e-10);

TransferContext make_transfer_context(const Matrix& gate_u, const Matrix& gate_w,
                                      int t, const DisorderDistribution& dist,
                                      const QuadratureSpec& quad = {},
                                      int moment_order = 1,
                                      double duality_tol = 1e-10);

// One application of T in the operator picture (A has shape op_dim x op_dim).
Matrix transfer_apply(const TransferContext& ctx, const Matrix& a);
Matrix transfer_apply_adjoint(const TransferContext& ctx, const Matrix& a);

// Vectorized-picture wrappers (length D = op_dim^2).
Vector transfer_apply_vec(const TransferContext& ctx, const Vector& v);

// Averaging operator of one space sublattice alone (iota' = 0 integer sites,
// iota' = 1 half-odd sites).
Matrix averaging_apply(const TransferContext& ctx, const Matrix& a, int iotap,
                       bool adjoint = false);

// Dense D x D transfer matrix; refuses above the cap.
Matrix transfer_dense(const TransferContext& ctx, std::int64_t doubled_cap = 2048);

// tr T^L via the dense matrix (eigenvalue power sums).
Cplx trace_transfer_power(const TransferContext& ctx, int L,
                          std::int64_t doubled_cap = 2048);

// Whole curve L = 1..L_max from one eigendecomposition.
std::vector<Cplx> transfer_trace_curve(const TransferContext& ctx, int L_max,
                                       std::int64_t doubled_cap = 2048);

struct SpectralOptions {
  int block_size = 6;
  int max_basis = 120;
  int max_restarts = 4;
  double tol = 1e-9;
  double gap_floor = 1e-4;  // unimodular when |lambda| > 1 - 10*gap_floor
  std::int64_t dense_cap = 2048;
  std::uint64_t seed = 2718;
};

struct SpectralReport {
  std::vector<Cplx> eigenvalues;  // sorted by modulus, descending
  int unimodular_count = 0;
  double spectral_radius = 0.0;
  double max_residual = 0.0;
  bool ambiguous = false;
  std::string method;
  double gap_floor = 1e-4;
};

// Largest-modulus eigenvalues: dense solve when D fits, otherwise a block
// Krylov (Rayleigh-Ritz) iteration on transfer_apply.
SpectralReport leading_spectrum(const TransferContext& ctx, int k,
                                const SpectralOptions& opts = {});

double spectral_radius(const TransferContext& ctx,
                       const SpectralOptions& opts = {});

// Vectorized even translations |Pi^{2 tau}> (tensor powers for n > 1 along
// the diagonal of the copies), spanning the fixed space of dual-unitary
// interacting contexts.
std::vector<Vector> translation_fixed_vectors(const TransferContext& ctx);

// Orthogonal projector onto span{|Pi^{2 tau}>}; the translations are not
// mutually orthogonal, so the Gram matrix is inverted explicitly.
Matrix eigenspace_projector(const TransferContext& ctx);

// ||(1 - P) T_a T_b (1 - P)|| (operator norm) for the even-pair blocking of
// inhomogeneous products; strictly < 1 for interacting dual-unitary pairs.
double inhomogeneous_block_norm(const TransferContext& ctx_a,
                                const TransferContext& ctx_b,
                                std::int64_t doubled_cap = 2048);

struct InhomogeneousTrace {
  Cplx raw;        // tr(T_1 ... T_L)
  Cplx remainder;  // tr of the projected pair product; raw = t + remainder
};

InhomogeneousTrace inhomogeneous_trace(const std::vector<TransferContext>& ctxs,
                                       std::int64_t doubled_cap = 2048);

}  // namespace dusff
