#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dusff/types.hpp"

namespace dusff {

// A finite family of operators on a common space whose commutant dimension is
// computed by brute-force linear algebra.
struct GeneratorSet {
  std::string label;
  int d = 2;
  int t = 1;
  int copies = 1;           // moment order of the coproduct lift
  std::int64_t op_dim = 0;  // common operator dimension
  std::vector<Matrix> ops;
};

// {M_{a,iota}} U {M_{ab,iota}}: 2(d^2-1) + 2(d^2-1)^2 operators on d^{2t}.
GeneratorSet build_M_set(int t, int d);

// {M_a} U {M_{ab,iota} + R M_{ab,iota} R}: the time-reversal-symmetric family.
GeneratorSet build_MT_set(int t, int d);

// Coproduct lift of build_M_set to n copies of the chain.
GeneratorSet build_Mn_set(int t, int d, int n);

struct CommutantOptions {
  double zero_ceiling = 1e-8;  // relative to the largest eigenvalue
  double gap_floor = 1e-4;     // absolute; smaller gaps flag the report
  std::int64_t direct_cap = 70000;  // max vectorized dimension for one solve
  bool allow_sectors = true;   // block-diagonalize over two-site momentum
};

struct CommutantReport {
  int dimension = 0;            // zero modes of sum_X ad_X^dag ad_X
  double gap = 0.0;             // smallest nonzero eigenvalue
  double max_eigenvalue = 0.0;
  std::vector<double> low_spectrum;  // smallest eigenvalues, merged, ascending
  bool ambiguous = false;
  std::string method;           // "dense" or "momentum_sectors"
};

CommutantReport commutant_dimension(const GeneratorSet& gens,
                                    const CommutantOptions& opts = {});

// sqrt(sum_X ||[X, A]||_F^2) / ||A||_F: zero iff A lies in the commutant.
double commutant_residual(const GeneratorSet& gens, const Matrix& a);

// Orthogonal projectors Q_k = (1/t) sum_tau w^{tau k} Pi^{2 tau} resolving the
// two-site-translation eigenspaces, and the reflected family Q'_k.
std::pair<std::vector<Matrix>, std::vector<Matrix>> cyclic_projectors(int t, int d);

struct RankReport {
  int rank = 0;
  std::vector<double> singular_values;  // descending, full tail for audit
};

// Rank of {R^n Pi^{2 tau}} as vectors, from the integer Gram matrix of
// permutation-product traces (d^{#cycles}).
RankReport dihedral_rank(int t, int d);

// Normalized momentum eigenstate built from n raising operators at one site:
// Pi eigenvector with eigenvalue e^{-i pi k / t}.
Vector momentum_state(int n, int k, int t, int d);

struct SingularRankReport {
  int rank_s1 = 0;
  int rank_s2 = 0;
  std::vector<double> sv1, sv2;
};

// The two 15-member commutator families of the single-axis (sigma_3) disorder
// analysis at d = 2; full rank away from resonances.
SingularRankReport singular_disorder_ranks(const Matrix& gate_u,
                                           const Matrix& gate_w, int t,
                                           double rel_threshold = 1e-8);

}  // namespace dusff
