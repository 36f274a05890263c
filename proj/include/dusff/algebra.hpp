#pragma once

#include <vector>

#include "dusff/types.hpp"

namespace dusff {

// Generalised Gell-Mann matrices: d^2-1 Hermitian traceless generators of
// su(d) normalised to tr(s_a s_b) = 2 delta_ab. For d=2 these are the Pauli
// matrices in the order x, y, z.
std::vector<Matrix> gell_mann_generators(int d);

struct SpinMatrices {
  Matrix s1, s2, s3;
};

// d-dimensional irreducible spin representation with [s_a, s_b] = i eps_abc s_c
// and s3 = diag(-(d-1)/2, ..., (d-1)/2) in the canonical basis.
SpinMatrices spin_matrices(int d);

// Periodic shift on n qudits: Pi |j1 ... jn> = |jn j1 ... j_{n-1}>.
Matrix shift_operator(int n, int d);

// Reflection: R |j1 ... jn> = |jn ... j1>. Involution, symmetric permutation.
Matrix reflection_operator(int n, int d);

// SWAP on two qudits.
Matrix swap_gate(int d);

// Basis-index permutation of the shift (out_index = perm[in_index] meaning
// Pi |in> = |perm[in]>); used to conjugate operators without dense products.
std::vector<std::int64_t> shift_permutation(int n, int d, int steps);

// Embeds a one-site operator at the given lattice site of a 2n-slot chain,
// or a two-site operator on the neighbouring pair (site - 1/2, site) with
// periodic wraparound. op must act on d or d^2 dimensions.
Matrix embed_local(const Matrix& op, HalfSite site, int n, int d);

// Embedding on explicit tensor slots of an m-slot chain (slot 0 is the most
// significant digit of the basis index). Two-site version acts on
// (first_slot, first_slot + 1 mod m).
Matrix embed_one_at_slot(const Matrix& op, int slot, int m, int d);
Matrix embed_two_at_slots(const Matrix& op, int first_slot, int m, int d);

// Sublattice magnetization M_{a,iota} = sum over the integer (iota = 0) or
// half-odd-integer (iota = 1) sites of the time lattice Lambda_t of the a-th
// generator. a is 1-based in [1, d^2-1]. Acts on d^{2t}.
Matrix sublattice_magnetization(int a, int iota, int t, int d);

// Two-site magnetization M_{ab,iota} = sum_tau sigma_{a,tau} sigma_{b,tau+1/2}
// over the iota sublattice.
Matrix double_magnetization(int a, int b, int iota, int t, int d);

// Full-lattice magnetization M_a = M_{a,0} + M_{a,1}.
Matrix full_lattice_magnetization(int a, int t, int d);

// Coproduct sum_j 1 x ... x op x ... x 1 over `copies` factors.
Matrix coproduct(const Matrix& op, int copies);

// n-fold tensor power.
Matrix tensor_power(const Matrix& op, int n);

}  // namespace dusff
