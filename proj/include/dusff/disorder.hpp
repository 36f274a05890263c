#pragma once

#include <vector>

#include "dusff/rng.hpp"
#include "dusff/types.hpp"

namespace dusff {

enum class DisorderKind { Gaussian, Box, SingularMask };

// Distribution of the on-site field vectors theta. Components are i.i.d. per
// (generator a, field family iota in {u=0, w=1}, space sublattice iota' in
// {integer=0, half-odd=1}) with variability nu_{a,iota,iota'}. The singular
// kind restricts support to a masked subset of generator directions, with the
// remaining components exactly zero.
struct DisorderDistribution {
  DisorderKind kind = DisorderKind::Gaussian;
  int d = 2;
  std::vector<double> nu_table;  // size (d^2-1)*4, index (a-1)*4 + iota*2 + iotap
  std::vector<int> active;       // 1-based generator indices with support
  bool time_reversal = false;    // one theta per site shared by u and w fields

  static DisorderDistribution gaussian(int d, double nu);
  static DisorderDistribution box(int d, double nu);
  static DisorderDistribution singular_mask(int d, std::vector<int> active_axes,
                                            double nu);

  double nu_at(int a, int iota, int iotap) const;
  bool is_active(int a) const;
  void validate() const;
};

// One sampled set of field vectors for every site of Lambda_L. theta[iota][s]
// is the length-(d^2-1) vector at the site with doubled index s; iota = 0
// feeds the u fields (plain generators), iota = 1 the w fields (transposed
// generators). In time-reversal mode theta[1] == theta[0].
struct DisorderRealization {
  int d = 2;
  int cells = 0;  // L
  std::vector<std::vector<RealVector>> theta;  // [2][2L]
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  static DisorderRealization clean(int d, int cells);
};

DisorderRealization sample_realization(const DisorderDistribution& dist, int L,
                                       std::uint64_t seed,
                                       std::uint64_t sample_idx);

// exp(i theta . sigma) with plain or transposed generators.
Matrix field_to_gate(const RealVector& theta, int d, bool transposed);

}  // namespace dusff
