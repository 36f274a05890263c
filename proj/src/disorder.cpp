#include "dusff/disorder.hpp"

#include <algorithm>
#include <cmath>

#include "dusff/algebra.hpp"

namespace dusff {

namespace {

std::vector<int> all_axes(int d) {
  std::vector<int> a(static_cast<std::size_t>(d) * d - 1);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i) + 1;
  return a;
}

}  // namespace

DisorderDistribution DisorderDistribution::gaussian(int d, double nu) {
  DisorderDistribution dist;
  dist.kind = DisorderKind::Gaussian;
  dist.d = d;
  dist.nu_table.assign(static_cast<std::size_t>(d * d - 1) * 4, nu);
  dist.active = all_axes(d);
  dist.validate();
  return dist;
}

DisorderDistribution DisorderDistribution::box(int d, double nu) {
  DisorderDistribution dist = gaussian(d, nu);
  dist.kind = DisorderKind::Box;
  return dist;
}

DisorderDistribution DisorderDistribution::singular_mask(
    int d, std::vector<int> active_axes, double nu) {
  DisorderDistribution dist;
  dist.kind = DisorderKind::SingularMask;
  dist.d = d;
  dist.nu_table.assign(static_cast<std::size_t>(d * d - 1) * 4, 0.0);
  dist.active = std::move(active_axes);
  for (int a : dist.active) {
    if (a < 1 || a > d * d - 1) {
      throw std::out_of_range("disorder: axis out of range");
    }
    for (int i = 0; i < 4; ++i) {
      dist.nu_table[static_cast<std::size_t>(a - 1) * 4 + i] = nu;
    }
  }
  dist.validate();
  return dist;
}

double DisorderDistribution::nu_at(int a, int iota, int iotap) const {
  return nu_table[static_cast<std::size_t>(a - 1) * 4 + iota * 2 + iotap];
}

bool DisorderDistribution::is_active(int a) const {
  return std::find(active.begin(), active.end(), a) != active.end();
}

void DisorderDistribution::validate() const {
  const int m = d * d - 1;
  if (d < 2) throw std::invalid_argument("disorder: d must be >= 2");
  if (nu_table.size() != static_cast<std::size_t>(m) * 4) {
    throw std::invalid_argument("disorder: nu table has wrong size");
  }
  if (active.empty()) throw std::invalid_argument("disorder: no active axis");
  for (int a : active) {
    if (a < 1 || a > m) throw std::out_of_range("disorder: axis out of range");
    for (int i = 0; i < 4; ++i) {
      if (!(nu_table[static_cast<std::size_t>(a - 1) * 4 + i] > 0.0)) {
        throw std::invalid_argument("disorder: active axis needs nu > 0");
      }
    }
  }
  if (kind == DisorderKind::SingularMask) {
    for (int a = 1; a <= m; ++a) {
      if (is_active(a)) continue;
      for (int i = 0; i < 4; ++i) {
        if (nu_table[static_cast<std::size_t>(a - 1) * 4 + i] != 0.0) {
          throw std::invalid_argument("disorder: masked axis must have nu = 0");
        }
      }
    }
  }
}

DisorderRealization DisorderRealization::clean(int d, int cells) {
  DisorderRealization r;
  r.d = d;
  r.cells = cells;
  r.theta.assign(2, std::vector<RealVector>(
                        static_cast<std::size_t>(2 * cells),
                        RealVector::Zero(d * d - 1)));
  return r;
}

DisorderRealization sample_realization(const DisorderDistribution& dist, int L,
                                       std::uint64_t seed,
                                       std::uint64_t sample_idx) {
  dist.validate();
  const int m = dist.d * dist.d - 1;
  DisorderRealization r = DisorderRealization::clean(dist.d, L);
  r.seed = seed;
  r.sample_index = sample_idx;
  RngStream rng(seed, sample_idx);
  for (int s = 0; s < 2 * L; ++s) {
    const int iotap = s % 2;  // integer vs half-odd space sublattice
    const int families = dist.time_reversal ? 1 : 2;
    for (int iota = 0; iota < families; ++iota) {
      RealVector theta = RealVector::Zero(m);
      for (int a = 1; a <= m; ++a) {
        if (!dist.is_active(a)) continue;
        const double nu = dist.nu_at(a, iota, iotap);
        const double draw = (dist.kind == DisorderKind::Box)
                                ? rng.uniform(-nu, nu)
                                : nu * rng.normal();
        theta(a - 1) = draw;
      }
      r.theta[static_cast<std::size_t>(iota)][static_cast<std::size_t>(s)] =
          theta;
    }
    if (dist.time_reversal) {
      r.theta[1][static_cast<std::size_t>(s)] =
          r.theta[0][static_cast<std::size_t>(s)];
    }
  }
  return r;
}

Matrix field_to_gate(const RealVector& theta, int d, bool transposed) {
  const auto gens = gell_mann_generators(d);
  if (theta.size() != static_cast<Eigen::Index>(gens.size())) {
    throw std::invalid_argument("field_to_gate: theta has wrong length");
  }
  Matrix h = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < gens.size(); ++a) {
    if (theta(static_cast<Eigen::Index>(a)) != 0.0) {
      h += theta(static_cast<Eigen::Index>(a)) * gens[a];
    }
  }
  if (transposed) h = h.transpose().eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Matrix out = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    out += std::exp(Cplx(0, es.eigenvalues()(k))) * es.eigenvectors().col(k) *
           es.eigenvectors().col(k).adjoint();
  }
  return out;
}

}  // namespace dusff
