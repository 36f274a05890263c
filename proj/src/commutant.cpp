#include "dusff/commutant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dusff/algebra.hpp"
#include "dusff/gates.hpp"
#include "dusff/transfer.hpp"

namespace dusff {

namespace {

// C += (X^dag X) kron 1 + 1 kron (conj(X) X^T) - X^dag kron X^T - X kron conj(X),
// the vectorized form of A -> ad_X^dag ad_X (A).
void accumulate_folded(Matrix& c, const Matrix& left, const Matrix& right) {
  const auto nl = left.rows();
  const auto nr = right.rows();
  const Matrix id_l = Matrix::Identity(nl, nl);
  const Matrix id_r = Matrix::Identity(nr, nr);
  c += kron(left.adjoint() * left, id_r);
  c += kron(id_l, (right.conjugate() * right.transpose()));
  c -= kron(left.adjoint(), right.transpose());
  c -= kron(left, right.conjugate());
}

std::vector<double> solve_low_spectrum(const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(),
          es.eigenvalues().data() + es.eigenvalues().size()};
}

// Exact orthonormal bases of the two-site-translation momentum sectors,
// one isometry per momentum k in Z_t.
std::vector<Matrix> momentum_sector_bases(int t, int d) {
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  const auto perm = shift_permutation(m, d, 2);
  std::vector<std::vector<Vector>> cols(static_cast<std::size_t>(t));
  std::vector<bool> seen(static_cast<std::size_t>(dim), false);
  for (std::int64_t b0 = 0; b0 < dim; ++b0) {
    if (seen[static_cast<std::size_t>(b0)]) continue;
    std::vector<std::int64_t> orbit;
    std::int64_t b = b0;
    do {
      seen[static_cast<std::size_t>(b)] = true;
      orbit.push_back(b);
      b = perm[static_cast<std::size_t>(b)];
    } while (b != b0);
    const int s = static_cast<int>(orbit.size());
    for (int r = 0; r < s; ++r) {
      Vector v = Vector::Zero(dim);
      for (int j = 0; j < s; ++j) {
        v(orbit[static_cast<std::size_t>(j)]) =
            std::exp(Cplx(0, 2 * M_PI * r * j / s)) / std::sqrt(double(s));
      }
      cols[static_cast<std::size_t>(r * (t / s))].push_back(v);
    }
  }
  std::vector<Matrix> bases(static_cast<std::size_t>(t));
  for (int k = 0; k < t; ++k) {
    auto& sector = cols[static_cast<std::size_t>(k)];
    Matrix basis(dim, static_cast<Eigen::Index>(sector.size()));
    for (std::size_t j = 0; j < sector.size(); ++j) {
      basis.col(static_cast<Eigen::Index>(j)) = sector[j];
    }
    bases[static_cast<std::size_t>(k)] = basis;
  }
  return bases;
}

CommutantReport finalize(std::vector<double> eigenvalues,
                         const CommutantOptions& opts, std::string method) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  CommutantReport report;
  report.method = std::move(method);
  report.max_eigenvalue = eigenvalues.empty() ? 0.0 : eigenvalues.back();
  const double ceiling =
      std::max(opts.zero_ceiling * report.max_eigenvalue, 1e-300);
  report.gap = 0.0;
  for (double ev : eigenvalues) {
    if (ev < ceiling) {
      ++report.dimension;
    } else {
      report.gap = ev;
      break;
    }
  }
  const std::size_t keep =
      std::min<std::size_t>(eigenvalues.size(),
                            static_cast<std::size_t>(report.dimension) + 8);
  report.low_spectrum.assign(eigenvalues.begin(), eigenvalues.begin() + keep);
  report.ambiguous = report.gap < std::max(opts.gap_floor, 10 * ceiling);
  return report;
}

}  // namespace

GeneratorSet build_M_set(int t, int d) {
  if (t < 1) throw std::invalid_argument("build_M_set: t must be >= 1");
  GeneratorSet set;
  set.label = "M";
  set.d = d;
  set.t = t;
  set.op_dim = int_pow(d, 2 * t);
  const int n_gen = d * d - 1;
  for (int iota : {0, 1}) {
    for (int a = 1; a <= n_gen; ++a) {
      set.ops.push_back(sublattice_magnetization(a, iota, t, d));
    }
  }
  for (int iota : {0, 1}) {
    for (int a = 1; a <= n_gen; ++a) {
      for (int b = 1; b <= n_gen; ++b) {
        set.ops.push_back(double_magnetization(a, b, iota, t, d));
      }
    }
  }
  return set;
}

GeneratorSet build_MT_set(int t, int d) {
  if (t < 1) throw std::invalid_argument("build_MT_set: t must be >= 1");
  GeneratorSet set;
  set.label = "MT";
  set.d = d;
  set.t = t;
  set.op_dim = int_pow(d, 2 * t);
  const int n_gen = d * d - 1;
  const Matrix refl = reflection_operator(2 * t, d);
  for (int a = 1; a <= n_gen; ++a) {
    set.ops.push_back(full_lattice_magnetization(a, t, d));
  }
  for (int iota : {0, 1}) {
    for (int a = 1; a <= n_gen; ++a) {
      for (int b = 1; b <= n_gen; ++b) {
        const Matrix mm = double_magnetization(a, b, iota, t, d);
        set.ops.push_back(mm + refl * mm * refl);
      }
    }
  }
  return set;
}

GeneratorSet build_Mn_set(int t, int d, int n) {
  if (n < 1) throw std::invalid_argument("build_Mn_set: n must be >= 1");
  GeneratorSet base = build_M_set(t, d);
  if (n == 1) return base;
  GeneratorSet set;
  set.label = "M" + std::to_string(n);
  set.d = d;
  set.t = t;
  set.copies = n;
  set.op_dim = int_pow(base.op_dim, n);
  if (set.op_dim > kDenseDimCap) {
    throw ResourceError("build_Mn_set: operator dimension over cap");
  }
  for (const auto& op : base.ops) set.ops.push_back(coproduct(op, n));
  return set;
}

CommutantReport commutant_dimension(const GeneratorSet& gens,
                                    const CommutantOptions& opts) {
  if (gens.ops.empty()) throw std::invalid_argument("commutant: empty set");
  const std::int64_t n = gens.op_dim;
  for (const auto& op : gens.ops) {
    if (op.rows() != n || op.cols() != n) {
      throw std::invalid_argument("commutant: dimension mismatch in set");
    }
  }

  // Momentum-sector path: valid whenever every generator commutes with the
  // two-site translation, which block-diagonalizes the folded operator over
  // sector pairs and keeps each eigenproblem small.
  bool sectors = opts.allow_sectors && gens.copies == 1;
  if (sectors) {
    const Matrix pi = shift_operator(2 * gens.t, gens.d);
    const Matrix pi2 = pi * pi;
    for (const auto& op : gens.ops) {
      if (max_abs(pi2 * op - op * pi2) > 1e-10) {
        sectors = false;
        break;
      }
    }
  }

  if (!sectors) {
    if (n * n > opts.direct_cap) {
      throw ResourceError("commutant: vectorized dimension over cap");
    }
    Matrix c = Matrix::Zero(n * n, n * n);
    for (const auto& op : gens.ops) accumulate_folded(c, op, op);
    return finalize(solve_low_spectrum(c), opts, "dense");
  }

  const auto bases = momentum_sector_bases(gens.t, gens.d);
  std::vector<std::vector<Matrix>> blocks(bases.size());
  for (std::size_t k = 0; k < bases.size(); ++k) {
    blocks[k].reserve(gens.ops.size());
    for (const auto& op : gens.ops) {
      blocks[k].push_back(bases[k].adjoint() * op * bases[k]);
    }
  }
  std::vector<double> eigenvalues;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    for (std::size_t k = 0; k < bases.size(); ++k) {
      const auto mj = blocks[j].front().rows();
      const auto mk = blocks[k].front().rows();
      if (mj * mk > opts.direct_cap) {
        throw ResourceError("commutant: sector block over cap");
      }
      Matrix c = Matrix::Zero(mj * mk, mj * mk);
      for (std::size_t x = 0; x < gens.ops.size(); ++x) {
        accumulate_folded(c, blocks[j][x], blocks[k][x]);
      }
      const auto ev = solve_low_spectrum(c);
      eigenvalues.insert(eigenvalues.end(), ev.begin(), ev.end());
    }
  }
  return finalize(std::move(eigenvalues), opts, "momentum_sectors");
}

double commutant_residual(const GeneratorSet& gens, const Matrix& a) {
  double sq = 0.0;
  for (const auto& op : gens.ops) {
    sq += (op * a - a * op).squaredNorm();
  }
  return std::sqrt(sq) / a.norm();
}

std::pair<std::vector<Matrix>, std::vector<Matrix>> cyclic_projectors(int t,
                                                                      int d) {
  if (t < 1) throw std::invalid_argument("cyclic_projectors: t must be >= 1");
  const int m = 2 * t;
  const Matrix pi = shift_operator(m, d);
  const Matrix pi2 = pi * pi;
  const Matrix refl = reflection_operator(m, d);
  std::vector<Matrix> plain, reflected;
  for (int k = 0; k < t; ++k) {
    Matrix q = Matrix::Zero(pi.rows(), pi.cols());
    Matrix power = Matrix::Identity(pi.rows(), pi.cols());
    for (int tau = 0; tau < t; ++tau) {
      q += std::exp(Cplx(0, 2 * M_PI * tau * k / t)) * power;
      power = pi2 * power;
    }
    q /= double(t);
    plain.push_back(q);
    reflected.push_back(refl * q);
  }
  return {plain, reflected};
}

RankReport dihedral_rank(int t, int d) {
  if (t < 1) throw std::invalid_argument("dihedral_rank: t must be >= 1");
  const int m = 2 * t;
  // slot maps of R^n Pi^{2 tau}; traces of permutation operators count cycles
  auto slot_map = [&](int n, int tau) {
    std::vector<int> map(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
      int q = (p + 2 * tau) % m;
      if (n) q = m - 1 - q;
      map[static_cast<std::size_t>(p)] = q;
    }
    return map;
  };
  std::vector<std::vector<int>> members;
  for (int n = 0; n < 2; ++n) {
    for (int tau = 0; tau < t; ++tau) members.push_back(slot_map(n, tau));
  }
  const int count = static_cast<int>(members.size());
  Eigen::MatrixXd gram(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      // cycles of members[i]^{-1} o members[j]
      std::vector<int> comp(static_cast<std::size_t>(m));
      std::vector<int> inv(static_cast<std::size_t>(m));
      for (int p = 0; p < m; ++p) inv[static_cast<std::size_t>(members[i][static_cast<std::size_t>(p)])] = p;
      for (int p = 0; p < m; ++p) comp[static_cast<std::size_t>(p)] = inv[static_cast<std::size_t>(members[j][static_cast<std::size_t>(p)])];
      std::vector<bool> seen(static_cast<std::size_t>(m), false);
      int cycles = 0;
      for (int p = 0; p < m; ++p) {
        if (seen[static_cast<std::size_t>(p)]) continue;
        ++cycles;
        int q = p;
        while (!seen[static_cast<std::size_t>(q)]) {
          seen[static_cast<std::size_t>(q)] = true;
          q = comp[static_cast<std::size_t>(q)];
        }
      }
      gram(i, j) = std::pow(double(d), cycles);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  RankReport report;
  const double scale = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  for (int i = count - 1; i >= 0; --i) {
    const double ev = std::max(es.eigenvalues()(i), 0.0);
    report.singular_values.push_back(std::sqrt(ev));
    if (ev > 1e-16 * scale) ++report.rank;
  }
  return report;
}

Vector momentum_state(int n, int k, int t, int d) {
  if (n < 1 || n > d - 1) throw std::out_of_range("momentum_state: occupation");
  if (k < 0 || k >= 2 * t) throw std::out_of_range("momentum_state: momentum");
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  // (s_+)^n |0> with s_+ = (s_1 + i s_2)/sqrt(2) reaches |n> with a known
  // positive coefficient; the translates are distinct basis states.
  const double j = (d - 1) / 2.0;
  double coeff = 1.0;
  for (int i = 0; i < n; ++i) {
    const double mm = -j + i;
    coeff *= std::sqrt(j * (j + 1) - mm * (mm + 1)) / std::sqrt(2.0);
  }
  Vector v = Vector::Zero(dim);
  for (int site = 0; site < m; ++site) {
    const std::int64_t idx = n * int_pow(d, m - 1 - site);
    v(idx) += coeff * std::exp(Cplx(0, M_PI * k * site / t));
  }
  v /= v.norm();
  return v;
}

SingularRankReport singular_disorder_ranks(const Matrix& gate_u,
                                           const Matrix& gate_w, int t,
                                           double rel_threshold) {
  const int d = 2;
  if (!is_dual_unitary(gate_u) || !is_dual_unitary(gate_w)) {
    throw std::invalid_argument("singular ranks: gates must be dual-unitary");
  }
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);

  const Matrix row_u = dual_row_operator(gate_u, t, d);
  const Matrix dual_w = dual_reshuffle(gate_w);
  Matrix row_w = Matrix::Identity(dim, dim);
  for (int k = 0; k < t; ++k) {
    row_w = embed_two_at_slots(dual_w, (2 * k - 1 + m) % m, m, d) * row_w;
  }

  const Matrix m3[2] = {sublattice_magnetization(3, 0, t, d),
                        sublattice_magnetization(3, 1, t, d)};
  Matrix n_op[2], nt_op[2];
  for (int iota : {0, 1}) {
    n_op[iota] = row_w.adjoint() * m3[iota] * row_w;
    nt_op[iota] = row_u * m3[iota] * row_u.adjoint();
  }

  auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
  auto family = [&](const Matrix base[2]) {
    std::vector<Matrix> ops;
    ops.push_back(m3[0]);
    ops.push_back(m3[1]);
    ops.push_back(base[0]);
    ops.push_back(base[1]);
    for (int iota : {0, 1}) {
      for (int iotap : {0, 1}) {
        ops.push_back(comm(base[iota], m3[iotap]));
      }
    }
    for (int iota : {0, 1}) {
      for (int iotap : {0, 1}) {
        ops.push_back(comm(comm(base[iota], m3[iotap]), m3[iotap]));
      }
    }
    ops.push_back(comm(comm(base[0], m3[0]), base[0]));
    ops.push_back(comm(comm(base[0], m3[1]), base[0]));
    ops.push_back(comm(comm(base[1], m3[0]), base[1]));
    return ops;
  };

  auto rank_of = [&](const std::vector<Matrix>& ops, std::vector<double>& sv) {
    Matrix stacked(static_cast<Eigen::Index>(ops.size()), dim * dim);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      stacked.row(static_cast<Eigen::Index>(i)) = vectorize(ops[i]).transpose();
    }
    Eigen::JacobiSVD<Matrix> svd(stacked);
    sv.assign(svd.singularValues().data(),
              svd.singularValues().data() + svd.singularValues().size());
    int rank = 0;
    for (double s : sv) {
      if (s > rel_threshold * sv.front()) ++rank;
    }
    return rank;
  };

  SingularRankReport report;
  const auto s1 = family(n_op);
  const auto s2 = family(nt_op);
  report.rank_s1 = rank_of(s1, report.sv1);
  report.rank_s2 = rank_of(s2, report.sv2);
  return report;
}

}  // namespace dusff
