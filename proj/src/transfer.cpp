#include "dusff/transfer.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dusff/algebra.hpp"
#include "dusff/gates.hpp"
#include "dusff/quadrature.hpp"
#include "dusff/rng.hpp"

namespace dusff {

namespace {

Matrix hermitian_exp_i(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto n = h.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.noalias() += std::exp(Cplx(0, es.eigenvalues()(k))) *
                     es.eigenvectors().col(k) *
                     es.eigenvectors().col(k).adjoint();
  }
  return out;
}

// Discrete-measure realization of one exp(i theta . M) average.
AveragingStage make_stage(const std::vector<Matrix>& axis_mags,
                          const std::vector<double>& axis_nus,
                          DisorderKind kind, const QuadratureSpec& quad,
                          std::uint64_t mc_stream) {
  const int axes = static_cast<int>(axis_mags.size());
  const auto dim = axis_mags.front().rows();
  AveragingStage stage;

  std::int64_t grid = 1;
  for (int a = 0; a < axes && grid <= quad.grid_cap; ++a) {
    grid *= quad.nodes_per_axis;
  }

  std::vector<RealVector> thetas;
  if (grid <= quad.grid_cap) {
    const Quadrature1D rule = (kind == DisorderKind::Box)
                                  ? gauss_legendre(quad.nodes_per_axis)
                                  : gauss_hermite(quad.nodes_per_axis);
    const double norm = (kind == DisorderKind::Box) ? 0.5 : 1.0 / std::sqrt(M_PI);
    const int nn = quad.nodes_per_axis;
    for (std::int64_t flat = 0; flat < grid; ++flat) {
      std::int64_t rest = flat;
      RealVector theta(axes);
      double w = 1.0;
      for (int a = 0; a < axes; ++a) {
        const int i = static_cast<int>(rest % nn);
        rest /= nn;
        const double x = rule.nodes[static_cast<std::size_t>(i)];
        theta(a) = (kind == DisorderKind::Box) ? axis_nus[a] * x
                                               : std::sqrt(2.0) * axis_nus[a] * x;
        w *= norm * rule.weights[static_cast<std::size_t>(i)];
      }
      thetas.push_back(theta);
      stage.weights.push_back(w);
    }
  } else {
    // product grid too large (d >= 3 with many axes): Monte Carlo nodes
    RngStream rng(quad.mc_seed, mc_stream);
    for (int k = 0; k < quad.mc_nodes; ++k) {
      RealVector theta(axes);
      for (int a = 0; a < axes; ++a) {
        theta(a) = (kind == DisorderKind::Box)
                       ? rng.uniform(-axis_nus[a], axis_nus[a])
                       : axis_nus[a] * rng.normal();
      }
      thetas.push_back(theta);
      stage.weights.push_back(1.0 / quad.mc_nodes);
    }
  }

  stage.unitaries.resize(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    Matrix h = Matrix::Zero(dim, dim);
    for (int a = 0; a < axes; ++a) h += thetas[k](a) * axis_mags[a];
    stage.unitaries[k] = hermitian_exp_i(h);
  }
  return stage;
}

Matrix apply_stages(const std::vector<AveragingStage>& stages, const Matrix& a,
                    bool adjoint) {
  Matrix cur = a, tmp;
  for (const auto& s : stages) {
    s.apply(cur, tmp, adjoint);
    cur.swap(tmp);
  }
  return cur;
}

Matrix stages_dense(const std::vector<AveragingStage>& stages, bool adjoint,
                    std::int64_t dim) {
  Matrix out = Matrix::Identity(dim * dim, dim * dim);
  for (const auto& s : stages) out = s.dense_super(adjoint) * out;
  return out;
}

std::vector<Cplx> dense_eigenvalues(const TransferContext& ctx,
                                    std::int64_t doubled_cap) {
  const Matrix t = transfer_dense(ctx, doubled_cap);
  Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
  std::vector<Cplx> ev(es.eigenvalues().data(),
                       es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(),
            [](Cplx a, Cplx b) { return std::abs(a) > std::abs(b); });
  return ev;
}

}  // namespace

void AveragingStage::apply(const Matrix& in, Matrix& out, bool adjoint) const {
  const auto n = in.rows();
  const int count = static_cast<int>(unitaries.size());
#ifdef _OPENMP
  const int threads = std::min(omp_get_max_threads(), std::max(1, count / 16));
#else
  const int threads = 1;
#endif
  if (threads > 1 && n >= 32) {
    std::vector<Matrix> partial(static_cast<std::size_t>(threads),
                                Matrix::Zero(n, n));
#pragma omp parallel num_threads(threads)
    {
#ifdef _OPENMP
      const int me = omp_get_thread_num();
#else
      const int me = 0;
#endif
      Matrix tmp(n, n);
#pragma omp for schedule(static)
      for (int k = 0; k < count; ++k) {
        const Matrix& v = unitaries[static_cast<std::size_t>(k)];
        if (adjoint) {
          tmp.noalias() = v.adjoint() * in * v;
        } else {
          tmp.noalias() = v * in * v.adjoint();
        }
        partial[static_cast<std::size_t>(me)] += weights[static_cast<std::size_t>(k)] * tmp;
      }
    }
    out = Matrix::Zero(n, n);
    for (const auto& p : partial) out += p;  // fixed order for reproducibility
  } else {
    out = Matrix::Zero(n, n);
    Matrix tmp(n, n);
    for (int k = 0; k < count; ++k) {
      const Matrix& v = unitaries[static_cast<std::size_t>(k)];
      if (adjoint) {
        tmp.noalias() = v.adjoint() * in * v;
      } else {
        tmp.noalias() = v * in * v.adjoint();
      }
      out += weights[static_cast<std::size_t>(k)] * tmp;
    }
  }
}

Matrix AveragingStage::dense_super(bool adjoint) const {
  const auto n = unitaries.front().rows();
  Matrix out = Matrix::Zero(n * n, n * n);
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    const Matrix v = adjoint ? unitaries[k].adjoint() : unitaries[k];
    out += weights[k] * kron(v, v.conjugate());
  }
  return out;
}

Matrix dual_row_operator(const Matrix& gate, int t, int d, double tol) {
  const auto check = check_dual_unitary(gate, tol);
  if (!check.ok) {
    throw std::invalid_argument(
        "dual_row_operator: gate fails the duality check (residuals " +
        std::to_string(check.unitarity_residual) + ", " +
        std::to_string(check.dual_residual) + "); the row would not be unitary");
  }
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  const Matrix dual = dual_reshuffle(gate);
  Matrix row = Matrix::Identity(dim, dim);
  for (int k = 0; k < t; ++k) {
    row = embed_two_at_slots(dual, 2 * k, m, d) * row;
  }
  return row;
}

TransferContext make_transfer_context(const Matrix& gate_u, const Matrix& gate_w,
                                      int t, const DisorderDistribution& dist,
                                      const QuadratureSpec& quad,
                                      int moment_order, double duality_tol) {
  if (t < 1) throw std::invalid_argument("transfer: t must be >= 1");
  if (moment_order < 1) throw std::invalid_argument("transfer: moment order >= 1");
  dist.validate();
  const int d = dist.d;

  TransferContext ctx;
  ctx.d = d;
  ctx.t = t;
  ctx.moment_order = moment_order;
  ctx.time_reversal = dist.time_reversal;
  ctx.dist = dist;
  ctx.quad = quad;
  ctx.op_dim = int_pow(int_pow(d, 2 * t), moment_order);
  if (ctx.op_dim > kDenseDimCap) {
    throw ResourceError("transfer: operator dimension over cap");
  }

  // Rows of the two sublattices. The W row lives on the wrapped pairs, which
  // equals conjugating the straight-pair row by a one-slot shift.
  const Matrix row_u_base = dual_row_operator(gate_u, t, d, duality_tol);
  {
    const auto dwc = check_dual_unitary(gate_w, duality_tol);
    if (!dwc.ok) {
      throw std::invalid_argument("transfer: W gate fails the duality check");
    }
  }
  const int m = 2 * t;
  const std::int64_t row_dim = int_pow(d, m);
  const Matrix dual_w = dual_reshuffle(gate_w);
  Matrix row_w_base = Matrix::Identity(row_dim, row_dim);
  for (int k = 0; k < t; ++k) {
    row_w_base = embed_two_at_slots(dual_w, (2 * k - 1 + m) % m, m, d) * row_w_base;
  }
  ctx.row_u = tensor_power(row_u_base, moment_order);
  ctx.row_w = tensor_power(row_w_base, moment_order);

  // Magnetizations entering the averaging exponentials, restricted to the
  // active axes and lifted to moment order n by coproducts. The fields of the
  // u family couple to the integer time sublattice and the w family to the
  // half-odd one; integer-space-site fields end up on transposed
  // magnetizations once the gates are reshuffled sideways.
  const int n_gen = d * d - 1;
  auto lifted_mag = [&](int a, int iota, bool transposed) {
    Matrix mag = (iota < 0) ? full_lattice_magnetization(a, t, d)
                            : sublattice_magnetization(a, iota, t, d);
    if (transposed) mag = mag.transpose().eval();
    return moment_order == 1 ? mag : coproduct(mag, moment_order);
  };

  std::uint64_t mc_stream = 0;
  auto build = [&](int iota_field, int iotap, bool transposed) {
    std::vector<Matrix> mags;
    std::vector<double> nus;
    for (int a = 1; a <= n_gen; ++a) {
      if (!dist.is_active(a)) continue;
      mags.push_back(lifted_mag(a, dist.time_reversal ? -1 : iota_field, transposed));
      nus.push_back(dist.nu_at(a, dist.time_reversal ? 0 : iota_field, iotap));
    }
    return make_stage(mags, nus, dist.kind, quad, mc_stream++);
  };

  if (dist.time_reversal) {
    ctx.avg_half = {build(0, 1, false)};
    ctx.avg_int = {build(0, 0, true)};
  } else {
    ctx.avg_half = {build(0, 1, false), build(1, 1, false)};
    ctx.avg_int = {build(0, 0, true), build(1, 0, true)};
  }
  return ctx;
}

Matrix transfer_apply(const TransferContext& ctx, const Matrix& a) {
  Matrix cur = apply_stages(ctx.avg_half, a, /*adjoint=*/false);
  cur = ctx.row_w * cur * ctx.row_w.adjoint();
  cur = apply_stages(ctx.avg_int, cur, /*adjoint=*/false);
  cur = ctx.row_u * cur * ctx.row_u.adjoint();
  return cur;
}

Matrix transfer_apply_adjoint(const TransferContext& ctx, const Matrix& a) {
  Matrix cur = ctx.row_u.adjoint() * a * ctx.row_u;
  cur = apply_stages(ctx.avg_int, cur, /*adjoint=*/true);
  cur = ctx.row_w.adjoint() * cur * ctx.row_w;
  cur = apply_stages(ctx.avg_half, cur, /*adjoint=*/true);
  return cur;
}

Vector transfer_apply_vec(const TransferContext& ctx, const Vector& v) {
  if (v.size() != ctx.doubled_dim()) {
    throw std::invalid_argument("transfer_apply_vec: length mismatch");
  }
  return vectorize(transfer_apply(ctx, unvectorize(v, static_cast<int>(ctx.op_dim))));
}

Matrix averaging_apply(const TransferContext& ctx, const Matrix& a, int iotap,
                       bool adjoint) {
  if (iotap != 0 && iotap != 1) throw std::out_of_range("averaging_apply: iota'");
  return apply_stages(iotap == 0 ? ctx.avg_int : ctx.avg_half, a, adjoint);
}

Matrix transfer_dense(const TransferContext& ctx, std::int64_t doubled_cap) {
  const std::int64_t dim = ctx.doubled_dim();
  if (dim > doubled_cap) {
    throw ResourceError("transfer_dense: doubled dimension " +
                        std::to_string(dim) + " over cap " +
                        std::to_string(doubled_cap) +
                        "; use the matrix-free application");
  }
  const std::int64_t n = ctx.op_dim;
  Matrix t = stages_dense(ctx.avg_half, /*adjoint=*/false, n);
  t = kron(ctx.row_w, ctx.row_w.conjugate()) * t;
  t = stages_dense(ctx.avg_int, /*adjoint=*/false, n) * t;
  t = kron(ctx.row_u, ctx.row_u.conjugate()) * t;
  return t;
}

Cplx trace_transfer_power(const TransferContext& ctx, int L,
                          std::int64_t doubled_cap) {
  if (L < 1) throw std::invalid_argument("trace_transfer_power: L must be >= 1");
  const auto ev = dense_eigenvalues(ctx, doubled_cap);
  Cplx total = 0.0;
  for (const Cplx lambda : ev) total += std::pow(lambda, L);
  return total;
}

std::vector<Cplx> transfer_trace_curve(const TransferContext& ctx, int L_max,
                                       std::int64_t doubled_cap) {
  const auto ev = dense_eigenvalues(ctx, doubled_cap);
  std::vector<Cplx> curve(static_cast<std::size_t>(L_max));
  std::vector<Cplx> powers(ev.begin(), ev.end());
  for (int L = 1; L <= L_max; ++L) {
    Cplx total = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      total += powers[i];
      powers[i] *= ev[i];
    }
    curve[static_cast<std::size_t>(L - 1)] = total;
  }
  return curve;
}

SpectralReport leading_spectrum(const TransferContext& ctx, int k,
                                const SpectralOptions& opts) {
  if (k < 1 || k > 32) throw std::invalid_argument("leading_spectrum: k in [1,32]");
  SpectralReport report;
  report.gap_floor = opts.gap_floor;
  const double unimod = 1.0 - 10.0 * opts.gap_floor;
  const std::int64_t dim = ctx.doubled_dim();

  if (dim <= opts.dense_cap) {
    const auto ev = dense_eigenvalues(ctx, opts.dense_cap);
    report.method = "dense";
    report.spectral_radius = std::abs(ev.front());
    for (const Cplx lambda : ev) {
      if (std::abs(lambda) > unimod) ++report.unimodular_count;
      if (std::abs(std::abs(lambda) - unimod) < opts.gap_floor) {
        report.ambiguous = true;
      }
    }
    report.eigenvalues.assign(ev.begin(),
                              ev.begin() + std::min<std::size_t>(ev.size(), k));
    return report;
  }

  // Block Rayleigh-Ritz on the matrix-free application; the block start
  // resolves the multiplicity of the leading cluster.
  const int n = static_cast<int>(ctx.op_dim);
  const int block = std::max(opts.block_size, k / 2 + 1);
  RngStream rng(opts.seed, 0);
  Matrix basis(dim, 0), image(dim, 0);
  Matrix seeds(dim, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      seeds(i, j) = Cplx(rng.normal(), rng.normal());
    }
  }

  auto orthonormalize_against = [&](Matrix& cols, const Matrix& against) {
    for (int pass = 0; pass < 2; ++pass) {
      if (against.cols() > 0) {
        cols -= against * (against.adjoint() * cols);
      }
      for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
          cols.col(j) -= cols.col(i).dot(cols.col(j)) * cols.col(i);
        }
        const double nrm = cols.col(j).norm();
        if (nrm > 1e-12) cols.col(j) /= nrm;
        else cols.col(j).setZero();
      }
    }
  };

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    basis.resize(dim, 0);
    image.resize(dim, 0);
    Matrix blk = seeds;
    orthonormalize_against(blk, basis);
    while (basis.cols() < opts.max_basis) {
      // drop exhausted directions
      Matrix kept(dim, 0);
      for (Eigen::Index j = 0; j < blk.cols(); ++j) {
        if (blk.col(j).norm() > 0.5) {
          kept.conservativeResize(dim, kept.cols() + 1);
          kept.col(kept.cols() - 1) = blk.col(j);
        }
      }
      if (kept.cols() == 0) break;
      blk = kept;
      Matrix img(dim, blk.cols());
      for (Eigen::Index j = 0; j < blk.cols(); ++j) {
        img.col(j) = vectorize(transfer_apply(ctx, unvectorize(blk.col(j), n)));
      }
      const auto old = basis.cols();
      basis.conservativeResize(dim, old + blk.cols());
      basis.rightCols(blk.cols()) = blk;
      image.conservativeResize(dim, old + blk.cols());
      image.rightCols(blk.cols()) = img;
      blk = img;
      orthonormalize_against(blk, basis);
    }

    const Matrix h = basis.adjoint() * image;
    Eigen::ComplexEigenSolver<Matrix> es(h);
    std::vector<int> order(static_cast<std::size_t>(h.rows()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });

    const int take = std::min<int>(k, static_cast<int>(order.size()));
    report.eigenvalues.clear();
    report.max_residual = 0.0;
    for (int i = 0; i < take; ++i) {
      const Cplx lambda = es.eigenvalues()(order[static_cast<std::size_t>(i)]);
      const Vector ritz =
          basis * es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
      const Vector resid = image * es.eigenvectors().col(order[static_cast<std::size_t>(i)]) -
                           lambda * ritz;
      report.max_residual = std::max(report.max_residual, resid.norm());
      report.eigenvalues.push_back(lambda);
    }
    if (report.max_residual <= opts.tol) break;
    // restart from the best Ritz vectors plus a fresh random direction
    seeds.resize(dim, take + 1);
    for (int i = 0; i < take; ++i) {
      seeds.col(i) = basis * es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      seeds(i, take) = Cplx(rng.normal(), rng.normal());
    }
    if (restart == opts.max_restarts) {
      throw ConvergenceError("leading_spectrum: Ritz residual " +
                                 std::to_string(report.max_residual) +
                                 " above tolerance after restarts",
                             report.max_residual);
    }
  }

  report.method = "block_rayleigh_ritz";
  report.spectral_radius = std::abs(report.eigenvalues.front());
  for (const Cplx lambda : report.eigenvalues) {
    if (std::abs(lambda) > unimod) ++report.unimodular_count;
    if (std::abs(std::abs(lambda) - unimod) < opts.gap_floor) report.ambiguous = true;
  }
  return report;
}

double spectral_radius(const TransferContext& ctx, const SpectralOptions& opts) {
  return leading_spectrum(ctx, std::min(4, static_cast<int>(ctx.doubled_dim())),
                          opts)
      .spectral_radius;
}

std::vector<Vector> translation_fixed_vectors(const TransferContext& ctx) {
  const int m = 2 * ctx.t;
  const Matrix pi = shift_operator(m, ctx.d);
  const Matrix pi2 = pi * pi;
  std::vector<Vector> out;
  Matrix power = Matrix::Identity(pi2.rows(), pi2.cols());
  for (int tau = 0; tau < ctx.t; ++tau) {
    out.push_back(vectorize(tensor_power(power, ctx.moment_order)));
    power = pi2 * power;
  }
  return out;
}

Matrix eigenspace_projector(const TransferContext& ctx) {
  const auto vecs = translation_fixed_vectors(ctx);
  const int t = static_cast<int>(vecs.size());
  const std::int64_t dim = ctx.doubled_dim();
  Matrix v(dim, t);
  for (int i = 0; i < t; ++i) v.col(i) = vecs[static_cast<std::size_t>(i)];
  const Matrix gram = v.adjoint() * v;
  return v * gram.inverse() * v.adjoint();
}

double inhomogeneous_block_norm(const TransferContext& ctx_a,
                                const TransferContext& ctx_b,
                                std::int64_t doubled_cap) {
  if (ctx_a.t != ctx_b.t || ctx_a.d != ctx_b.d ||
      ctx_a.moment_order != ctx_b.moment_order) {
    throw std::invalid_argument("block_norm: contexts must share (t, d, n)");
  }
  const Matrix p = eigenspace_projector(ctx_a);
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  const Matrix r =
      q * transfer_dense(ctx_a, doubled_cap) * transfer_dense(ctx_b, doubled_cap) * q;
  Eigen::JacobiSVD<Matrix> svd(r);
  return svd.singularValues()(0);
}

InhomogeneousTrace inhomogeneous_trace(const std::vector<TransferContext>& ctxs,
                                       std::int64_t doubled_cap) {
  if (ctxs.empty() || ctxs.size() % 2 != 0) {
    throw std::invalid_argument("inhomogeneous_trace: need an even number of sites");
  }
  std::vector<Matrix> dense;
  dense.reserve(ctxs.size());
  for (const auto& c : ctxs) dense.push_back(transfer_dense(c, doubled_cap));

  Matrix raw = dense.front();
  for (std::size_t i = 1; i < dense.size(); ++i) raw = raw * dense[i];

  const Matrix p = eigenspace_projector(ctxs.front());
  const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
  Matrix rem = Matrix::Identity(p.rows(), p.cols());
  for (std::size_t i = 0; i + 1 < dense.size(); i += 2) {
    rem = rem * (q * dense[i] * dense[i + 1] * q);
  }
  InhomogeneousTrace out;
  out.raw = raw.trace();
  out.remainder = rem.trace();
  return out;
}

}  // namespace dusff
