#include "dusff/transfer.hpp"

#include <numeric>
#include "doctest.h"
#include "dusff/algebra.hpp"
#include "dusff/circuit.hpp"
#include "dusff/gates.hpp"

using namespace dusff;

namespace {

Matrix random_dual_gate(RngStream& rng, int d, double j_min = 0.3) {
  DualGateParams p;
  p.u1 = haar_unitary(d, rng);
  p.u2 = haar_unitary(d, rng);
  p.u3 = haar_unitary(d, rng);
  p.u4 = haar_unitary(d, rng);
  p.coupling = rng.uniform(j_min, M_PI - j_min);
  return build_dual_gate(p, d);
}

TransferContext random_context(std::uint64_t seed, int t, double nu = 0.2,
                               int nodes = 9) {
  RngStream rng(seed, 0);
  QuadratureSpec quad;
  quad.nodes_per_axis = nodes;
  return make_transfer_context(random_dual_gate(rng, 2), random_dual_gate(rng, 2),
                               t, DisorderDistribution::gaussian(2, nu), quad);
}

// Replaces every averaging stage by an explicit two-point measure, and returns
// the matching per-site field choices so the circuit side can enumerate the
// same ensemble exactly.
struct DiscreteMeasure {
  // nodes[iota][iotap] -> list of (theta, weight)
  std::vector<RealVector> thetas[2][2];
  std::vector<double> weights[2][2];
};

DiscreteMeasure two_point_measure(int d) {
  DiscreteMeasure m;
  RngStream rng(4242, 0);
  for (int iota : {0, 1}) {
    for (int iotap : {0, 1}) {
      for (int node = 0; node < 2; ++node) {
        RealVector theta(d * d - 1);
        for (int a = 0; a < d * d - 1; ++a) theta(a) = 0.4 * rng.normal();
        m.thetas[iota][iotap].push_back(theta);
      }
      const double w = rng.uniform(0.2, 0.8);
      m.weights[iota][iotap] = {w, 1.0 - w};
    }
  }
  return m;
}

AveragingStage stage_from_nodes(const std::vector<RealVector>& thetas,
                                const std::vector<double>& weights,
                                const std::vector<Matrix>& mags) {
  AveragingStage st;
  st.weights = weights;
  for (const auto& theta : thetas) {
    Matrix h = Matrix::Zero(mags.front().rows(), mags.front().cols());
    for (std::size_t a = 0; a < mags.size(); ++a) h += theta(a) * mags[a];
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix v = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      v += std::exp(Cplx(0, es.eigenvalues()(k))) * es.eigenvectors().col(k) *
           es.eigenvectors().col(k).adjoint();
    }
    st.unitaries.push_back(v);
  }
  return st;
}

}  // namespace

TEST_CASE("dual_row_operator") {
  SUBCASE("t = 1 is the single reshuffled gate") {
    const Matrix g = interaction_core(0.8, 2);
    CHECK(max_abs(dual_row_operator(g, 1, 2) - dual_reshuffle(g)) < 1e-14);
  }
  SUBCASE("SWAP rows are permutation operators") {
    const Matrix row = dual_row_operator(swap_gate(2), 3, 2);
    for (Eigen::Index i = 0; i < row.rows(); ++i) {
      for (Eigen::Index j = 0; j < row.cols(); ++j) {
        const double v = std::abs(row(i, j));
        CHECK((v < 1e-14 || std::abs(v - 1.0) < 1e-14));
      }
    }
    CHECK(is_unitary(row, 1e-12));
  }
  SUBCASE("rows of random dual gates are unitary") {
    RngStream rng(9, 0);
    const Matrix row = dual_row_operator(random_dual_gate(rng, 2), 3, 2);
    CHECK(unitarity_residual(row) < 1e-10);
  }
  SUBCASE("refuses gates that are not dual-unitary") {
    RngStream rng(10, 0);
    CHECK_THROWS_AS(dual_row_operator(haar_unitary(4, rng), 2, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("averaging operator") {
  const auto ctx = random_context(1, 2);
  const int n = static_cast<int>(ctx.op_dim);
  SUBCASE("fixes vectorized even translations") {
    for (const auto& fixed : translation_fixed_vectors(ctx)) {
      const Matrix a = unvectorize(fixed, n);
      for (int iotap : {0, 1}) {
        const Matrix out = averaging_apply(ctx, a, iotap);
        CHECK(max_abs(out - a) < 1e-12);
      }
    }
  }
  SUBCASE("non-expansive, strictly contracting on generic vectors") {
    RngStream rng(3, 3);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Cplx(rng.normal(), rng.normal());
    const double before = a.norm();
    const Matrix out = averaging_apply(ctx, a, 0);
    CHECK(out.norm() <= before * (1.0 + 1e-12));
    CHECK(out.norm() < before * 0.999);  // generic contraction at nu = 0.2
  }
  SUBCASE("vanishing disorder acts as the identity") {
    const auto clean = random_context(1, 2, /*nu=*/1e-13);
    RngStream rng(4, 4);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Cplx(rng.normal(), rng.normal());
    CHECK(max_abs(averaging_apply(clean, a, 1) - a) < 1e-10);
  }
}

TEST_CASE("transfer_apply") {
  const auto ctx = random_context(7, 2);
  const int n = static_cast<int>(ctx.op_dim);
  SUBCASE("translations are exact fixed points") {
    for (const auto& fixed : translation_fixed_vectors(ctx)) {
      const Vector out = transfer_apply_vec(ctx, fixed);
      CHECK((out - fixed).norm() < 1e-8 * fixed.norm());
    }
  }
  SUBCASE("matrix-free application matches the dense matrix") {
    const Matrix dense = transfer_dense(ctx);
    RngStream rng(8, 8);
    Vector v(ctx.doubled_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = Cplx(rng.normal(), rng.normal());
    }
    const Vector via_dense = dense * v;
    const Vector via_apply = transfer_apply_vec(ctx, v);
    CHECK((via_dense - via_apply).norm() < 1e-10 * v.norm());
    // adjoint path
    const Vector adj_dense = dense.adjoint() * v;
    const Vector adj_apply = vectorize(
        transfer_apply_adjoint(ctx, unvectorize(v, n)));
    CHECK((adj_dense - adj_apply).norm() < 1e-10 * v.norm());
  }
  SUBCASE("clean limit is norm preserving") {
    const auto clean = random_context(7, 2, /*nu=*/1e-13);
    RngStream rng(9, 9);
    Vector v(clean.doubled_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = Cplx(rng.normal(), rng.normal());
    }
    CHECK(std::abs(transfer_apply_vec(clean, v).norm() - v.norm()) <
          1e-9 * v.norm());
  }
}

TEST_CASE("discrete measure reproduces the exact disorder average") {
  // Two-point field measures make the full expectation a finite sum, so the
  // averaged transfer matrix can be checked against brute-force enumeration
  // of every realization, at machine precision.
  const int d = 2;
  const int L = 2;
  const auto measure = two_point_measure(d);

  RngStream rng(2025, 1);
  CircuitSpec spec;
  spec.d = d;
  spec.cells = L;
  spec.gate_U = random_dual_gate(rng, d);
  spec.gate_W = random_dual_gate(rng, d);
  spec.disorder = DisorderDistribution::gaussian(d, 0.2);  // placeholder law

  for (int t : {1, 2}) {
    // transfer side: context with the same discrete nodes
    auto ctx = make_transfer_context(spec.gate_U, spec.gate_W, t, spec.disorder);
    std::vector<Matrix> mags0, mags1, mags0t, mags1t;
    for (int a = 1; a <= 3; ++a) {
      mags0.push_back(sublattice_magnetization(a, 0, t, d));
      mags1.push_back(sublattice_magnetization(a, 1, t, d));
      mags0t.push_back(mags0.back().transpose());
      mags1t.push_back(mags1.back().transpose());
    }
    ctx.avg_half = {
        stage_from_nodes(measure.thetas[0][1], measure.weights[0][1], mags0),
        stage_from_nodes(measure.thetas[1][1], measure.weights[1][1], mags1)};
    ctx.avg_int = {
        stage_from_nodes(measure.thetas[0][0], measure.weights[0][0], mags0t),
        stage_from_nodes(measure.thetas[1][0], measure.weights[1][0], mags1t)};
    const Cplx via_transfer = trace_transfer_power(ctx, L);

    // circuit side: enumerate all 2^(4L) field assignments
    const int draws = 4 * L;
    Cplx expectation = 0.0;
    for (int mask = 0; mask < (1 << draws); ++mask) {
      DisorderRealization real = DisorderRealization::clean(d, L);
      double weight = 1.0;
      int bit = 0;
      for (int s = 0; s < 2 * L; ++s) {
        const int iotap = s % 2;
        for (int iota : {0, 1}) {
          const int pick = (mask >> bit) & 1;
          ++bit;
          real.theta[iota][s] = measure.thetas[iota][iotap][pick];
          weight *= measure.weights[iota][iotap][pick];
        }
      }
      const Cplx tr = trace_power(spec, real, t, TraceMethod::Dense);
      expectation += weight * std::norm(tr);
    }
    CAPTURE(t);
    CHECK(std::abs(via_transfer - expectation) < 1e-9 * std::abs(expectation));
  }
}

TEST_CASE("discrete measure, time-reversal variant") {
  const int d = 2;
  const int L = 2;
  RngStream rng(31337, 0);
  CircuitSpec spec;
  spec.d = d;
  spec.cells = L;
  spec.gate_U = build_time_reversal_gate(haar_unitary(2, rng), haar_unitary(2, rng),
                                         1.1, 2);
  spec.gate_W = build_time_reversal_gate(haar_unitary(2, rng), haar_unitary(2, rng),
                                         0.7, 2);
  auto dist = DisorderDistribution::gaussian(d, 0.2);
  dist.time_reversal = true;
  spec.disorder = dist;
  spec.time_reversal = true;

  // one two-point measure per space sublattice, shared by u and w
  std::vector<RealVector> thetas[2];
  std::vector<double> weights[2];
  for (int iotap : {0, 1}) {
    for (int node = 0; node < 2; ++node) {
      RealVector theta(3);
      for (int a = 0; a < 3; ++a) theta(a) = 0.35 * rng.normal();
      thetas[iotap].push_back(theta);
    }
    const double w = rng.uniform(0.3, 0.7);
    weights[iotap] = {w, 1.0 - w};
  }

  for (int t : {1, 2}) {
    auto ctx = make_transfer_context(spec.gate_U, spec.gate_W, t, dist);
    std::vector<Matrix> mags, mags_t;
    for (int a = 1; a <= 3; ++a) {
      mags.push_back(full_lattice_magnetization(a, t, d));
      mags_t.push_back(mags.back().transpose());
    }
    ctx.avg_half = {stage_from_nodes(thetas[1], weights[1], mags)};
    ctx.avg_int = {stage_from_nodes(thetas[0], weights[0], mags_t)};
    const Cplx via_transfer = trace_transfer_power(ctx, L);

    const int draws = 2 * L;  // one field per site
    Cplx expectation = 0.0;
    for (int mask = 0; mask < (1 << draws); ++mask) {
      DisorderRealization real = DisorderRealization::clean(d, L);
      double weight = 1.0;
      for (int s = 0; s < 2 * L; ++s) {
        const int pick = (mask >> s) & 1;
        real.theta[0][s] = thetas[s % 2][pick];
        real.theta[1][s] = thetas[s % 2][pick];
        weight *= weights[s % 2][pick];
      }
      const Cplx tr = trace_power(spec, real, t, TraceMethod::Dense);
      expectation += weight * std::norm(tr);
    }
    CAPTURE(t);
    CHECK(std::abs(via_transfer - expectation) < 1e-9 * std::abs(expectation));
  }
}

TEST_CASE("transfer spectra") {
  SUBCASE("interacting context at t = 2 has exactly two near-unit eigenvalues") {
    const auto ctx = random_context(11, 2);
    const auto report = leading_spectrum(ctx, 8);
    CHECK(report.method == "dense");
    CHECK(report.unimodular_count == 2);
    CHECK(std::abs(report.eigenvalues[0] - 1.0) < 1e-6);
    CHECK(std::abs(report.eigenvalues[1] - 1.0) < 1e-6);
    CHECK(std::abs(report.eigenvalues[2]) < 1.0 - 1e-4);
    CHECK(report.spectral_radius <= 1.0 + 1e-8);
  }
  SUBCASE("clean limit keeps the whole spectrum on the unit circle") {
    const auto ctx = random_context(12, 1, /*nu=*/1e-12);
    const auto report = leading_spectrum(ctx, 4);
    for (const Cplx lambda : report.eigenvalues) {
      CHECK(std::abs(std::abs(lambda) - 1.0) < 1e-8);
    }
  }
  SUBCASE("time-reversal context has 2t unimodular eigenvalues") {
    RngStream rng(13, 0);
    const int t = 2;
    auto dist = DisorderDistribution::gaussian(2, 0.2);
    dist.time_reversal = true;
    const Matrix gu = build_time_reversal_gate(haar_unitary(2, rng),
                                               haar_unitary(2, rng), 1.0, 2);
    const Matrix gw = build_time_reversal_gate(haar_unitary(2, rng),
                                               haar_unitary(2, rng), 0.8, 2);
    const auto ctx = make_transfer_context(gu, gw, t, dist);
    const auto report = leading_spectrum(ctx, 8);
    CHECK(report.unimodular_count == 2 * t);
  }
  SUBCASE("block iteration matches the dense spectrum") {
    const auto ctx = random_context(14, 2);
    SpectralOptions opts;
    opts.dense_cap = 1;  // force the matrix-free path
    const auto krylov = leading_spectrum(ctx, 4, opts);
    const auto dense = leading_spectrum(ctx, 4);
    CHECK(krylov.method == "block_rayleigh_ritz");
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(krylov.eigenvalues[i] - dense.eigenvalues[i]) < 1e-6);
    }
  }
  SUBCASE("no transient growth over a thousand applications") {
    const auto ctx = random_context(15, 1);
    RngStream rng(15, 5);
    Vector v(ctx.doubled_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = Cplx(rng.normal(), rng.normal());
    }
    const double norm0 = v.norm();
    const Matrix dense = transfer_dense(ctx);
    double sup = 0.0;
    for (int k = 0; k < 1000; ++k) {
      v = dense * v;
      sup = std::max(sup, v.norm() / norm0);
    }
    CHECK(sup <= 1.0 + 1e-6);
  }
}

TEST_CASE("trace curve and duality at small sizes") {
  const auto ctx = random_context(16, 1);
  const auto curve = transfer_trace_curve(ctx, 6);
  for (int L = 1; L <= 6; ++L) {
    CHECK(std::abs(curve[L - 1] - trace_transfer_power(ctx, L)) < 1e-9);
  }
}

TEST_CASE("eigenspace projector") {
  const auto ctx = random_context(17, 2);
  const Matrix p = eigenspace_projector(ctx);
  CHECK(max_abs(p * p - p) < 1e-10);
  CHECK(max_abs(p - p.adjoint()) < 1e-12);
  CHECK(std::abs(p.trace() - Cplx(ctx.t)) < 1e-9);
  const auto fixed = translation_fixed_vectors(ctx);
  CHECK((p * fixed[0] - fixed[0]).norm() < 1e-10 * fixed[0].norm());
  // T P = P T = P
  const Matrix dense = transfer_dense(ctx);
  CHECK(max_abs(dense * p - p) < 1e-8);
  CHECK(max_abs(p * dense - p) < 1e-8);
  // translation overlaps are the permutation cycle counts
  const int m = 2 * ctx.t;
  for (int a = 0; a < ctx.t; ++a) {
    for (int b = 0; b < ctx.t; ++b) {
      const Cplx overlap = fixed[a].dot(fixed[b]);
      const int shift = ((b - a) % ctx.t + ctx.t) % ctx.t;
      const double expect = std::pow(2.0, std::gcd(2 * shift, m));
      CHECK(std::abs(overlap - expect) < 1e-10);
    }
  }
}

TEST_CASE("inhomogeneous blocks") {
  SUBCASE("interacting pairs contract strictly") {
    const auto a = random_context(18, 2);
    const auto b = random_context(19, 2);
    const double norm = inhomogeneous_block_norm(a, b);
    CHECK(norm < 1.0);
    CHECK(norm > 0.0);
    // square of one context bounded by the single-block norm squared
    const Matrix p = eigenspace_projector(a);
    const Matrix q = Matrix::Identity(p.rows(), p.cols()) - p;
    Eigen::JacobiSVD<Matrix> svd(q * transfer_dense(a) * q);
    const double single = svd.singularValues()(0);
    CHECK(inhomogeneous_block_norm(a, a) <= single * single + 1e-9);
  }
  SUBCASE("SWAP pairs do not contract") {
    const auto dist = DisorderDistribution::gaussian(2, 0.2);
    const auto ctx = make_transfer_context(swap_gate(2), swap_gate(2), 2, dist);
    CHECK(std::abs(inhomogeneous_block_norm(ctx, ctx) - 1.0) < 1e-8);
  }
  SUBCASE("identical sites reduce to the homogeneous trace") {
    const auto ctx = random_context(20, 1);
    const std::vector<TransferContext> sites(4, ctx);
    const auto inhomo = inhomogeneous_trace(sites);
    CHECK(std::abs(inhomo.raw - trace_transfer_power(ctx, 4)) < 1e-9);
    CHECK(std::abs(inhomo.raw - Cplx(ctx.t) - inhomo.remainder) < 1e-8);
  }
  SUBCASE("remainder decays with the measured block norm") {
    const auto a = random_context(21, 2);
    const auto b = random_context(22, 2);
    const double norm = inhomogeneous_block_norm(a, b);
    for (int L : {4, 8}) {
      std::vector<TransferContext> sites;
      for (int x = 0; x < L; ++x) sites.push_back(x % 2 == 0 ? a : b);
      const auto inhomo = inhomogeneous_trace(sites);
      const double bound =
          static_cast<double>(a.doubled_dim()) * std::pow(norm, L / 2);
      CHECK(std::abs(inhomo.remainder) <= bound * (1.0 + 1e-6));
      CHECK(std::abs(inhomo.raw - Cplx(a.t) - inhomo.remainder) < 1e-8);
    }
  }
}

TEST_CASE("quadrature refinement stability") {
  // halving the step (9 -> 17 nodes) moves tr T^L by less than 1e-6
  RngStream rng(23, 0);
  const Matrix gu = random_dual_gate(rng, 2);
  const Matrix gw = random_dual_gate(rng, 2);
  const auto dist = DisorderDistribution::gaussian(2, 0.2);
  QuadratureSpec coarse, fine;
  coarse.nodes_per_axis = 9;
  fine.nodes_per_axis = 17;
  fine.grid_cap = 17 * 17 * 17 + 1;
  const auto c1 = make_transfer_context(gu, gw, 2, dist, coarse);
  const auto c2 = make_transfer_context(gu, gw, 2, dist, fine);
  for (int L : {4, 8}) {
    CHECK(std::abs(trace_transfer_power(c1, L) - trace_transfer_power(c2, L)) <
          1e-6);
  }
}
