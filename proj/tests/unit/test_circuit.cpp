#include "dusff/circuit.hpp"

#include <numeric>

#include "doctest.h"
#include "dusff/algebra.hpp"
#include "dusff/gates.hpp"

using namespace dusff;

namespace {

CircuitSpec random_dual_spec(int L, std::uint64_t seed, bool time_reversal = false,
                             double nu = 0.2) {
  RngStream rng(seed, 0);
  CircuitSpec spec;
  spec.d = 2;
  spec.cells = L;
  if (time_reversal) {
    spec.gate_U = build_time_reversal_gate(haar_unitary(2, rng),
                                           haar_unitary(2, rng),
                                           rng.uniform(0.3, M_PI - 0.3), 2);
    spec.gate_W = build_time_reversal_gate(haar_unitary(2, rng),
                                           haar_unitary(2, rng),
                                           rng.uniform(0.3, M_PI - 0.3), 2);
  } else {
    DualGateParams p;
    p.u1 = haar_unitary(2, rng);
    p.u2 = haar_unitary(2, rng);
    p.u3 = haar_unitary(2, rng);
    p.u4 = haar_unitary(2, rng);
    p.coupling = rng.uniform(0.3, M_PI - 0.3);
    spec.gate_U = build_dual_gate(p, 2);
    p.u1 = haar_unitary(2, rng);
    p.u2 = haar_unitary(2, rng);
    p.u3 = haar_unitary(2, rng);
    p.u4 = haar_unitary(2, rng);
    p.coupling = rng.uniform(0.3, M_PI - 0.3);
    spec.gate_W = build_dual_gate(p, 2);
  }
  spec.disorder = DisorderDistribution::gaussian(2, nu);
  spec.disorder.time_reversal = time_reversal;
  spec.time_reversal = time_reversal;
  return spec;
}

CircuitSpec swap_spec(int L) {
  CircuitSpec spec;
  spec.d = 2;
  spec.cells = L;
  spec.gate_U = swap_gate(2);
  spec.gate_W = swap_gate(2);
  spec.disorder = DisorderDistribution::gaussian(2, 0.2);
  return spec;
}

}  // namespace

TEST_CASE("floquet_operator basics") {
  SUBCASE("one cell of SWAPs with no disorder is the identity") {
    const auto spec = swap_spec(1);
    const auto clean = DisorderRealization::clean(2, 1);
    const Matrix u = floquet_operator(spec, clean);
    // by hand: (S W S) U with U = W = SWAP
    const Matrix s = swap_gate(2);
    const Matrix expect = (s * s * s) * s;
    CHECK(max_abs(u - expect) < 1e-14);
    CHECK(max_abs(u - Matrix::Identity(4, 4)) < 1e-14);
  }
  SUBCASE("a clean SWAP circuit shifts the two sublattices oppositely") {
    const auto spec = swap_spec(3);
    const auto clean = DisorderRealization::clean(2, 3);
    const Matrix u = floquet_operator(spec, clean);
    // slot s carries a right mover (s even, +2) or a left mover (s odd, -2)
    const int m = 6;
    Matrix expect = Matrix::Zero(64, 64);
    for (int idx = 0; idx < 64; ++idx) {
      int out = 0;
      for (int s = 0; s < m; ++s) {
        const int bit = (idx >> (m - 1 - s)) & 1;
        const int dest = (s % 2 == 0) ? (s + 2) % m : (s - 2 + m) % m;
        out |= bit << (m - 1 - dest);
      }
      expect(out, idx) = 1.0;
    }
    CHECK(max_abs(u - expect) < 1e-14);
  }
  SUBCASE("unitary for random specs with disorder") {
    const auto spec = random_dual_spec(2, 21);
    const auto real = sample_realization(spec.disorder, 2, 21, 0);
    const Matrix u = floquet_operator(spec, real);
    CHECK(unitarity_residual(u) < 1e-10);
  }
  SUBCASE("clean homogeneous circuits commute with the cell shift") {
    auto spec = random_dual_spec(3, 33);
    const auto clean = DisorderRealization::clean(2, 3);
    const Matrix u = floquet_operator(spec, clean);
    const Matrix pi = shift_operator(6, 2);
    const Matrix pi2 = pi * pi;
    CHECK(max_abs(u * pi2 - pi2 * u) < 1e-10);
  }
  SUBCASE("refuses above the dense cap") {
    const auto spec = swap_spec(8);
    const auto clean = DisorderRealization::clean(2, 8);
    CHECK_THROWS_AS(floquet_operator(spec, clean), ResourceError);
  }
}

TEST_CASE("apply_floquet matches the dense operator") {
  const auto spec = random_dual_spec(3, 5);
  const auto real = sample_realization(spec.disorder, 3, 5, 2);
  const Matrix u = floquet_operator(spec, real);
  RngStream rng(17, 0);
  Vector psi(spec.hilbert_dim());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    psi(i) = Cplx(rng.normal(), rng.normal());
  }
  const double norm_in = psi.norm();
  Vector expect = u * psi;
  apply_floquet(spec, real, psi);
  CHECK((psi - expect).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(psi.norm() - norm_in) < 1e-12 * norm_in);

  Vector wrong(3);
  CHECK_THROWS_AS(apply_floquet(spec, real, wrong), std::invalid_argument);
}

TEST_CASE("time-reversal construction") {
  const auto spec = random_dual_spec(2, 8, /*time_reversal=*/true);
  const auto real = sample_realization(spec.disorder, 2, 8, 1);
  const Matrix u = floquet_operator(spec, real);
  const Matrix k = time_reversal_conjugator(spec);
  CHECK(max_abs(k - k.transpose()) < 1e-12);
  CHECK(unitarity_residual(k) < 1e-12);
  CHECK(max_abs(k * u * k.adjoint() - u.transpose()) < 1e-10);
}

TEST_CASE("trace_power") {
  SUBCASE("t = 0 gives the Hilbert dimension") {
    const auto spec = random_dual_spec(2, 3);
    const auto real = sample_realization(spec.disorder, 2, 3, 0);
    CHECK(trace_power(spec, real, 0) == Cplx(16.0));
  }
  SUBCASE("dense, sweep and row-product paths agree") {
    for (std::uint64_t seed : {1ull, 2ull}) {
      const auto spec = random_dual_spec(3, seed);
      const auto real = sample_realization(spec.disorder, 3, seed, 4);
      for (int t : {1, 2, 3}) {
        const Cplx dense = trace_power(spec, real, t, TraceMethod::Dense);
        const Cplx sweep = trace_power(spec, real, t, TraceMethod::Sweep);
        const Cplx rows = trace_power(spec, real, t, TraceMethod::DualRows);
        CHECK(std::abs(dense - sweep) < 1e-8);
        CHECK(std::abs(dense - rows) < 1e-8);
      }
    }
  }
  SUBCASE("row product agrees for qutrits") {
    RngStream rng(31, 0);
    CircuitSpec spec;
    spec.d = 3;
    spec.cells = 2;
    DualGateParams p;
    p.u1 = haar_unitary(3, rng);
    p.u2 = haar_unitary(3, rng);
    p.u3 = haar_unitary(3, rng);
    p.u4 = haar_unitary(3, rng);
    p.coupling = 0.9;
    spec.gate_U = build_dual_gate(p, 3);
    p.coupling = 1.7;
    spec.gate_W = build_dual_gate(p, 3);
    spec.disorder = DisorderDistribution::gaussian(3, 0.2);
    const auto real = sample_realization(spec.disorder, 2, 31, 0);
    for (int t : {1, 2}) {
      const Cplx dense = trace_power(spec, real, t, TraceMethod::Dense);
      const Cplx rows = trace_power(spec, real, t, TraceMethod::DualRows);
      CHECK(std::abs(dense - rows) < 1e-8 * std::abs(dense) + 1e-8);
    }
  }
  SUBCASE("row product agrees for inhomogeneous gates") {
    RngStream rng(77, 0);
    CircuitSpec spec;
    spec.d = 2;
    spec.cells = 3;
    for (int x = 0; x < 3; ++x) {
      DualGateParams p;
      p.u1 = haar_unitary(2, rng);
      p.u2 = haar_unitary(2, rng);
      p.u3 = haar_unitary(2, rng);
      p.u4 = haar_unitary(2, rng);
      p.coupling = rng.uniform(0.3, M_PI - 0.3);
      spec.gates_U.push_back(build_dual_gate(p, 2));
      p.u1 = haar_unitary(2, rng);
      p.u2 = haar_unitary(2, rng);
      p.u3 = haar_unitary(2, rng);
      p.u4 = haar_unitary(2, rng);
      p.coupling = rng.uniform(0.3, M_PI - 0.3);
      spec.gates_W.push_back(build_dual_gate(p, 2));
    }
    spec.disorder = DisorderDistribution::gaussian(2, 0.3);
    const auto real = sample_realization(spec.disorder, 3, 77, 0);
    for (int t : {1, 2}) {
      const Cplx dense = trace_power(spec, real, t, TraceMethod::Dense);
      const Cplx rows = trace_power(spec, real, t, TraceMethod::DualRows);
      CHECK(std::abs(dense - rows) < 1e-8);
    }
  }
  SUBCASE("row product is exact even for non-dual-unitary gates") {
    RngStream rng(13, 0);
    CircuitSpec spec;
    spec.d = 2;
    spec.cells = 2;
    spec.gate_U = haar_unitary(4, rng);
    spec.gate_W = haar_unitary(4, rng);
    spec.disorder = DisorderDistribution::gaussian(2, 0.2);
    const auto real = sample_realization(spec.disorder, 2, 13, 0);
    for (int t : {1, 2}) {
      const Cplx dense = trace_power(spec, real, t, TraceMethod::Dense);
      const Cplx rows = trace_power(spec, real, t, TraceMethod::DualRows);
      CHECK(std::abs(dense - rows) < 1e-8);
    }
  }
  SUBCASE("SWAP circuit trace equals the cycle count of the induced shift") {
    const auto spec = swap_spec(3);
    const auto clean = DisorderRealization::clean(2, 3);
    for (int t : {1, 2, 3, 4}) {
      // U^t permutes the 6 slots by 2t steps; fixed basis states number
      // d^{gcd(2t, 6)}
      const double expect = std::pow(2.0, std::gcd(2 * t, 6));
      const Cplx got = trace_power(spec, clean, t, TraceMethod::Dense);
      CHECK(std::abs(got - expect) < 1e-10);
      const Cplx rows = trace_power(spec, clean, t, TraceMethod::DualRows);
      CHECK(std::abs(rows - expect) < 1e-10);
    }
  }
  SUBCASE("budget exhaustion raises a resource error") {
    const auto spec = random_dual_spec(3, 4);
    const auto real = sample_realization(spec.disorder, 3, 4, 0);
    TraceBudget tight;
    tight.dense_cap = 2;
    tight.sweep_cap = 2;
    tight.row_dim_cap = 2;
    CHECK_THROWS_AS(trace_power(spec, real, 2, TraceMethod::Auto, tight),
                    ResourceError);
  }
}
