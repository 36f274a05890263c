// Temporary convention finder; not part of the build.
#include <cstdio>

#include "dusff/algebra.hpp"
#include "dusff/circuit.hpp"
#include "dusff/gates.hpp"

using namespace dusff;

namespace {

Matrix dressed_u(const CircuitSpec& spec, const DisorderRealization& real, int x) {
  const int sites = 2 * spec.cells;
  const Matrix u0 = field_to_gate(real.theta[0][(2 * x) % sites], spec.d, false);
  const Matrix u1 = field_to_gate(real.theta[0][(2 * x + 1) % sites], spec.d, false);
  return kron(u0, u1) * spec.u_gate(x % spec.cells);
}

Matrix dressed_w(const CircuitSpec& spec, const DisorderRealization& real, int x) {
  const int sites = 2 * spec.cells;
  const Matrix wl = field_to_gate(real.theta[1][(2 * x - 1 + sites) % sites], spec.d, true);
  const Matrix wr = field_to_gate(real.theta[1][(2 * x) % sites], spec.d, true);
  return kron(wl, wr) * spec.w_gate(x % spec.cells);
}

// row(x) built from whole-gate duals with offsets and composition choices
Matrix row_variant(const CircuitSpec& spec, const DisorderRealization& real,
                   int t, int x, int w_off, bool w_first) {
  const int d = spec.d;
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);
  const Matrix du = dual_reshuffle(dressed_u(spec, real, x));
  const Matrix dw = dual_reshuffle(dressed_w(spec, real, (x + w_off) % spec.cells));
  Matrix urow = Matrix::Identity(dim, dim);
  Matrix wrow = Matrix::Identity(dim, dim);
  for (int k = 0; k < t; ++k) {
    urow = embed_two_at_slots(du, 2 * k, m, d) * urow;
    wrow = embed_two_at_slots(dw, (2 * k - 1 + m) % m, m, d) * wrow;
  }
  return w_first ? Matrix(urow * wrow) : Matrix(wrow * urow);
}

}  // namespace

int main() {
  RngStream rng(2024, 0);
  CircuitSpec spec;
  spec.d = 2;
  spec.cells = 3;
  for (int x = 0; x < 3; ++x) {
    spec.gates_U.push_back(haar_unitary(4, rng));
    spec.gates_W.push_back(haar_unitary(4, rng));
  }
  spec.disorder = DisorderDistribution::gaussian(2, 0.4);
  const auto real = sample_realization(spec.disorder, 3, 999, 0);

  for (int t : {1, 2, 3}) {
    const Cplx dense = trace_power(spec, real, t, TraceMethod::Dense);
    std::printf("t=%d dense = (%.10f, %.10f)\n", t, dense.real(), dense.imag());
    for (int w_off : {0, 1}) {
      for (int w_first : {0, 1}) {
        for (int asc : {0, 1}) {
          Matrix prod = Matrix::Identity(int_pow(2, 2 * t), int_pow(2, 2 * t));
          for (int i = 0; i < spec.cells; ++i) {
            const int x = asc ? i : spec.cells - 1 - i;
            prod = prod * row_variant(spec, real, t, x, w_off, w_first);
          }
          const Cplx tr = prod.trace();
          const double err = std::abs(tr - dense);
          if (err < 1e-8) {
            std::printf("  MATCH w_off=%d w_first=%d asc=%d  err=%.2e\n",
                        w_off, w_first, asc, err);
          }
        }
      }
    }
  }

  // time-reversal conjugator variants
  {
    RngStream r2(7, 1);
    CircuitSpec ts;
    ts.d = 2;
    ts.cells = 2;
    ts.gate_U = build_time_reversal_gate(haar_unitary(2, r2), haar_unitary(2, r2), 0.8, 2);
    ts.gate_W = build_time_reversal_gate(haar_unitary(2, r2), haar_unitary(2, r2), 1.1, 2);
    ts.disorder = DisorderDistribution::gaussian(2, 0.3);
    ts.disorder.time_reversal = true;
    ts.time_reversal = true;
    const auto tr_real = sample_realization(ts.disorder, 2, 55, 0);
    const Matrix u = floquet_operator(ts, tr_real);
    const int m = 2 * ts.cells;
    const std::int64_t dim = ts.hilbert_dim();
    for (int gate_pick : {0, 1}) {      // 0: W, 1: U
      for (int pos_pick : {0, 1}) {     // 0: slots (2k,2k+1), 1: slots (2k-1,2k)
        Matrix k = Matrix::Identity(dim, dim);
        for (int x = 0; x < ts.cells; ++x) {
          const Matrix& g = gate_pick ? ts.gate_U : ts.gate_W;
          const int first = pos_pick ? (2 * x - 1 + m) % m : 2 * x;
          k = embed_two_at_slots(g, first, m, ts.d) * k;
        }
        const double sym = max_abs(k - k.transpose());
        const double rel = max_abs(k * u * k.adjoint() - u.transpose());
        std::printf("K gate=%s pos=%s  K-K^T=%.2e  KUK-U^T=%.2e\n",
                    gate_pick ? "U" : "W", pos_pick ? "odd" : "even", sym, rel);
      }
    }
  }
  return 0;
}
