#pragma once

#include <optional>
#include <vector>

#include "dusff/disorder.hpp"
#include "dusff/types.hpp"

namespace dusff {

// Full description of one circuit instance: d, number of unit cells L
// (2L qudits), the two-site gates of the two layers (one pair, or one pair
// per cell in inhomogeneous mode), and the on-site disorder law.
struct CircuitSpec {
  int d = 2;
  int cells = 1;  // L
  Matrix gate_U, gate_W;
  std::vector<Matrix> gates_U, gates_W;  // per-cell override, size L when used
  DisorderDistribution disorder = DisorderDistribution::gaussian(2, 0.2);
  bool time_reversal = false;

  bool inhomogeneous() const { return !gates_U.empty(); }
  std::int64_t hilbert_dim() const { return int_pow(d, 2 * cells); }
  const Matrix& u_gate(int cell) const {
    return inhomogeneous() ? gates_U[static_cast<std::size_t>(cell)] : gate_U;
  }
  const Matrix& w_gate(int cell) const {
    return inhomogeneous() ? gates_W[static_cast<std::size_t>(cell)] : gate_W;
  }
  void validate() const;
};

// One traced sample, |trace| <= d^{2L}.
struct SpectralSample {
  Cplx trace_value;
  int t = 0;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
};

// Applies one Floquet period in place: first the gate layer on the
// (integer, half-odd) bonds, then the layer on the (half-odd, integer) bonds,
// each dressed with the realization's single-site fields.
void apply_floquet(const CircuitSpec& spec, const DisorderRealization& real,
                   Vector& state);

// Dense Floquet operator; refuses above the dense cap.
Matrix floquet_operator(const CircuitSpec& spec, const DisorderRealization& real,
                        std::int64_t dense_cap = 4096);

// Unitary K with K U K^dag = U^T for time-reversal-compatible specs
// (symmetric gates, shared fields); K = K^T.
Matrix time_reversal_conjugator(const CircuitSpec& spec);

enum class TraceMethod { Auto, Dense, Sweep, DualRows };

struct TraceBudget {
  std::int64_t dense_cap = 4096;   // max Hilbert dim for the dense product
  std::int64_t sweep_cap = 4096;   // max Hilbert dim for full-basis sweeps
  std::int64_t row_dim_cap = 4096; // max d^{2t} for the per-sample row product
};

// tr U_L^t. Dense and sweep paths work in the time direction; the row-product
// path contracts the same network column by column and is exact for any
// gates. All paths agree on overlapping sizes (tested); Auto picks the
// cheapest admissible one.
Cplx trace_power(const CircuitSpec& spec, const DisorderRealization& real,
                 int t, TraceMethod method = TraceMethod::Auto,
                 const TraceBudget& budget = {});

// The column transfer operator of one unit cell on d^{2t}, including the
// realization's fields; the product of all L of them has the same trace as
// U_L^t. Exposed for tests and reused by the disorder-averaged machinery.
Matrix dual_row_matrix(const CircuitSpec& spec, const DisorderRealization& real,
                       int t, int cell);

}  // namespace dusff
