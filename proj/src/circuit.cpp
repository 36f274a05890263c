#include "dusff/circuit.hpp"

#include <cmath>

#include "dusff/algebra.hpp"
#include "dusff/gates.hpp"

namespace dusff {

namespace {

// In-place two-site gate application on tensor slots (p, p+1 mod m).
void apply_two_site(const Matrix& g, int first_slot, int m, int d,
                    Vector& psi, Vector& scratch) {
  const int p = first_slot;
  const int q = (first_slot + 1) % m;
  const std::int64_t sp = int_pow(d, m - 1 - p);
  const std::int64_t sq = int_pow(d, m - 1 - q);
  const std::int64_t dim = psi.size();
  const std::int64_t rest_count = dim / (static_cast<std::int64_t>(d) * d);
  const int dd = d * d;
  scratch.resize(dd);
  for (std::int64_t r = 0; r < rest_count; ++r) {
    std::int64_t rest = r;
    std::int64_t base = 0;
    std::int64_t place = 1;
    for (int s = m - 1; s >= 0; --s) {
      if (s == p || s == q) {
        place *= d;
        continue;
      }
      base += (rest % d) * place;
      rest /= d;
      place *= d;
    }
    for (int a1 = 0; a1 < d; ++a1)
      for (int a2 = 0; a2 < d; ++a2)
        scratch(a1 * d + a2) = psi(base + a1 * sp + a2 * sq);
    for (int a1 = 0; a1 < d; ++a1) {
      for (int a2 = 0; a2 < d; ++a2) {
        Cplx acc = 0.0;
        const int row = a1 * d + a2;
        for (int col = 0; col < dd; ++col) acc += g(row, col) * scratch(col);
        psi(base + a1 * sp + a2 * sq) = acc;
      }
    }
  }
}

struct DressedLayers {
  // Per-cell gates with the single-site fields folded in.
  std::vector<Matrix> u_layer;  // bond (x, x+1/2), slots (2x, 2x+1)
  std::vector<Matrix> w_layer;  // bond (x-1/2, x), slots (2x-1, 2x)
};

DressedLayers dress_layers(const CircuitSpec& spec,
                           const DisorderRealization& real) {
  const int L = spec.cells;
  const int d = spec.d;
  const int sites = 2 * L;
  std::vector<Matrix> u_fields(sites), w_fields(sites);
  for (int s = 0; s < sites; ++s) {
    u_fields[s] = field_to_gate(real.theta[0][static_cast<std::size_t>(s)], d, false);
    w_fields[s] = field_to_gate(real.theta[1][static_cast<std::size_t>(s)], d, true);
  }
  DressedLayers layers;
  layers.u_layer.resize(static_cast<std::size_t>(L));
  layers.w_layer.resize(static_cast<std::size_t>(L));
  for (int x = 0; x < L; ++x) {
    // (u_x x u_{x+1/2}) U on sites (x, x+1/2)
    layers.u_layer[x] = kron(u_fields[2 * x], u_fields[2 * x + 1]) * spec.u_gate(x);
    // (w_{x-1/2} x w_x) W on sites (x-1/2, x)
    const int left = (2 * x - 1 + sites) % sites;
    layers.w_layer[x] = kron(w_fields[left], w_fields[2 * x]) * spec.w_gate(x);
  }
  return layers;
}

}  // namespace

void CircuitSpec::validate() const {
  if (d < 2) throw std::invalid_argument("circuit: d must be >= 2");
  if (cells < 1) throw std::invalid_argument("circuit: L must be >= 1");
  auto check_gate = [&](const Matrix& g) {
    if (g.rows() != d * d || g.cols() != d * d) {
      throw std::invalid_argument("circuit: gate dimension mismatch");
    }
    if (!is_unitary(g, 1e-10)) {
      throw std::invalid_argument("circuit: gate is not unitary");
    }
  };
  if (inhomogeneous()) {
    if (gates_U.size() != static_cast<std::size_t>(cells) ||
        gates_W.size() != static_cast<std::size_t>(cells)) {
      throw std::invalid_argument("circuit: per-cell gate lists must have length L");
    }
    for (const auto& g : gates_U) check_gate(g);
    for (const auto& g : gates_W) check_gate(g);
  } else {
    check_gate(gate_U);
    check_gate(gate_W);
  }
}

void apply_floquet(const CircuitSpec& spec, const DisorderRealization& real,
                   Vector& state) {
  const int m = 2 * spec.cells;
  if (state.size() != spec.hilbert_dim()) {
    throw std::invalid_argument("apply_floquet: state length mismatch");
  }
  const DressedLayers layers = dress_layers(spec, real);
  Vector scratch;
  for (int x = 0; x < spec.cells; ++x) {
    apply_two_site(layers.u_layer[x], 2 * x, m, spec.d, state, scratch);
  }
  for (int x = 0; x < spec.cells; ++x) {
    apply_two_site(layers.w_layer[x], (2 * x - 1 + m) % m, m, spec.d, state,
                   scratch);
  }
}

Matrix floquet_operator(const CircuitSpec& spec, const DisorderRealization& real,
                        std::int64_t dense_cap) {
  const std::int64_t dim = spec.hilbert_dim();
  if (dim > dense_cap) {
    throw ResourceError("floquet_operator: dimension " + std::to_string(dim) +
                        " over dense cap; use apply_floquet or the row product");
  }
  const int m = 2 * spec.cells;
  const DressedLayers layers = dress_layers(spec, real);
  Matrix u = Matrix::Identity(dim, dim);
  Vector scratch;
  for (std::int64_t col = 0; col < dim; ++col) {
    Vector psi = u.col(col);
    for (int x = 0; x < spec.cells; ++x) {
      apply_two_site(layers.u_layer[x], 2 * x, m, spec.d, psi, scratch);
    }
    for (int x = 0; x < spec.cells; ++x) {
      apply_two_site(layers.w_layer[x], (2 * x - 1 + m) % m, m, spec.d, psi,
                     scratch);
    }
    u.col(col) = psi;
  }
  return u;
}

Matrix time_reversal_conjugator(const CircuitSpec& spec) {
  const std::int64_t dim = spec.hilbert_dim();
  if (dim > kDenseDimCap) {
    throw ResourceError("time_reversal_conjugator: dimension over cap");
  }
  // The undressed first layer. For symmetric gates and shared fields this
  // satisfies K U K^dag = U^T with K = K^T (disjoint symmetric blocks).
  const int m = 2 * spec.cells;
  Matrix k = Matrix::Identity(dim, dim);
  for (int x = 0; x < spec.cells; ++x) {
    k = embed_two_at_slots(spec.u_gate(x), 2 * x, m, spec.d) * k;
  }
  return k;
}

Matrix dual_row_matrix(const CircuitSpec& spec, const DisorderRealization& real,
                       int t, int cell) {
  const int d = spec.d;
  const int sites = 2 * spec.cells;
  const int m = 2 * t;
  const std::int64_t dim = int_pow(d, m);

  // The whole dressed gates of cell `cell`, reshuffled to propagate sideways.
  const Matrix u_left =
      field_to_gate(real.theta[0][static_cast<std::size_t>(2 * cell)], d, false);
  const Matrix u_right = field_to_gate(
      real.theta[0][static_cast<std::size_t>((2 * cell + 1) % sites)], d, false);
  const Matrix w_left = field_to_gate(
      real.theta[1][static_cast<std::size_t>((2 * cell - 1 + sites) % sites)], d,
      true);
  const Matrix w_right =
      field_to_gate(real.theta[1][static_cast<std::size_t>(2 * cell)], d, true);
  const Matrix du = dual_reshuffle(kron(u_left, u_right) * spec.u_gate(cell));
  const Matrix dw = dual_reshuffle(kron(w_left, w_right) * spec.w_gate(cell));

  Matrix row = Matrix::Identity(dim, dim);
  for (int tau = 0; tau < t; ++tau) {
    row = embed_two_at_slots(dw, (2 * tau - 1 + m) % m, m, d) * row;
  }
  for (int tau = 0; tau < t; ++tau) {
    row = embed_two_at_slots(du, 2 * tau, m, d) * row;
  }
  return row;
}

Cplx trace_power(const CircuitSpec& spec, const DisorderRealization& real,
                 int t, TraceMethod method, const TraceBudget& budget) {
  if (t < 0) throw std::invalid_argument("trace_power: t must be >= 0");
  const std::int64_t dim = spec.hilbert_dim();
  if (t == 0) return Cplx(static_cast<double>(dim), 0.0);

  if (method == TraceMethod::Auto) {
    const std::int64_t row_dim = int_pow(spec.d, 2 * t);
    // The column product works on d^{2t}; prefer it whenever that is the
    // smaller space, otherwise fall back to the dense time-direction product.
    if (row_dim <= budget.row_dim_cap && row_dim < dim) {
      method = TraceMethod::DualRows;
    } else if (dim <= budget.dense_cap) {
      method = TraceMethod::Dense;
    } else if (row_dim <= budget.row_dim_cap) {
      method = TraceMethod::DualRows;
    } else if (dim <= budget.sweep_cap) {
      method = TraceMethod::Sweep;
    } else {
      throw ResourceError("trace_power: no admissible method within budget");
    }
  }

  switch (method) {
    case TraceMethod::Dense: {
      if (dim > budget.dense_cap) {
        throw ResourceError("trace_power: Hilbert dimension over dense cap");
      }
      const Matrix u = floquet_operator(spec, real, budget.dense_cap);
      Matrix p = u;
      for (int k = 1; k < t; ++k) p = u * p;
      return p.trace();
    }
    case TraceMethod::Sweep: {
      if (dim > budget.sweep_cap) {
        throw ResourceError("trace_power: Hilbert dimension over sweep budget");
      }
      Cplx total = 0.0;
      Vector psi(dim);
      for (std::int64_t b = 0; b < dim; ++b) {
        psi.setZero();
        psi(b) = 1.0;
        for (int k = 0; k < t; ++k) apply_floquet(spec, real, psi);
        total += psi(b);
      }
      return total;
    }
    case TraceMethod::DualRows: {
      const std::int64_t row_dim = int_pow(spec.d, 2 * t);
      if (row_dim > budget.row_dim_cap) {
        throw ResourceError("trace_power: row dimension over budget");
      }
      Matrix prod = dual_row_matrix(spec, real, t, spec.cells - 1);
      for (int x = spec.cells - 2; x >= 0; --x) {
        prod = prod * dual_row_matrix(spec, real, t, x);
      }
      return prod.trace();
    }
    default:
      throw std::logic_error("trace_power: unreachable");
  }
}

}  // namespace dusff
