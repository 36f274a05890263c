#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dusff/algebra.hpp"
#include "dusff/circuit.hpp"
#include "dusff/commutant.hpp"
#include "dusff/gates.hpp"
#include "dusff/sff.hpp"
#include "dusff/transfer.hpp"
#include "dusff/verify.hpp"

namespace py = pybind11;
using namespace dusff;

namespace {

TraceMethod method_from_name(const std::string& name) {
  if (name == "auto") return TraceMethod::Auto;
  if (name == "dense") return TraceMethod::Dense;
  if (name == "sweep") return TraceMethod::Sweep;
  if (name == "dual_rows") return TraceMethod::DualRows;
  throw std::invalid_argument("unknown trace method: " + name);
}

py::dict estimate_dict(const SffEstimate& est) {
  py::dict d;
  d["t"] = est.t;
  d["L"] = est.cells;
  d["n_samples"] = est.n_samples;
  d["moment_order"] = est.moment_order;
  d["mean"] = est.mean;
  d["std_error"] = est.std_error;
  d["seed"] = est.seed;
  d["heavy_tail_warning"] = est.heavy_tail_warning;
  return d;
}

py::dict spectral_dict(const SpectralReport& report) {
  py::dict d;
  d["eigenvalues"] = report.eigenvalues;
  d["unimodular_count"] = report.unimodular_count;
  d["spectral_radius"] = report.spectral_radius;
  d["max_residual"] = report.max_residual;
  d["ambiguous"] = report.ambiguous;
  d["method"] = report.method;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dual-unitary circuit spectral form factor laboratory";

  // elementary operators
  m.def("gell_mann_generators", &gell_mann_generators, py::arg("d"));
  m.def(
      "spin_matrices",
      [](int d) {
        const auto s = spin_matrices(d);
        return py::make_tuple(s.s1, s.s2, s.s3);
      },
      py::arg("d"));
  m.def("shift_operator", &shift_operator, py::arg("n"), py::arg("d"));
  m.def("reflection_operator", &reflection_operator, py::arg("n"), py::arg("d"));
  m.def("swap_gate", &swap_gate, py::arg("d"));
  m.def("sublattice_magnetization", &sublattice_magnetization, py::arg("a"),
        py::arg("iota"), py::arg("t"), py::arg("d"));
  m.def("double_magnetization", &double_magnetization, py::arg("a"), py::arg("b"),
        py::arg("iota"), py::arg("t"), py::arg("d"));
  m.def("full_lattice_magnetization", &full_lattice_magnetization, py::arg("a"),
        py::arg("t"), py::arg("d"));

  // gates
  m.def(
      "build_dual_gate",
      [](const Matrix& u1, const Matrix& u2, const Matrix& u3, const Matrix& u4,
         double coupling, int d) {
        DualGateParams p{u1, u2, u3, u4, coupling};
        return build_dual_gate(p, d);
      },
      py::arg("u1"), py::arg("u2"), py::arg("u3"), py::arg("u4"),
      py::arg("coupling"), py::arg("d"));
  m.def("interaction_core", &interaction_core, py::arg("coupling"), py::arg("d"));
  m.def("dual_reshuffle", &dual_reshuffle, py::arg("gate"));
  m.def(
      "check_dual_unitary",
      [](const Matrix& gate, double tol) {
        const auto c = check_dual_unitary(gate, tol);
        py::dict d;
        d["ok"] = c.ok;
        d["unitarity_residual"] = c.unitarity_residual;
        d["dual_residual"] = c.dual_residual;
        return d;
      },
      py::arg("gate"), py::arg("tol") = 1e-10);
  m.def(
      "haar_unitary",
      [](int d, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return haar_unitary(d, rng);
      },
      py::arg("d"), py::arg("seed"), py::arg("stream") = 0);
  m.def("build_time_reversal_gate", &build_time_reversal_gate, py::arg("u1"),
        py::arg("u2"), py::arg("coupling"), py::arg("d"));

  // disorder
  py::class_<DisorderDistribution>(m, "DisorderDistribution")
      .def_static("gaussian", &DisorderDistribution::gaussian, py::arg("d"),
                  py::arg("nu"))
      .def_static("box", &DisorderDistribution::box, py::arg("d"), py::arg("nu"))
      .def_static("singular_mask", &DisorderDistribution::singular_mask,
                  py::arg("d"), py::arg("active"), py::arg("nu"))
      .def_readwrite("time_reversal", &DisorderDistribution::time_reversal)
      .def_readwrite("nu_table", &DisorderDistribution::nu_table);
  m.def("field_to_gate", &field_to_gate, py::arg("theta"), py::arg("d"),
        py::arg("transposed") = false);

  // circuits
  py::class_<CircuitSpec>(m, "CircuitSpec")
      .def(py::init([](int d, int cells, const Matrix& gate_u, const Matrix& gate_w,
                       const DisorderDistribution& dist, bool time_reversal) {
             CircuitSpec spec;
             spec.d = d;
             spec.cells = cells;
             spec.gate_U = gate_u;
             spec.gate_W = gate_w;
             spec.disorder = dist;
             spec.time_reversal = time_reversal;
             spec.disorder.time_reversal = time_reversal || dist.time_reversal;
             spec.validate();
             return spec;
           }),
           py::arg("d"), py::arg("L"), py::arg("gate_u"), py::arg("gate_w"),
           py::arg("disorder"), py::arg("time_reversal") = false)
      .def_readonly("d", &CircuitSpec::d)
      .def_readonly("L", &CircuitSpec::cells);
  m.def(
      "floquet_operator",
      [](const CircuitSpec& spec, std::uint64_t seed, std::uint64_t sample_idx) {
        const auto real =
            sample_realization(spec.disorder, spec.cells, seed, sample_idx);
        return floquet_operator(spec, real);
      },
      py::arg("spec"), py::arg("seed"), py::arg("sample_idx") = 0);
  m.def(
      "trace_power",
      [](const CircuitSpec& spec, int t, std::uint64_t seed,
         std::uint64_t sample_idx, const std::string& method) {
        const auto real =
            sample_realization(spec.disorder, spec.cells, seed, sample_idx);
        return trace_power(spec, real, t, method_from_name(method));
      },
      py::arg("spec"), py::arg("t"), py::arg("seed"), py::arg("sample_idx") = 0,
      py::arg("method") = "auto");

  // monte carlo
  m.def(
      "sff_estimate",
      [](const CircuitSpec& spec, int t, int n_samples, std::uint64_t seed,
         const std::string& method) {
        return estimate_dict(
            sff_estimate(spec, t, n_samples, seed, method_from_name(method)));
      },
      py::arg("spec"), py::arg("t"), py::arg("n_samples"), py::arg("seed"),
      py::arg("method") = "auto");
  m.def(
      "sff_moment",
      [](const CircuitSpec& spec, int t, int order, int n_samples,
         std::uint64_t seed, const std::string& method) {
        return estimate_dict(sff_moment(spec, t, order, n_samples, seed,
                                        method_from_name(method)));
      },
      py::arg("spec"), py::arg("t"), py::arg("order"), py::arg("n_samples"),
      py::arg("seed"), py::arg("method") = "auto");
  m.def("cue_sff", &cue_sff, py::arg("t"), py::arg("n_dim"));
  m.def("coe_sff", &coe_sff, py::arg("t"), py::arg("n_dim"));

  // transfer matrix
  py::class_<TransferContext>(m, "TransferContext")
      .def_readonly("t", &TransferContext::t)
      .def_readonly("d", &TransferContext::d)
      .def_readonly("moment_order", &TransferContext::moment_order)
      .def_readonly("op_dim", &TransferContext::op_dim);
  m.def(
      "make_transfer_context",
      [](const Matrix& gate_u, const Matrix& gate_w, int t,
         const DisorderDistribution& dist, int nodes, int moment_order) {
        QuadratureSpec quad;
        quad.nodes_per_axis = nodes;
        return make_transfer_context(gate_u, gate_w, t, dist, quad, moment_order);
      },
      py::arg("gate_u"), py::arg("gate_w"), py::arg("t"), py::arg("disorder"),
      py::arg("nodes") = 9, py::arg("moment_order") = 1);
  m.def("dual_row_operator", &dual_row_operator, py::arg("gate"), py::arg("t"),
        py::arg("d"), py::arg("tol") = 1e-10);
  m.def("transfer_apply", &transfer_apply, py::arg("ctx"), py::arg("a"));
  m.def("transfer_dense", &transfer_dense, py::arg("ctx"),
        py::arg("doubled_cap") = 2048);
  m.def("trace_transfer_power", &trace_transfer_power, py::arg("ctx"),
        py::arg("L"), py::arg("doubled_cap") = 2048);
  m.def("transfer_trace_curve", &transfer_trace_curve, py::arg("ctx"),
        py::arg("L_max"), py::arg("doubled_cap") = 2048);
  m.def(
      "leading_spectrum",
      [](const TransferContext& ctx, int k) {
        return spectral_dict(leading_spectrum(ctx, k));
      },
      py::arg("ctx"), py::arg("k") = 8);
  m.def("eigenspace_projector", &eigenspace_projector, py::arg("ctx"));
  m.def("inhomogeneous_block_norm", &inhomogeneous_block_norm, py::arg("ctx_a"),
        py::arg("ctx_b"), py::arg("doubled_cap") = 2048);

  // commutant laboratory
  py::class_<GeneratorSet>(m, "GeneratorSet")
      .def_readonly("label", &GeneratorSet::label)
      .def_readonly("op_dim", &GeneratorSet::op_dim)
      .def_readonly("ops", &GeneratorSet::ops);
  m.def("build_M_set", &build_M_set, py::arg("t"), py::arg("d"));
  m.def("build_MT_set", &build_MT_set, py::arg("t"), py::arg("d"));
  m.def("build_Mn_set", &build_Mn_set, py::arg("t"), py::arg("d"), py::arg("n"));
  m.def(
      "commutant_dimension",
      [](const GeneratorSet& gens) {
        const auto report = commutant_dimension(gens);
        py::dict d;
        d["dimension"] = report.dimension;
        d["gap"] = report.gap;
        d["max_eigenvalue"] = report.max_eigenvalue;
        d["low_spectrum"] = report.low_spectrum;
        d["ambiguous"] = report.ambiguous;
        d["method"] = report.method;
        return d;
      },
      py::arg("generators"));
  m.def("commutant_residual", &commutant_residual, py::arg("generators"),
        py::arg("a"));
  m.def("cyclic_projectors", &cyclic_projectors, py::arg("t"), py::arg("d"));
  m.def(
      "dihedral_rank",
      [](int t, int d) {
        const auto report = dihedral_rank(t, d);
        py::dict out;
        out["rank"] = report.rank;
        out["singular_values"] = report.singular_values;
        return out;
      },
      py::arg("t"), py::arg("d"));
  m.def("momentum_state", &momentum_state, py::arg("n"), py::arg("k"),
        py::arg("t"), py::arg("d"));
  m.def(
      "singular_disorder_ranks",
      [](const Matrix& gate_u, const Matrix& gate_w, int t) {
        const auto report = singular_disorder_ranks(gate_u, gate_w, t);
        py::dict out;
        out["rank_s1"] = report.rank_s1;
        out["rank_s2"] = report.rank_s2;
        out["sv1"] = report.sv1;
        out["sv2"] = report.sv2;
        return out;
      },
      py::arg("gate_u"), py::arg("gate_w"), py::arg("t"));

  // verification suite
  m.def(
      "run_verification",
      [](const std::vector<int>& criteria, std::uint64_t seed) {
        VerifyOptions opts;
        opts.criteria = criteria;
        opts.seed = seed;
        const auto results = run_verification(opts, nullptr);
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["seconds"] = r.seconds;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("criteria") = std::vector<int>{}, py::arg("seed") = 20240901);
}
