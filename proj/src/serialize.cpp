#include "dusff/serialize.hpp"

#include "dusff/algebra.hpp"
#include "dusff/gates.hpp"

namespace dusff {

Json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(m(i, j).real());
      data.push_back(m(i, j).imag());
    }
  }
  return Json(data);
}

Matrix matrix_from_json(const Json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(2 * rows * cols)) {
    throw std::invalid_argument("matrix data must hold 2*rows*cols doubles");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    for (int c = 0; c < cols; ++c) {
      const double re = j[k++].get<double>();
      const double im = j[k++].get<double>();
      m(i, c) = Cplx(re, im);
    }
  }
  return m;
}

Json distribution_to_json(const DisorderDistribution& dist) {
  Json j;
  switch (dist.kind) {
    case DisorderKind::Gaussian: j["kind"] = "gaussian"; break;
    case DisorderKind::Box: j["kind"] = "box"; break;
    case DisorderKind::SingularMask: j["kind"] = "singular_mask"; break;
  }
  j["d"] = dist.d;
  j["nu_table"] = dist.nu_table;
  j["active"] = dist.active;
  j["time_reversal"] = dist.time_reversal;
  return j;
}

DisorderDistribution distribution_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.value("d", 2);
  DisorderDistribution dist;
  if (kind == "gaussian" || kind == "box") {
    const double nu = j.value("nu", 0.2);
    dist = (kind == "box") ? DisorderDistribution::box(d, nu)
                           : DisorderDistribution::gaussian(d, nu);
  } else if (kind == "singular_mask") {
    dist = DisorderDistribution::singular_mask(
        d, j.at("active").get<std::vector<int>>(), j.value("nu", 0.2));
  } else {
    throw std::invalid_argument("unknown disorder kind: " + kind);
  }
  if (j.contains("nu_table")) {
    dist.nu_table = j.at("nu_table").get<std::vector<double>>();
  }
  if (j.contains("active") && kind != "singular_mask") {
    dist.active = j.at("active").get<std::vector<int>>();
  }
  dist.time_reversal = j.value("time_reversal", false);
  dist.validate();
  return dist;
}

GateConfig gate_from_config(const Json& j, int d) {
  GateConfig cfg;
  cfg.kind = j.at("kind").get<std::string>();
  auto local = [&](const char* key, RngStream& rng) {
    if (j.contains(key)) return matrix_from_json(j.at(key), d, d);
    return haar_unitary(d, rng);
  };
  if (cfg.kind == "swap") {
    cfg.gate = swap_gate(d);
    cfg.interacting = false;
  } else if (cfg.kind == "matrix") {
    cfg.gate = matrix_from_json(j.at("data"), d * d, d * d);
    if (!is_unitary(cfg.gate, 1e-10)) {
      throw std::invalid_argument("gate matrix is not unitary");
    }
  } else if (cfg.kind == "parametrized") {
    const double coupling = j.at("J").get<double>();
    RngStream rng(j.value("haar_seed", std::uint64_t{1}), 0);
    DualGateParams p;
    p.u1 = local("u1", rng);
    p.u2 = local("u2", rng);
    p.u3 = local("u3", rng);
    p.u4 = local("u4", rng);
    p.coupling = coupling;
    cfg.gate = build_dual_gate(p, d);
    cfg.interacting = coupling != 0.0;
  } else if (cfg.kind == "time_reversal") {
    const double coupling = j.at("J").get<double>();
    RngStream rng(j.value("haar_seed", std::uint64_t{1}), 0);
    const Matrix u1 = local("u1", rng);
    const Matrix u2 = local("u2", rng);
    cfg.gate = build_time_reversal_gate(u1, u2, coupling, d);
    cfg.interacting = coupling != 0.0;
  } else {
    throw std::invalid_argument("unknown gate kind: " + cfg.kind);
  }
  return cfg;
}

Json spec_to_json(const CircuitSpec& spec) {
  Json j;
  j["d"] = spec.d;
  j["L"] = spec.cells;
  if (spec.inhomogeneous()) {
    Json us = Json::array(), ws = Json::array();
    for (const auto& g : spec.gates_U) {
      us.push_back({{"kind", "matrix"}, {"data", matrix_to_json(g)}});
    }
    for (const auto& g : spec.gates_W) {
      ws.push_back({{"kind", "matrix"}, {"data", matrix_to_json(g)}});
    }
    j["gates_U"] = us;
    j["gates_W"] = ws;
  } else {
    j["gates"] = {{"U", {{"kind", "matrix"}, {"data", matrix_to_json(spec.gate_U)}}},
                  {"W", {{"kind", "matrix"}, {"data", matrix_to_json(spec.gate_W)}}}};
  }
  j["disorder"] = distribution_to_json(spec.disorder);
  j["time_reversal"] = spec.time_reversal;
  return j;
}

CircuitSpec spec_from_json(const Json& j) {
  CircuitSpec spec;
  spec.d = j.at("d").get<int>();
  spec.cells = j.at("L").get<int>();
  if (j.contains("gates_U")) {
    for (const auto& g : j.at("gates_U")) {
      spec.gates_U.push_back(gate_from_config(g, spec.d).gate);
    }
    for (const auto& g : j.at("gates_W")) {
      spec.gates_W.push_back(gate_from_config(g, spec.d).gate);
    }
  } else {
    spec.gate_U = gate_from_config(j.at("gates").at("U"), spec.d).gate;
    spec.gate_W = gate_from_config(j.at("gates").at("W"), spec.d).gate;
  }
  spec.disorder = distribution_from_json(j.at("disorder"));
  spec.time_reversal = j.value("time_reversal", false);
  spec.disorder.time_reversal = spec.time_reversal || spec.disorder.time_reversal;
  spec.validate();
  return spec;
}

std::uint64_t config_hash(const Json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate_run_config(const Json& j, const std::string& command) {
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  if (j.value("schema_version", 0) != 1) {
    throw std::invalid_argument("config needs schema_version = 1");
  }
  if (!j.contains("circuit")) {
    throw std::invalid_argument("config needs a circuit block");
  }
  const auto& c = j.at("circuit");
  for (const char* key : {"d", "L", "disorder"}) {
    if (!c.contains(key)) {
      throw std::invalid_argument(std::string("circuit block needs '") + key + "'");
    }
  }
  if (!c.contains("gates") && !c.contains("gates_U")) {
    throw std::invalid_argument("circuit block needs gates");
  }
  if (command == "sff") {
    if (!j.contains("t_grid") || !j.at("t_grid").is_array()) {
      throw std::invalid_argument("sff config needs a t_grid array");
    }
    if (!j.contains("n_samples")) {
      throw std::invalid_argument("sff config needs n_samples");
    }
  }
  if (command == "transfer") {
    if (!j.contains("t_grid") || !j.at("t_grid").is_array()) {
      throw std::invalid_argument("transfer config needs a t_grid array");
    }
  }
}

}  // namespace dusff
