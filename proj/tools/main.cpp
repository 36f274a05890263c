// Command-line front end: gate checks, disorder-averaged SFF estimation,
// transfer-matrix spectra, and the verification suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "dusff/circuit.hpp"
#include "dusff/gates.hpp"
#include "dusff/commutant.hpp"
#include "dusff/serialize.hpp"
#include "dusff/sff.hpp"
#include "dusff/transfer.hpp"
#include "dusff/verify.hpp"

namespace {

using dusff::Json;

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  Json j;
  in >> j;
  return j;
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

dusff::TraceMethod parse_method(const std::string& name) {
  if (name == "auto") return dusff::TraceMethod::Auto;
  if (name == "dense") return dusff::TraceMethod::Dense;
  if (name == "sweep") return dusff::TraceMethod::Sweep;
  if (name == "dual-rows") return dusff::TraceMethod::DualRows;
  throw std::invalid_argument("unknown trace method: " + name);
}

dusff::QuadratureSpec quadrature_from(const Json& config) {
  dusff::QuadratureSpec quad;
  if (config.contains("quadrature")) {
    const auto& q = config.at("quadrature");
    quad.nodes_per_axis = q.value("nodes", quad.nodes_per_axis);
    quad.mc_nodes = q.value("mc_nodes", quad.mc_nodes);
    quad.mc_seed = q.value("mc_seed", quad.mc_seed);
    quad.grid_cap = q.value("grid_cap", quad.grid_cap);
  }
  return quad;
}

int cmd_gate_check(const std::string& config_path, const std::string& json_out) {
  const Json config = load_config(config_path);
  dusff::validate_run_config(config, "gate-check");
  const auto spec = dusff::spec_from_json(config.at("circuit"));
  const double tol =
      config.value("tolerances", Json::object()).value("unitarity", 1e-10);

  Json report;
  report["config_hash"] = dusff::hash_hex(dusff::config_hash(config));
  bool all_ok = true;
  Json gates = Json::array();
  for (int cell = 0; cell < (spec.inhomogeneous() ? spec.cells : 1); ++cell) {
    for (const char* which : {"U", "W"}) {
      const dusff::Matrix& g =
          (*which == 'U') ? spec.u_gate(cell) : spec.w_gate(cell);
      const auto check = dusff::check_dual_unitary(g, tol);
      all_ok &= check.ok;
      gates.push_back({{"gate", which},
                       {"cell", cell},
                       {"unitarity_residual", check.unitarity_residual},
                       {"duality_residual", check.dual_residual},
                       {"pass", check.ok}});
      std::cout << which << "[" << cell << "]  unitarity "
                << check.unitarity_residual << "  duality "
                << check.dual_residual << "  "
                << (check.ok ? "PASS" : "FAIL") << "\n";
    }
  }
  report["gates"] = gates;
  report["pass"] = all_ok;
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << report.dump(2) << "\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_sff(const std::string& config_path, const std::string& out_path,
            const std::string& samples_out, std::int64_t seed_override) {
  const Json config = load_config(config_path);
  dusff::validate_run_config(config, "sff");
  auto spec = dusff::spec_from_json(config.at("circuit"));
  const std::uint64_t seed = seed_override >= 0
                                 ? static_cast<std::uint64_t>(seed_override)
                                 : config.value("seed", std::uint64_t{1});
  const int n_samples = config.at("n_samples").get<int>();
  const int order = config.value("moment_order", 1);
  const auto method = parse_method(config.value("trace_method", "auto"));
  std::vector<int> t_grid = config.at("t_grid").get<std::vector<int>>();
  std::vector<int> l_grid =
      config.value("L_grid", std::vector<int>{spec.cells});

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  const std::string hash = dusff::hash_hex(dusff::config_hash(config));
  (*out) << "# config_hash=" << hash << " seed=" << seed << "\n";
  (*out) << "t,L,n,mean,se,n_samples,seed,cue_ref,coe_ref\n";

  std::ofstream samples_file;
  if (!samples_out.empty()) {
    samples_file.open(samples_out);
    samples_file << "# config_hash=" << hash << "\n";
    samples_file << "seed,sample_idx,t,L,re,im\n";
  }

  for (int cells : l_grid) {
    spec.cells = cells;
    const auto n_dim = dusff::int_pow(spec.d, 2 * cells);
    for (int t : t_grid) {
      const auto est = (order == 1)
                           ? dusff::sff_estimate(spec, t, n_samples, seed, method)
                           : dusff::sff_moment(spec, t, order, n_samples, seed,
                                               method);
      if (est.heavy_tail_warning) {
        std::cerr << "warning: relative standard error above 25% at t=" << t
                  << " L=" << cells << "; do not trust this row without more samples\n";
      }
      (*out) << t << "," << cells << "," << order << "," << est.mean << ","
             << est.std_error << "," << est.n_samples << "," << est.seed << ","
             << dusff::cue_sff(t, n_dim) << "," << dusff::coe_sff(t, n_dim)
             << "\n";
      if (samples_file.is_open()) {
        for (const auto& s :
             dusff::sff_trace_samples(spec, t, n_samples, seed, method)) {
          samples_file << s.seed << "," << s.sample_index << "," << s.t << ","
                       << cells << "," << s.trace_value.real() << ","
                       << s.trace_value.imag() << "\n";
        }
      }
    }
  }
  return 0;
}

int cmd_transfer(const std::string& config_path, const std::string& out_path,
                 const std::string& curve_out) {
  const Json config = load_config(config_path);
  dusff::validate_run_config(config, "transfer");
  const auto spec = dusff::spec_from_json(config.at("circuit"));
  if (spec.inhomogeneous()) {
    throw std::invalid_argument("transfer command expects homogeneous gates");
  }
  const auto quad = quadrature_from(config);
  const int l_max = config.value("L_max", 500);
  const int k = config.value("spectrum_k", 8);
  const std::string hash = dusff::hash_hex(dusff::config_hash(config));

  const char* cache_env = std::getenv("DUSFF_CACHE_DIR");
  const std::string cache_dir = cache_env ? cache_env : "";

  Json report;
  report["config_hash"] = hash;
  report["quadrature"] = {{"nodes", quad.nodes_per_axis}};
  Json per_t = Json::array();
  std::ofstream curve_file;
  if (!curve_out.empty()) {
    curve_file.open(curve_out);
    curve_file << "# config_hash=" << hash << "\n";
    curve_file << "t,L,re,im\n";
  }

  for (int t : config.at("t_grid").get<std::vector<int>>()) {
    const std::string cache_key = cache_dir.empty()
                                      ? ""
                                      : cache_dir + "/dusff_" + hash + "_t" +
                                            std::to_string(t) + ".json";
    Json block;
    bool cached = false;
    if (!cache_key.empty() && std::filesystem::exists(cache_key)) {
      std::ifstream in(cache_key);
      in >> block;
      cached = block.value("t", -1) == t;
    }
    if (!cached) {
      const auto ctx = dusff::make_transfer_context(spec.gate_U, spec.gate_W, t,
                                                    spec.disorder, quad);
      const auto spectrum = dusff::leading_spectrum(ctx, k);
      const auto curve = dusff::transfer_trace_curve(ctx, l_max);
      block["t"] = t;
      block["method"] = spectrum.method;
      block["unimodular_count"] = spectrum.unimodular_count;
      block["spectral_radius"] = spectrum.spectral_radius;
      block["ambiguous"] = spectrum.ambiguous;
      block["residual"] = spectrum.max_residual;
      Json evs = Json::array();
      for (const auto& ev : spectrum.eigenvalues) {
        evs.push_back({{"re", ev.real()}, {"im", ev.imag()}, {"abs", std::abs(ev)}});
      }
      block["eigenvalues"] = evs;
      const int target = spec.time_reversal ? 2 * t : t;
      int first_hit = -1;
      Json trace = Json::array();
      for (int L = 1; L <= l_max; ++L) {
        const dusff::Cplx v = curve[static_cast<std::size_t>(L - 1)];
        trace.push_back({{"L", L}, {"re", v.real()}, {"im", v.imag()}});
        if (first_hit < 0 && std::abs(v - dusff::Cplx(target)) < 1e-6) {
          first_hit = L;
        }
      }
      block["trace_curve"] = trace;
      block["converged"] = first_hit > 0;
      block["first_L_within_1e-6"] = first_hit;
      block["limit_target"] = target;
      if (!cache_key.empty()) {
        std::ofstream out(cache_key);
        out << block.dump() << "\n";
      }
    }
    if (curve_file.is_open()) {
      for (const auto& row : block.at("trace_curve")) {
        curve_file << t << "," << row.at("L").get<int>() << ","
                   << row.at("re").get<double>() << ","
                   << row.at("im").get<double>() << "\n";
      }
    }
    std::cout << "t=" << t << "  unimodular=" << block.at("unimodular_count")
              << "  radius=" << block.at("spectral_radius")
              << "  converged=" << block.at("converged")
              << (cached ? "  (cached)" : "") << "\n";
    per_t.push_back(std::move(block));
  }
  report["results"] = per_t;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& criteria, const std::string& out_path,
               std::int64_t seed_override) {
  dusff::VerifyOptions opts;
  if (seed_override >= 0) opts.seed = static_cast<std::uint64_t>(seed_override);
  if (!criteria.empty()) {
    std::stringstream ss(criteria);
    std::string token;
    while (std::getline(ss, token, ',')) {
      opts.criteria.push_back(std::stoi(token));
    }
  }
  const auto results = dusff::run_verification(opts, &std::cout);
  bool all = true;
  Json out = Json::array();
  for (const auto& r : results) {
    all &= r.passed;
    out.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"seconds", r.seconds},
                   {"detail", r.detail}});
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    file << Json{{"seed", opts.seed}, {"criteria", out}, {"all_passed", all}}.dump(2)
         << "\n";
  }
  std::cout << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-unitary circuit spectral form factor laboratory"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = library default)");

  std::string config_path, out_path, samples_out, curve_out, json_out, criteria;
  std::int64_t seed_override = -1;

  auto* gate = app.add_subcommand("gate-check", "unitarity and duality residuals");
  gate->add_option("--config", config_path)->required();
  gate->add_option("--json", json_out, "write the report as JSON");

  auto* sff = app.add_subcommand("sff", "disorder-averaged |tr U^t|^2 over a grid");
  sff->add_option("--config", config_path)->required();
  sff->add_option("--out", out_path, "CSV output path (default stdout)");
  sff->add_option("--samples-out", samples_out, "per-sample trace CSV");
  sff->add_option("--seed", seed_override, "override the config seed");

  auto* transfer = app.add_subcommand("transfer", "transfer-matrix spectra and traces");
  transfer->add_option("--config", config_path)->required();
  transfer->add_option("--out", out_path, "JSON report path");
  transfer->add_option("--curve-out", curve_out, "trace-curve CSV path");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--criteria", criteria, "comma-separated ids (default all)");
  verify->add_option("--out", out_path, "JSON report path");
  verify->add_option("--seed", seed_override, "override the suite seed");

  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  try {
    if (gate->parsed()) return cmd_gate_check(config_path, json_out);
    if (sff->parsed()) return cmd_sff(config_path, out_path, samples_out, seed_override);
    if (transfer->parsed()) return cmd_transfer(config_path, out_path, curve_out);
    if (verify->parsed()) return cmd_verify(criteria, out_path, seed_override);
  } catch (const dusff::ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
