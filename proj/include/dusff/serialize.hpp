#pragma once

#include <string>

#include "json.hpp"

#include "dusff/circuit.hpp"

namespace dusff {

using Json = nlohmann::json;

// Matrices travel as row-major interleaved [re00, im00, re01, im01, ...];
// doubles round-trip exactly through the JSON layer.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, int rows, int cols);

Json distribution_to_json(const DisorderDistribution& dist);
DisorderDistribution distribution_from_json(const Json& j);

struct GateConfig {
  Matrix gate;
  std::string kind;
  bool interacting = true;  // false only for the J = 0 members
};

// Accepted kinds: "swap", "matrix" (data), "parametrized" (J + u1..u4 or
// haar_seed), "time_reversal" (J + u1,u2 or haar_seed).
GateConfig gate_from_config(const Json& j, int d);

Json spec_to_json(const CircuitSpec& spec);
CircuitSpec spec_from_json(const Json& j);

// FNV-1a over the canonical dump; embedded in every output for provenance.
std::uint64_t config_hash(const Json& j);
std::string hash_hex(std::uint64_t h);

// Schema gate for CLI configs: checks schema_version and required fields,
// throws std::invalid_argument with a readable message.
void validate_run_config(const Json& j, const std::string& command);

}  // namespace dusff
