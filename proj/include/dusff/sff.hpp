#pragma once

#include <vector>

#include "dusff/circuit.hpp"

namespace dusff {

struct SffEstimate {
  int t = 0;
  int cells = 0;
  int n_samples = 0;
  int moment_order = 1;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  // set when the relative standard error exceeds 25% (heavy-tailed moments)
  bool heavy_tail_warning = false;
};

// Per-sample traces; reproducible bit for bit under any thread count because
// samples own disjoint RNG streams and the reduction order is fixed.
std::vector<SpectralSample> sff_trace_samples(const CircuitSpec& spec, int t,
                                              int n_samples, std::uint64_t seed,
                                              TraceMethod method = TraceMethod::Auto,
                                              const TraceBudget& budget = {});

// Disorder average of |tr U^t|^2.
SffEstimate sff_estimate(const CircuitSpec& spec, int t, int n_samples,
                         std::uint64_t seed,
                         TraceMethod method = TraceMethod::Auto,
                         const TraceBudget& budget = {});

// Disorder average of |tr U^t|^{2n}.
SffEstimate sff_moment(const CircuitSpec& spec, int t, int order, int n_samples,
                       std::uint64_t seed,
                       TraceMethod method = TraceMethod::Auto,
                       const TraceBudget& budget = {});

// Reference curves of the two circular ensembles.
double cue_sff(std::int64_t t, std::int64_t n_dim);
double coe_sff(std::int64_t t, std::int64_t n_dim);

}  // namespace dusff
