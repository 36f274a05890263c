#include "dusff/sff.hpp"

#include <cmath>

namespace dusff {

std::vector<SpectralSample> sff_trace_samples(const CircuitSpec& spec, int t,
                                              int n_samples, std::uint64_t seed,
                                              TraceMethod method,
                                              const TraceBudget& budget) {
  if (n_samples < 1) throw std::invalid_argument("sff: need n_samples >= 1");
  spec.validate();
  std::vector<SpectralSample> samples(static_cast<std::size_t>(n_samples));
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n_samples; ++i) {
    const auto real = sample_realization(spec.disorder, spec.cells, seed,
                                         static_cast<std::uint64_t>(i));
    SpectralSample s;
    s.trace_value = trace_power(spec, real, t, method, budget);
    s.t = t;
    s.seed = seed;
    s.sample_index = static_cast<std::uint64_t>(i);
    samples[static_cast<std::size_t>(i)] = s;
  }
  return samples;
}

namespace {

SffEstimate reduce_moment(const std::vector<SpectralSample>& samples, int t,
                          int cells, int order, std::uint64_t seed) {
  const int n = static_cast<int>(samples.size());
  double sum = 0.0, sumsq = 0.0;
  for (const auto& s : samples) {
    const double v = std::pow(std::norm(s.trace_value), order);
    sum += v;
    sumsq += v * v;
  }
  SffEstimate est;
  est.t = t;
  est.cells = cells;
  est.n_samples = n;
  est.moment_order = order;
  est.seed = seed;
  est.mean = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1));
    est.std_error = std::sqrt(var / n);
  }
  est.heavy_tail_warning =
      est.mean > 0.0 && est.std_error > 0.25 * est.mean;
  return est;
}

}  // namespace

SffEstimate sff_estimate(const CircuitSpec& spec, int t, int n_samples,
                         std::uint64_t seed, TraceMethod method,
                         const TraceBudget& budget) {
  if (n_samples < 2) throw std::invalid_argument("sff_estimate: n_samples >= 2");
  const auto samples = sff_trace_samples(spec, t, n_samples, seed, method, budget);
  return reduce_moment(samples, t, spec.cells, 1, seed);
}

SffEstimate sff_moment(const CircuitSpec& spec, int t, int order, int n_samples,
                       std::uint64_t seed, TraceMethod method,
                       const TraceBudget& budget) {
  if (order < 1) throw std::invalid_argument("sff_moment: order >= 1");
  const auto samples = sff_trace_samples(spec, t, n_samples, seed, method, budget);
  return reduce_moment(samples, t, spec.cells, order, seed);
}

double cue_sff(std::int64_t t, std::int64_t n_dim) {
  if (t < 0 || n_dim < 1) throw std::invalid_argument("cue_sff: bad arguments");
  return static_cast<double>(std::min(t, n_dim));
}

double coe_sff(std::int64_t t, std::int64_t n_dim) {
  if (t < 0 || n_dim < 1) throw std::invalid_argument("coe_sff: bad arguments");
  const std::int64_t lo = std::min(t, n_dim);
  const std::int64_t hi = std::max(t, n_dim);
  double sum = 0.0;
  for (std::int64_t m = 1; m <= lo; ++m) {
    sum += 1.0 / static_cast<double>(2 * m + 2 * hi - n_dim - 1);
  }
  return 2.0 * static_cast<double>(lo) * (1.0 - sum);
}

}  // namespace dusff
