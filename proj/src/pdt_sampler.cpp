#include "satqkd/pdt_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "satqkd/rng.hpp"

namespace satqkd {

namespace {

void check(const SamplerOptions& opts) {
  if (opts.samples == 0) throw std::invalid_argument("sample count must be >= 1");
  if (opts.n_bins < 2) throw std::invalid_argument("bin count must be >= 2");
}

double eta_at(const EllipticBeamDistribution& dist, const ApertureSpec& aperture,
              const QuadratureOptions& q, std::uint64_t seed, std::uint64_t i,
              bool& ok) {
  const SampleVariates v = sample_variates(seed, i);
  const BeamSample b = realize(dist, v.normals, v.uniform);
  const TransmittanceResult r = integrate_transmittance(b, aperture, q);
  ok = r.error <= accepted_error(q, r.eta);
  return r.eta;
}

[[noreturn]] void fail_at(std::uint64_t index) {
  throw IntegrationError("transmittance quadrature did not reach tolerance at sample " +
                         std::to_string(index));
}

}  // namespace

double TransmittanceDistribution::standard_error() const {
  return sample_count > 0 ? std_eta / std::sqrt(static_cast<double>(sample_count)) : 0.0;
}

int TransmittanceDistribution::mode_bin() const {
  return static_cast<int>(std::max_element(bin_prob.begin(), bin_prob.end()) -
                          bin_prob.begin());
}

int bin_index(double eta, int n_bins) {
  const int i = static_cast<int>(eta * n_bins);
  return std::clamp(i, 0, n_bins - 1);
}

TransmittanceDistribution summarize(const std::vector<double>& eta, int n_bins,
                                    std::uint64_t seed) {
  if (eta.empty()) throw std::invalid_argument("no samples to summarize");
  if (n_bins < 2) throw std::invalid_argument("bin count must be >= 2");

  std::vector<std::uint64_t> counts(n_bins, 0);
  double sum = 0.0;
  for (double e : eta) {
    ++counts[bin_index(e, n_bins)];
    sum += e;
  }
  const double m = static_cast<double>(eta.size());

  TransmittanceDistribution d;
  d.sample_count = eta.size();
  d.seed = seed;
  d.mean_eta = sum / m;
  double ss = 0.0;
  for (double e : eta) ss += (e - d.mean_eta) * (e - d.mean_eta);
  d.std_eta = eta.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;

  std::vector<double> sorted = eta;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  if (sorted.size() % 2 == 1) {
    d.median_eta = sorted[mid];
  } else {
    const double upper = sorted[mid];
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + mid);
    d.median_eta = 0.5 * (lower + upper);
  }

  d.bin_prob.resize(n_bins);
  for (int i = 0; i < n_bins; ++i) d.bin_prob[i] = counts[i] / m;
  d.mean_loss_db = d.mean_eta > 0.0 ? -10.0 * std::log10(d.mean_eta)
                                    : std::numeric_limits<double>::infinity();
  return d;
}

std::vector<double> sample_transmittance(const EllipticBeamDistribution& dist,
                                         const ApertureSpec& aperture,
                                         const SamplerOptions& opts) {
  check(opts);
  const auto n = static_cast<std::int64_t>(opts.samples);
  std::vector<double> eta(opts.samples);
  std::int64_t first_failure = n;

#pragma omp parallel for schedule(dynamic, 64) reduction(min : first_failure)
  for (std::int64_t i = 0; i < n; ++i) {
    bool ok = true;
    eta[i] = eta_at(dist, aperture, opts.quadrature, opts.seed, i, ok);
    if (!ok && i < first_failure) first_failure = i;
  }

  if (first_failure < n) fail_at(first_failure);
  return eta;
}

TransmittanceDistribution sample_pdt(const EllipticBeamDistribution& dist,
                                     const ApertureSpec& aperture,
                                     const SamplerOptions& opts) {
  return summarize(sample_transmittance(dist, aperture, opts), opts.n_bins, opts.seed);
}

TransmittanceDistribution sample_pdt_serial(const EllipticBeamDistribution& dist,
                                            const ApertureSpec& aperture,
                                            const SamplerOptions& opts) {
  check(opts);
  std::vector<double> eta(opts.samples);
  for (std::size_t i = 0; i < opts.samples; ++i) {
    bool ok = true;
    eta[i] = eta_at(dist, aperture, opts.quadrature, opts.seed, i, ok);
    if (!ok) fail_at(i);
  }
  return summarize(eta, opts.n_bins, opts.seed);
}

SampledMoments sample_beam_moments(const EllipticBeamDistribution& dist,
                                   std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const auto n = static_cast<std::int64_t>(samples);

  // Per-sample values, reduced serially afterwards for a fixed summation
  // order.
  std::vector<std::array<double, 4>> v(samples);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const SampleVariates r = sample_variates(seed, i);
    const BeamSample b = realize(dist, r.normals, r.uniform);
    v[i] = {b.x0 * b.x0, b.y0 * b.y0, b.W1 * b.W1, b.W2 * b.W2};
  }

  const double m = static_cast<double>(samples);
  std::array<double, 4> mean{};
  for (const auto& s : v)
    for (int j = 0; j < 4; ++j) mean[j] += s[j];
  for (double& x : mean) x /= m;

  std::array<double, 4> var{};
  double c12 = 0.0;
  for (const auto& s : v) {
    for (int j = 0; j < 4; ++j) var[j] += (s[j] - mean[j]) * (s[j] - mean[j]);
    c12 += (s[2] - mean[2]) * (s[3] - mean[3]);
  }
  for (double& x : var) x /= (m - 1.0);
  c12 /= (m - 1.0);

  // Variance of the product estimator for the standard error of cov.
  double p2 = 0.0;
  for (const auto& s : v) {
    const double p = (s[2] - mean[2]) * (s[3] - mean[3]) - c12;
    p2 += p * p;
  }
  p2 /= (m - 1.0);

  SampledMoments out;
  out.mean_x0sq = mean[0];
  out.mean_y0sq = mean[1];
  out.mean_W2[0] = mean[2];
  out.mean_W2[1] = mean[3];
  out.cov_W2 = Mat2{{{var[2], c12}, {c12, var[3]}}};
  out.se_x0sq = std::sqrt(var[0] / m);
  out.se_y0sq = std::sqrt(var[1] / m);
  out.se_W2[0] = std::sqrt(var[2] / m);
  out.se_W2[1] = std::sqrt(var[3] / m);
  out.se_cov12 = std::sqrt(p2 / m);
  return out;
}

TransmittanceDistribution mix_distributions(const TransmittanceDistribution& a,
                                            const TransmittanceDistribution& b,
                                            double w) {
  if (a.n_bins() != b.n_bins()) throw std::invalid_argument("bin counts differ");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weight must be in [0, 1]");
  TransmittanceDistribution d;
  d.bin_prob.resize(a.bin_prob.size());
  for (std::size_t i = 0; i < d.bin_prob.size(); ++i)
    d.bin_prob[i] = w * a.bin_prob[i] + (1.0 - w) * b.bin_prob[i];
  d.mean_eta = w * a.mean_eta + (1.0 - w) * b.mean_eta;
  d.mean_loss_db = d.mean_eta > 0.0 ? -10.0 * std::log10(d.mean_eta)
                                    : std::numeric_limits<double>::infinity();
  return d;
}

LinkModel build_link_model(const LinkScenario& s, const WeatherCondition& w) {
  LinkModel m;
  m.geometry = resolve_geometry(s, w);
  m.moments = beam_moments(s, w, m.geometry);
  m.distribution = build_distribution(m.moments, s.waist);
  m.aperture = ApertureSpec{s.receiver_radius, m.geometry.chi_ext};
  return m;
}

std::vector<SweepPoint> sweep_mean_transmittance(const LinkScenario& base,
                                                 const WeatherCondition& w,
                                                 const std::vector<double>& zeniths,
                                                 const SamplerOptions& opts) {
  check(opts);
  for (double z : zeniths)
    if (!(z >= 0.0 && z <= kMaxZenith + 1e-12))
      throw std::invalid_argument("sweep angle outside [0, 80] degrees");

  std::vector<SweepPoint> out(zeniths.size());
  auto run_point = [&](std::size_t i, bool parallel_samples) {
    LinkScenario s = base;
    s.zenith_angle = zeniths[i];
    const LinkModel m = build_link_model(s, w);
    out[i].zenith = zeniths[i];
    out[i].geometry = m.geometry;
    out[i].pdt = parallel_samples ? sample_pdt(m.distribution, m.aperture, opts)
                                  : sample_pdt_serial(m.distribution, m.aperture, opts);
  };

  const auto n = static_cast<std::int64_t>(zeniths.size());
  if (n < omp_get_max_threads()) {
    for (std::int64_t i = 0; i < n; ++i) run_point(i, true);
    return out;
  }

  std::vector<std::exception_ptr> errors(zeniths.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      run_point(i, false);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace satqkd
