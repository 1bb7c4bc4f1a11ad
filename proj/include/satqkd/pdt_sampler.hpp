#pragma once

#include <cstdint>
#include <vector>

#include "satqkd/beam_stats.hpp"
#include "satqkd/transmittance.hpp"

namespace satqkd {

// Binned PDT on [0, 1] with summary statistics of the raw samples.
// bin_prob holds probabilities per bin; divide by bin_width() for a
// density.
struct TransmittanceDistribution {
  std::vector<double> bin_prob;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  double mean_eta = 0.0;
  double median_eta = 0.0;
  double std_eta = 0.0;       // sample standard deviation
  double mean_loss_db = 0.0;  // -10 log10(mean_eta); +inf when mean_eta == 0

  int n_bins() const { return static_cast<int>(bin_prob.size()); }
  double bin_width() const { return 1.0 / n_bins(); }
  double bin_lower(int i) const { return i * bin_width(); }
  double bin_upper(int i) const { return (i + 1) * bin_width(); }
  double bin_center(int i) const { return (i + 0.5) * bin_width(); }
  double standard_error() const;
  int mode_bin() const;  // lowest index among the most probable bins
};

struct SamplerOptions {
  std::size_t samples = 10000;
  int n_bins = 200;
  std::uint64_t seed = 1;
  QuadratureOptions quadrature{};
};

int bin_index(double eta, int n_bins);

// Monte-Carlo PDT.  Sample i uses Philox stream (seed, i), so the result
// is independent of the OpenMP thread count.  Throws IntegrationError
// naming the lowest failing sample index.
TransmittanceDistribution sample_pdt(const EllipticBeamDistribution& dist,
                                     const ApertureSpec& aperture,
                                     const SamplerOptions& opts);

// Single-threaded reference with the same output bit for bit.
TransmittanceDistribution sample_pdt_serial(const EllipticBeamDistribution& dist,
                                            const ApertureSpec& aperture,
                                            const SamplerOptions& opts);

// Raw transmittance samples, in index order.
std::vector<double> sample_transmittance(const EllipticBeamDistribution& dist,
                                         const ApertureSpec& aperture,
                                         const SamplerOptions& opts);

// Empirical moments of the beam parameters, no integration involved.
struct SampledMoments {
  double mean_x0sq = 0.0, mean_y0sq = 0.0;
  double mean_W2[2] = {0.0, 0.0};
  Mat2 cov_W2{};
  // Standard errors of the estimators above.
  double se_x0sq = 0.0, se_y0sq = 0.0;
  double se_W2[2] = {0.0, 0.0};
  double se_cov12 = 0.0;
};

SampledMoments sample_beam_moments(const EllipticBeamDistribution& dist,
                                   std::size_t samples, std::uint64_t seed);

// Summary statistics from raw samples (sorted copy for the median).
TransmittanceDistribution summarize(const std::vector<double>& eta, int n_bins,
                                    std::uint64_t seed);

// w * a + (1 - w) * b, bin by bin; summary fields are mixed where the
// mixture is exact (mean) and left at zero otherwise.
TransmittanceDistribution mix_distributions(const TransmittanceDistribution& a,
                                            const TransmittanceDistribution& b,
                                            double w);

// Everything the sampler needs for one scenario at its zenith angle.
struct LinkModel {
  SlantGeometry geometry;
  BeamMoments moments;
  EllipticBeamDistribution distribution;
  ApertureSpec aperture;
};

LinkModel build_link_model(const LinkScenario& s, const WeatherCondition& w);

struct SweepPoint {
  double zenith = 0.0;  // rad
  SlantGeometry geometry;
  TransmittanceDistribution pdt;
};

// One PDT per zenith angle, all with the same seed (common random
// numbers across the grid).  Parallel over points when there are at least
// as many points as threads, otherwise over samples within each point.
std::vector<SweepPoint> sweep_mean_transmittance(const LinkScenario& base,
                                                 const WeatherCondition& w,
                                                 const std::vector<double>& zeniths,
                                                 const SamplerOptions& opts);

}  // namespace satqkd
