#include "satqkd/qkd_rates.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace satqkd {

std::string_view to_string(Protocol p) {
  return p == Protocol::SinglePhoton ? "sp" : "wcp";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "sp") return Protocol::SinglePhoton;
  if (s == "wcp") return Protocol::DecoyWCP;
  throw std::invalid_argument("unknown protocol: " + std::string(s));
}

std::string_view to_string(KeyStatus s) {
  switch (s) {
    case KeyStatus::Ok: return "ok";
    case KeyStatus::NoSignal: return "no-signal";
    case KeyStatus::AbortOnQber: return "abort-on-qber";
    case KeyStatus::EntropyExhausted: return "entropy-exhausted";
    case KeyStatus::DecoyBoundsCrossed: return "decoy-bounds-crossed";
    case KeyStatus::SinglePhotonBoundEmpty: return "single-photon-bound-empty";
    case KeyStatus::PhaseErrorSaturated: return "phase-error-saturated";
    case KeyStatus::OptimizationStalled: return "optimization-stalled";
  }
  return "unknown";
}

void validate(const ProtocolParams& p) {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(p.block_n >= 1.0)) throw std::invalid_argument("block size must be >= 1");
  if (p.pe_bits && !(*p.pe_bits >= 1.0))
    throw std::invalid_argument("parameter-estimation bits must be >= 1");
  if (p.Q_tol && !(*p.Q_tol >= 0.0 && *p.Q_tol <= 0.5))
    throw std::invalid_argument("Q_tol must be in [0, 0.5]");
  if (!in_unit(p.eps_sec) || !in_unit(p.eps_cor))
    throw std::invalid_argument("eps_sec and eps_cor must be in (0, 1)");
  if (!(p.q > 0.0 && p.q <= 1.0)) throw std::invalid_argument("q must be in (0, 1]");
  if (!(p.f_EC >= 1.0)) throw std::invalid_argument("f_EC must be >= 1");
  const auto& mu = p.intensities;
  if (!(mu[0] > mu[1] && mu[1] > mu[2] && mu[2] >= 0.0))
    throw std::invalid_argument("intensities must be strictly decreasing and >= 0");
  double total = 0.0;
  for (double x : p.intensity_probs) {
    if (!(x > 0.0)) throw std::invalid_argument("intensity probabilities must be positive");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("intensity probabilities must sum to 1");
  if (!in_unit(p.basis_prob)) throw std::invalid_argument("basis probability must be in (0, 1)");
  if (!(p.rep_rate > 0.0)) throw std::invalid_argument("repetition rate must be positive");
}

ProtocolParams default_params(Protocol variant, LinkDirection direction) {
  ProtocolParams p;
  p.variant = variant;
  const bool down = direction == LinkDirection::Downlink;
  if (variant == Protocol::SinglePhoton) {
    p.block_n = down ? 1e6 : 1e5;
    p.rep_rate = 10e6;
  } else {
    p.block_n = down ? 1e8 : 1e7;
    p.rep_rate = 1e9;
  }
  return p;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must be in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double sp_mu(double n, double k, double eps_sec) {
  if (!(n >= 1.0) || !(k >= 1.0)) throw std::invalid_argument("n and k must be >= 1");
  return std::sqrt((n + k) / (n * k) * (k + 1.0) / k * std::log(2.0 / eps_sec));
}

KeyLength sp_key_length(double n, double k, double Q_tol, double q, double eps_sec,
                        double eps_cor, double f_EC, double Q_obs) {
  if (Q_obs > Q_tol) return {0.0, KeyStatus::AbortOnQber};
  const double tol = Q_tol + sp_mu(n, k, eps_sec);
  if (tol >= 0.5) return {0.0, KeyStatus::EntropyExhausted};
  const double leak = f_EC * n * binary_entropy(Q_obs);
  const double alpha = std::log2(2.0 / (eps_sec * eps_sec * eps_cor));
  const double l = std::floor(n * (q - binary_entropy(tol)) - leak - alpha);
  if (!(l > 0.0)) return {0.0, KeyStatus::EntropyExhausted};
  return {l, KeyStatus::Ok};
}

WcpKey wcp_key_length(const DecoyObservations& obs, const ProtocolParams& p) {
  WcpKey out;
  const double n_X = obs.total_X();
  if (!(n_X > 0.0) || !(obs.total_Z() > 0.0)) {
    out.key.status = KeyStatus::NoSignal;
    return out;
  }
  out.bounds = decoy_bounds(obs, p.intensities, p.intensity_probs, p.eps_sec);
  out.qber_X = obs.errors_X() / n_X;
  const DecoyBounds& b = out.bounds;

  if (!(b.s_X1 > 0.0) || !(b.s_Z1 > 0.0)) {
    out.key.status = KeyStatus::SinglePhotonBoundEmpty;
    return out;
  }
  if (b.s_X0 + b.s_X1 > n_X || b.s_Z1 > obs.total_Z()) {
    out.key.status = KeyStatus::DecoyBoundsCrossed;
    return out;
  }
  if (b.phi_X >= 0.5) {
    out.key.status = KeyStatus::PhaseErrorSaturated;
    return out;
  }
  const double l = std::floor(b.s_X0 + b.s_X1 * (1.0 - binary_entropy(b.phi_X)) -
                              p.f_EC * n_X * binary_entropy(out.qber_X) -
                              6.0 * std::log2(21.0 / p.eps_sec) - std::log2(2.0 / p.eps_cor));
  if (!(l > 0.0)) {
    out.key.status = KeyStatus::EntropyExhausted;
    return out;
  }
  out.key.bits = l;
  return out;
}

Channel channel_noise(const NoiseEnvironment& env, const LinkScenario& s) {
  return Channel{stray_photons(env, s), env.Q0};
}

namespace {

double sifting(double pX) { return pX * pX + (1.0 - pX) * (1.0 - pX); }

struct IntensityModel {
  std::array<double, 3> click{};  // detection probability per pulse
  std::array<double, 3> error{};  // QBER of the detected events
};

IntensityModel wcp_model(double eta_sys, const Channel& ch, const ProtocolParams& p) {
  IntensityModel m;
  for (int k = 0; k < 3; ++k) {
    const double mu = p.intensities[k];
    m.click[k] = click_probability_wcp(mu, eta_sys, ch.n_noise);
    m.error[k] = qber(ch.n_noise, signal_wcp(mu, eta_sys), ch.Q0).value_or(0.0);
  }
  return m;
}

double wcp_key_click_rate(const IntensityModel& m, const ProtocolParams& p) {
  double r = 0.0;
  for (int k = 0; k < 3; ++k) r += p.intensity_probs[k] * m.click[k];
  return p.basis_prob * p.basis_prob * r;
}

}  // namespace

Observations expected_observations(double eta, const Channel& ch, const LinkScenario& s,
                                   const ProtocolParams& p, double pulses) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in [0, 1]");
  const double eta_sys = system_efficiency(s, eta);
  Observations o;
  o.pulses = pulses;
  if (p.variant == Protocol::SinglePhoton) {
    const double click = click_probability_single_photon(signal_single_photon(eta_sys),
                                                         ch.n_noise);
    o.sifted = pulses * click * sifting(p.basis_prob);
    o.errors = o.sifted * qber(ch.n_noise, eta_sys, ch.Q0).value_or(0.0);
    return o;
  }
  const IntensityModel m = wcp_model(eta_sys, ch, p);
  const double pX = p.basis_prob * p.basis_prob;
  const double pZ = (1.0 - p.basis_prob) * (1.0 - p.basis_prob);
  for (int k = 0; k < 3; ++k) {
    const double per_pulse = p.intensity_probs[k] * m.click[k];
    o.decoy.n_X[k] = pulses * pX * per_pulse;
    o.decoy.n_Z[k] = pulses * pZ * per_pulse;
    o.decoy.m_X[k] = o.decoy.n_X[k] * m.error[k];
    o.decoy.m_Z[k] = o.decoy.n_Z[k] * m.error[k];
  }
  o.sifted = o.decoy.total_X() + o.decoy.total_Z();
  o.errors = o.decoy.errors_X() + o.decoy.errors_Z();
  return o;
}

Observations sample_observations(double eta, const Channel& ch, const LinkScenario& s,
                                 const ProtocolParams& p, double pulses,
                                 std::uint64_t seed) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in [0, 1]");
  std::mt19937_64 gen(seed);
  auto draw = [&gen](double trials, double prob) {
    const auto n = static_cast<long long>(std::llround(trials));
    if (n <= 0 || prob <= 0.0) return 0.0;
    std::binomial_distribution<long long> d(n, std::min(prob, 1.0));
    return static_cast<double>(d(gen));
  };

  const double eta_sys = system_efficiency(s, eta);
  Observations o;
  o.pulses = pulses;
  if (p.variant == Protocol::SinglePhoton) {
    const double click = click_probability_single_photon(eta_sys, ch.n_noise);
    o.sifted = draw(pulses, click * sifting(p.basis_prob));
    o.errors = draw(o.sifted, qber(ch.n_noise, eta_sys, ch.Q0).value_or(0.0));
    return o;
  }
  const IntensityModel m = wcp_model(eta_sys, ch, p);
  const double pX = p.basis_prob * p.basis_prob;
  const double pZ = (1.0 - p.basis_prob) * (1.0 - p.basis_prob);
  for (int k = 0; k < 3; ++k) {
    o.decoy.n_X[k] = draw(pulses, pX * p.intensity_probs[k] * m.click[k]);
    o.decoy.n_Z[k] = draw(pulses, pZ * p.intensity_probs[k] * m.click[k]);
    o.decoy.m_X[k] = draw(o.decoy.n_X[k], m.error[k]);
    o.decoy.m_Z[k] = draw(o.decoy.n_Z[k], m.error[k]);
  }
  o.sifted = o.decoy.total_X() + o.decoy.total_Z();
  o.errors = o.decoy.errors_X() + o.decoy.errors_Z();
  return o;
}

RatePoint rate_at(double eta, const Channel& ch, const LinkScenario& s, const ProtocolParams& p) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in [0, 1]");
  const double eta_sys = system_efficiency(s, eta);
  RatePoint r;

  if (p.variant == Protocol::SinglePhoton) {
    const auto Q = qber(ch.n_noise, eta_sys, ch.Q0);
    if (!Q) {
      r.status = KeyStatus::NoSignal;
      return r;
    }
    const double n = p.block_n, k = p.k();
    const double click = click_probability_single_photon(eta_sys, ch.n_noise);
    r.pulses = (n + k) / (click * sifting(p.basis_prob));
    const KeyLength l =
        sp_key_length(n, k, p.Q_tol.value_or(*Q), p.q, p.eps_sec, p.eps_cor, p.f_EC, *Q);
    r.key_length = l.bits;
    r.status = l.status;
    r.rate = l.bits / r.pulses;
    return r;
  }

  const IntensityModel m = wcp_model(eta_sys, ch, p);
  const double per_pulse = wcp_key_click_rate(m, p);
  if (!(per_pulse > 0.0)) {
    r.status = KeyStatus::NoSignal;
    return r;
  }
  r.pulses = p.block_n / per_pulse;
  const Observations o = expected_observations(eta, ch, s, p, r.pulses);
  const WcpKey key = wcp_key_length(o.decoy, p);
  r.key_length = key.key.bits;
  r.status = key.key.status;
  r.rate = key.key.bits / r.pulses;
  return r;
}

namespace {

template <typename PointFn>
KeyRateResult average_over_bins(const TransmittanceDistribution& pdt, PointFn point) {
  const int n = pdt.n_bins();
  KeyRateResult res;
  res.bin_rate.assign(n, 0.0);
  std::vector<KeyStatus> status(n, KeyStatus::NoSignal);

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    if (pdt.bin_prob[i] <= 0.0) continue;
    const OptimizedPoint op = point(pdt.bin_center(i));
    res.bin_rate[i] = op.point.rate;
    status[i] = op.point.status;
  }

  int dominant = -1;
  for (int i = 0; i < n; ++i) {
    if (pdt.bin_prob[i] <= 0.0) continue;
    res.rate_avg += pdt.bin_prob[i] * res.bin_rate[i];
    if (dominant < 0 || pdt.bin_prob[i] > pdt.bin_prob[dominant]) dominant = i;
  }

  const OptimizedPoint at_mean = point(pdt.mean_eta);
  res.key_length = at_mean.point.key_length;
  res.rate_per_pulse = at_mean.point.rate;
  res.optimal_params = at_mean.params;
  res.status = res.rate_avg > 0.0 ? KeyStatus::Ok
               : dominant >= 0    ? status[dominant]
                                  : KeyStatus::NoSignal;
  return res;
}

}  // namespace

KeyRateResult pdt_averaged_rate(const TransmittanceDistribution& pdt, const LinkScenario& s,
                                const ProtocolParams& p, const Channel& ch) {
  validate(p);
  return average_over_bins(pdt, [&](double eta) {
    return OptimizedPoint{rate_at(eta, ch, s, p), p};
  });
}

KeyRateResult optimize_rate(const TransmittanceDistribution& pdt, const LinkScenario& s,
                            const ProtocolParams& p, const Channel& ch) {
  validate(p);
  KeyRateResult res =
      average_over_bins(pdt, [&](double eta) { return optimize_point(eta, ch, s, p); });
  if (!(res.rate_avg > 0.0)) res.status = KeyStatus::OptimizationStalled;
  return res;
}

}  // namespace satqkd
