#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "satqkd/decoy_bounds.hpp"
#include "satqkd/link_geometry.hpp"
#include "satqkd/pdt_sampler.hpp"
#include "satqkd/qkd_noise.hpp"

namespace satqkd {

enum class Protocol { SinglePhoton, DecoyWCP };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view s);  // "sp" or "wcp"

enum class KeyStatus {
  Ok,
  NoSignal,
  AbortOnQber,          // observed QBER above the tolerance
  EntropyExhausted,     // penalties exceed the extractable entropy
  DecoyBoundsCrossed,   // a lower bound exceeds the observed total
  SinglePhotonBoundEmpty,
  PhaseErrorSaturated,  // phi_X >= 0.5
  OptimizationStalled,  // no searched point gave l > 0
};

std::string_view to_string(KeyStatus s);

// Counts are doubles: blocks reach 1e12 in limit checks and expected
// counts are fractional.
struct ProtocolParams {
  Protocol variant = Protocol::SinglePhoton;
  double block_n = 1e6;          // sifted key bits (SP) or X-basis detections (WCP)
  std::optional<double> pe_bits; // k, SP only; defaults to block_n
  std::optional<double> Q_tol;   // SP only; defaults to the observed QBER
  double eps_sec = 1e-9;
  double eps_cor = 1e-9;
  double q = 1.0;
  double f_EC = 1.16;
  std::array<double, 3> intensities{0.5, 0.1, 2e-4};
  std::array<double, 3> intensity_probs{0.7, 0.2, 0.1};
  double basis_prob = 0.5;       // probability of the X basis, both parties
  double rep_rate = 10e6;        // Hz

  double k() const { return pe_bits.value_or(block_n); }
};

// Throws std::invalid_argument on violated invariants.
void validate(const ProtocolParams& p);

// Block size and repetition rate defaults per protocol and direction.
ProtocolParams default_params(Protocol variant, LinkDirection direction);

double binary_entropy(double p);

// sqrt((n+k)/(n k) (k+1)/k ln(2/eps_sec))
double sp_mu(double n, double k, double eps_sec);

struct KeyLength {
  double bits = 0.0;
  KeyStatus status = KeyStatus::Ok;
};

// floor(n (q - h2(Q_tol + mu)) - f_EC n h2(Q_obs) - log2(2 / (eps_sec^2 eps_cor))),
// clamped at zero.
KeyLength sp_key_length(double n, double k, double Q_tol, double q, double eps_sec,
                        double eps_cor, double f_EC, double Q_obs);

struct WcpKey {
  KeyLength key;
  DecoyBounds bounds;
  double qber_X = 0.0;
};

// s_X0 + s_X1 (1 - h2(phi_X)) - f_EC n_X h2(Q_X) - 6 log2(21/eps_sec) - log2(2/eps_cor)
WcpKey wcp_key_length(const DecoyObservations& obs, const ProtocolParams& p);

// Background photons per detection window and intrinsic error rate.
struct Channel {
  double n_noise = 0.0;
  double Q0 = 0.02;
};

Channel channel_noise(const NoiseEnvironment& env, const LinkScenario& s);

struct Observations {
  double pulses = 0.0;
  double sifted = 0.0;  // SP: both parties in the same basis and a click
  double errors = 0.0;
  DecoyObservations decoy;  // WCP
};

// Expected counts for `pulses` sent at transmittance eta.
Observations expected_observations(double eta, const Channel& ch, const LinkScenario& s,
                                   const ProtocolParams& p, double pulses);

// Binomial draws around the expected-value model, seeded.
Observations sample_observations(double eta, const Channel& ch, const LinkScenario& s,
                                 const ProtocolParams& p, double pulses,
                                 std::uint64_t seed);

struct RatePoint {
  double key_length = 0.0;
  double pulses = 0.0;  // sent pulses needed to fill the block
  double rate = 0.0;    // key bits per sent pulse
  KeyStatus status = KeyStatus::Ok;
};

// Key length and rate for one fixed transmittance.
RatePoint rate_at(double eta, const Channel& ch, const LinkScenario& s, const ProtocolParams& p);

struct OptimizedPoint {
  RatePoint point;
  ProtocolParams params;
};

// Maximizes rate_at over the free parameters of the protocol.  The start
// point `p` is always among the candidates.
OptimizedPoint optimize_point(double eta, const Channel& ch, const LinkScenario& s,
                              const ProtocolParams& p);

struct KeyRateResult {
  double key_length = 0.0;      // at the PDT mean transmittance
  double rate_per_pulse = 0.0;  // at the PDT mean transmittance
  double rate_avg = 0.0;        // sum_i R(eta_i) P(eta_i) over bin centres
  ProtocolParams optimal_params;  // maximizer at the mean transmittance
  KeyStatus status = KeyStatus::Ok;
  std::vector<double> bin_rate;   // R(eta_i), zero for empty bins
};

// Fixed parameters in every bin.
KeyRateResult pdt_averaged_rate(const TransmittanceDistribution& pdt, const LinkScenario& s,
                                const ProtocolParams& p, const Channel& ch);

// Parameters optimized separately in every occupied bin.
KeyRateResult optimize_rate(const TransmittanceDistribution& pdt, const LinkScenario& s,
                            const ProtocolParams& p, const Channel& ch);

}  // namespace satqkd
