#pragma once

#include <array>
#include <cmath>
#include <random>

#include "satqkd/decoy_bounds.hpp"

namespace satqkd::testing {

struct PhotonSimResult {
  DecoyObservations obs;
  double true_single_X = 0.0;  // detections caused by one-photon pulses, X basis
  double true_vacuum_X = 0.0;
};

// Aggregated photon-number simulation of a WCP source.  Pulses split over
// basis and intensity, then by Poisson photon number; each photon reaches
// the detector with probability eta_sys and background adds a click with
// probability 1 - exp(-n_noise).  Errors: q0 on signal clicks, 1/2 on
// background-only clicks.  Distributionally exact, cost independent of
// the pulse count.
inline PhotonSimResult simulate_wcp(double pulses, const std::array<double, 3>& mu,
                                    const std::array<double, 3>& probs, double basis_prob,
                                    double eta_sys, double n_noise, double q0,
                                    std::mt19937_64& rng) {
  auto binom = [&rng](double n, double p) {
    if (n <= 0 || p <= 0) return 0.0;
    if (p >= 1) return n;
    std::binomial_distribution<long long> d(static_cast<long long>(n), p);
    return static_cast<double>(d(rng));
  };
  const double p_dark = -std::expm1(-n_noise);
  PhotonSimResult r;
  double remaining = pulses;
  // Sifted X, sifted Z, discarded; then intensities.
  const double pX = basis_prob * basis_prob, pZ = (1 - basis_prob) * (1 - basis_prob);
  const double nX = binom(remaining, pX);
  const double nZ = binom(remaining - nX, pZ / (1 - pX));
  for (int basis = 0; basis < 2; ++basis) {
    double left = basis == 0 ? nX : nZ;
    double p_left = 1.0;
    for (int k = 0; k < 3; ++k) {
      const double nk = k == 2 ? left : binom(left, probs[k] / p_left);
      left -= nk;
      p_left -= probs[k];
      // Photon-number split; pulses above 30 photons are negligible here.
      double rest = nk, pmf_left = 1.0, pmf = std::exp(-mu[k]);
      double clicks = 0.0, errors = 0.0;
      for (int j = 0; j <= 30 && rest > 0; ++j) {
        const double nj = j == 30 ? rest : binom(rest, std::min(1.0, pmf / pmf_left));
        rest -= nj;
        pmf_left -= pmf;
        pmf *= mu[k] / (j + 1);
        const double p_sig = j == 0 ? 0.0 : -std::expm1(j * std::log1p(-eta_sys));
        const double sig = binom(nj, p_sig);
        const double dark_only = binom(nj - sig, p_dark);
        const double c = sig + dark_only;
        clicks += c;
        errors += binom(sig, q0) + binom(dark_only, 0.5);
        if (basis == 0 && j == 1) r.true_single_X += c;
        if (basis == 0 && j == 0) r.true_vacuum_X += c;
      }
      auto& n = basis == 0 ? r.obs.n_X : r.obs.n_Z;
      auto& m = basis == 0 ? r.obs.m_X : r.obs.m_Z;
      n[k] = clicks;
      m[k] = errors;
    }
  }
  return r;
}

}  // namespace satqkd::testing
