#include "satqkd/decoy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satqkd {

namespace {

// Probability that an intensity-weighted pulse carries j photons.
double tau(int j, const std::array<double, 3>& mu, const std::array<double, 3>& p) {
  double t = 0.0;
  for (int k = 0; k < 3; ++k) {
    double term = p[k] * std::exp(-mu[k]);
    for (int i = 1; i <= j; ++i) term *= mu[k] / i;
    t += term;
  }
  return t;
}

struct Deviated {
  std::array<double, 3> plus{}, minus{};
};

// e^{mu_k} / p_k * (count_k +- sqrt(total / 2 * ln(21 / eps_sec)))
Deviated deviate(const std::array<double, 3>& counts, double total,
                 const std::array<double, 3>& mu, const std::array<double, 3>& p,
                 double eps_sec) {
  const double delta = std::sqrt(0.5 * total * std::log(21.0 / eps_sec));
  Deviated d;
  for (int k = 0; k < 3; ++k) {
    const double scale = std::exp(mu[k]) / p[k];
    d.plus[k] = scale * (counts[k] + delta);
    d.minus[k] = scale * (counts[k] - delta);
  }
  return d;
}

double vacuum_bound(const Deviated& n, const std::array<double, 3>& mu, double t0) {
  return std::max(0.0, t0 * (mu[1] * n.minus[2] - mu[2] * n.plus[1]) / (mu[1] - mu[2]));
}

double single_photon_bound(const Deviated& n, const std::array<double, 3>& mu, double t0,
                           double t1, double s0) {
  const double m1 = mu[0], m2 = mu[1], m3 = mu[2];
  const double num =
      n.minus[1] - n.plus[2] - (m2 * m2 - m3 * m3) / (m1 * m1) * (n.plus[0] - s0 / t0);
  return m1 * t1 * num / (m1 * (m2 - m3) - m2 * m2 + m3 * m3);
}

}  // namespace

double phase_error_correction(double a, double b, double c, double d) {
  const double cd = c * d;
  const double bb = (1.0 - b) * b;
  return std::sqrt((c + d) * bb / (cd * std::log(2.0)) *
                   std::log2((c + d) / (cd * bb) * 441.0 / (a * a)));
}

DecoyBounds decoy_bounds(const DecoyObservations& obs, const std::array<double, 3>& mu,
                         const std::array<double, 3>& probs, double eps_sec) {
  if (!(mu[0] > mu[1] + mu[2]) || !(mu[1] > mu[2]) || !(mu[2] >= 0.0))
    throw std::invalid_argument("intensities must satisfy mu1 > mu2 + mu3, mu2 > mu3 >= 0");
  for (double p : probs)
    if (!(p > 0.0)) throw std::invalid_argument("intensity probabilities must be positive");

  const double t0 = tau(0, mu, probs);
  const double t1 = tau(1, mu, probs);

  DecoyBounds b;
  const Deviated nX = deviate(obs.n_X, obs.total_X(), mu, probs, eps_sec);
  const Deviated nZ = deviate(obs.n_Z, obs.total_Z(), mu, probs, eps_sec);
  const Deviated mZ = deviate(obs.m_Z, obs.errors_Z(), mu, probs, eps_sec);

  b.s_X0 = vacuum_bound(nX, mu, t0);
  b.s_X1 = single_photon_bound(nX, mu, t0, t1, b.s_X0);
  const double s_Z0 = vacuum_bound(nZ, mu, t0);
  b.s_Z1 = single_photon_bound(nZ, mu, t0, t1, s_Z0);
  b.v_Z1 = std::max(0.0, t1 * (mZ.plus[1] - mZ.minus[2]) / (mu[1] - mu[2]));

  if (b.s_X1 > 0.0 && b.s_Z1 > 0.0) {
    const double ratio = b.v_Z1 / b.s_Z1;
    b.phi_X = ratio > 0.0 && ratio < 0.5
                  ? ratio + phase_error_correction(eps_sec, ratio, b.s_Z1, b.s_X1)
                  : ratio > 0.0 ? ratio : 0.0;
  }
  return b;
}

}  // namespace satqkd
