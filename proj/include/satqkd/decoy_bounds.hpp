#pragma once

#include <array>

namespace satqkd {

// Detections n and errors m per intensity (signal, decoy, vacuum) in the
// X (key) and Z (test) bases.
struct DecoyObservations {
  std::array<double, 3> n_X{}, n_Z{};
  std::array<double, 3> m_X{}, m_Z{};

  double total_X() const { return n_X[0] + n_X[1] + n_X[2]; }
  double total_Z() const { return n_Z[0] + n_Z[1] + n_Z[2]; }
  double errors_X() const { return m_X[0] + m_X[1] + m_X[2]; }
  double errors_Z() const { return m_Z[0] + m_Z[1] + m_Z[2]; }
};

struct DecoyBounds {
  double s_X0 = 0.0;   // vacuum detections in X, lower bound
  double s_X1 = 0.0;   // single-photon detections in X, lower bound
  double s_Z1 = 0.0;   // single-photon detections in Z, lower bound
  double v_Z1 = 0.0;   // single-photon errors in Z, upper bound
  double phi_X = 0.5;  // single-photon phase error rate in X, upper bound
};

// Two-decoy finite-key estimates with Hoeffding deviations, following
// Lim, Curty, Walenta, Xu, Zbinden, Phys. Rev. A 89, 022307 (2014),
// Eqs. (2)-(5) and the Serfling-type correction gamma for phi_X.
// Requires mu[0] > mu[1] + mu[2], mu[1] > mu[2] >= 0.  Every failure
// probability is eps_sec / 21.
DecoyBounds decoy_bounds(const DecoyObservations& obs, const std::array<double, 3>& mu,
                         const std::array<double, 3>& probs, double eps_sec);

// sqrt((c+d)(1-b)b / (c d ln 2) * log2((c+d) / (c d (1-b) b) * 21^2 / a^2))
double phase_error_correction(double a, double b, double c, double d);

}  // namespace satqkd
