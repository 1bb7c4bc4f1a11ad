#pragma once

#include <stdexcept>

#include "satqkd/beam_stats.hpp"

namespace satqkd {

struct ApertureSpec {
  double radius = 0.5;   // a, m
  double chi_ext = 1.0;  // extinction transmittance in (0, 1]
};

struct QuadratureOptions {
  int min_order = 8;      // radial GL nodes per panel at the first level
  int max_order = 256;    // last ladder level (angular uses twice as many)
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
  int max_cells = 20000;  // adaptive fallback budget
};

struct TransmittanceResult {
  double eta = 0.0;
  double error = 0.0;   // estimated absolute error of eta
  int radial_nodes = 0; // per panel, at the accepted ladder level
  int cells = 0;        // adaptive cells used, 0 for the ladder path
  bool adaptive = false;
  bool short_circuit = false;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transmittance of one elliptic beam through a circular aperture, in polar
// coordinates centred on the aperture with the x axis through the beam
// centroid.  Tensor Gauss-Legendre panels aligned with the beam spot are
// refined by doubling the order until successive levels agree; beams with
// W1/W2 > 20 or rho0/a > 5 (and ladders that fail to converge) go to a
// cell-adaptive cubature.  Does not throw on accuracy failure; inspect
// `error`.
TransmittanceResult integrate_transmittance(const BeamSample& beam,
                                            const ApertureSpec& aperture,
                                            const QuadratureOptions& opts = {});

// Tolerance used to accept a result: max(abs_tol, rel_tol * eta).
double accepted_error(const QuadratureOptions& opts, double eta);

// Same as integrate_transmittance(...).eta; throws IntegrationError when
// the error estimate exceeds the accepted tolerance.
double aperture_transmittance(const BeamSample& beam, const ApertureSpec& aperture,
                              const QuadratureOptions& opts = {});

// Centred circular beam: chi * (1 - exp(-2 a^2 / W^2)).
double analytic_centered(double W, double a, double chi);

}  // namespace satqkd
