#pragma once

#include <array>

#include "satqkd/link_geometry.hpp"

namespace satqkd {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// First and second moments of the elliptic-beam parameters at the receiver.
struct BeamMoments {
  double var_x0 = 0.0;  // <x0^2> = <y0^2>, m^2
  double mean_W2 = 0.0; // <W_i^2>, m^2
  Mat2 cov_W2{};        // <dW_i^2 dW_j^2>, m^4
  double rytov = 0.0;   // sigma_R^2
  double fresnel = 0.0; // Omega = k W0^2 / (2L)
};

double wavenumber(double wavelength);
double rytov_variance(double cn2, double wavenumber, double L);
double fresnel_number(double wavenumber, double waist, double L);

// Moments from the closed forms of the non-uniform (slab) link.  The
// direction of `s` must match the function.  Throws std::invalid_argument
// for non-positive L, W0 or wavelength.
BeamMoments moments_uplink(const LinkScenario& s, const WeatherCondition& w,
                           const SlantGeometry& g);
BeamMoments moments_downlink(const LinkScenario& s, const WeatherCondition& w,
                             const SlantGeometry& g);
BeamMoments beam_moments(const LinkScenario& s, const WeatherCondition& w,
                         const SlantGeometry& g);

// Gaussian law of Theta_i = ln(W_i^2 / W0^2) matching the mean and
// covariance of W_i^2.
struct LogNormalParams {
  std::array<double, 2> mean{};
  Mat2 cov{};
  bool psd = true;  // false when cov had a negative eigenvalue
};

LogNormalParams lognormal_match(double mean_W2, const Mat2& cov_W2, double W0);

struct PsdRepair {
  Mat2 matrix{};
  double floored = 0.0;  // magnitude of the most negative eigenvalue removed
};

// Symmetric eigen-decomposition with negative eigenvalues set to zero.
PsdRepair floor_eigenvalues(const Mat2& m);

// Lower Cholesky factor of a positive-semidefinite 2x2 matrix.
Mat2 cholesky_psd(const Mat2& m);

// Joint law of (x0, y0, Theta_1, Theta_2) plus phi0 ~ U[0, pi/2].
struct EllipticBeamDistribution {
  std::array<double, 4> mean{};
  Mat4 cov{};
  Mat4 chol{};  // lower factor of cov
  double waist = 0.0;
  double psd_floor = 0.0;  // relative eigenvalue floor applied to cov_Theta
};

// Relative floor magnitude above which a negative eigenvalue is treated as
// structurally invalid input rather than rounding.
inline constexpr double kPsdRepairLimit = 1e-9;

// Throws std::domain_error when the log covariance is structurally
// non-PSD (relative negative eigenvalue above kPsdRepairLimit).
EllipticBeamDistribution build_distribution(const BeamMoments& m, double W0);

struct BeamSample {
  double x0 = 0.0, y0 = 0.0;  // m
  double W1 = 0.0, W2 = 0.0;  // m
  double phi0 = 0.0;          // rad
};

// Maps four independent standard normals and one U[0,1) variate to a
// beam realization.
BeamSample realize(const EllipticBeamDistribution& d,
                   const std::array<double, 4>& normals, double uniform);

}  // namespace satqkd
