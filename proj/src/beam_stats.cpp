#include "satqkd/beam_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satqkd {

namespace {

void check_inputs(const LinkScenario& s, const SlantGeometry& g) {
  if (!(g.L > 0.0)) throw std::invalid_argument("link length must be positive");
  if (!(g.h > 0.0) || g.h > g.L)
    throw std::invalid_argument("atmospheric path must be in (0, L]");
  if (!(s.waist > 0.0)) throw std::invalid_argument("beam waist must be positive");
  if (!(s.wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
}

// 1 + Omega^2 (1 - L/F)^2; exactly 1 for a beam focused on the receiver.
double focus_factor(const LinkScenario& s, double fresnel, double L) {
  if (!s.focal_length) return 1.0;
  const double mismatch = 1.0 - L / *s.focal_length;
  return 1.0 + fresnel * fresnel * mismatch * mismatch;
}

Mat2 correlated(double scale) {
  // (2 delta_ij - 0.8)
  return Mat2{{{1.2 * scale, -0.8 * scale}, {-0.8 * scale, 1.2 * scale}}};
}

}  // namespace

double wavenumber(double wavelength) { return 2.0 * kPi / wavelength; }

double rytov_variance(double cn2, double k, double L) {
  return 1.23 * cn2 * std::pow(k, 7.0 / 6.0) * std::pow(L, 11.0 / 6.0);
}

double fresnel_number(double k, double waist, double L) {
  return k * waist * waist / (2.0 * L);
}

BeamMoments moments_uplink(const LinkScenario& s, const WeatherCondition& w,
                           const SlantGeometry& g) {
  check_inputs(s, g);
  if (s.direction != LinkDirection::Uplink)
    throw std::invalid_argument("moments_uplink called on a down-link scenario");

  const double k = wavenumber(s.wavelength);
  const double W0sq = s.waist * s.waist;
  const double ratio = g.h / g.L;

  BeamMoments m;
  m.rytov = rytov_variance(w.cn2, k, g.L);
  m.fresnel = fresnel_number(k, s.waist, g.L);
  const double om = m.fresnel;

  const double scatter = kPi / 8.0 * g.L * w.n0 * W0sq * ratio;
  const double turbulence = 2.6 * m.rytov * std::pow(om, 5.0 / 6.0) * ratio;

  m.var_x0 = 0.419 * m.rytov * W0sq * std::pow(om, -7.0 / 6.0) * ratio;
  m.mean_W2 = W0sq / (om * om) * (focus_factor(s, om, g.L) + scatter + turbulence);
  m.cov_W2 = correlated(W0sq * W0sq / std::pow(om, 19.0 / 6.0) * (1.0 + scatter) *
                        m.rytov * ratio);
  return m;
}

BeamMoments moments_downlink(const LinkScenario& s, const WeatherCondition& w,
                             const SlantGeometry& g) {
  check_inputs(s, g);
  if (s.direction != LinkDirection::Downlink)
    throw std::invalid_argument("moments_downlink called on an up-link scenario");

  const double k = wavenumber(s.wavelength);
  const double W0sq = s.waist * s.waist;
  const double ratio = g.h / g.L;
  const double ratio3 = ratio * ratio * ratio;
  const double ratio83 = std::pow(ratio, 8.0 / 3.0);

  BeamMoments m;
  m.rytov = rytov_variance(w.cn2, k, g.L);
  m.fresnel = fresnel_number(k, s.waist, g.L);
  const double om = m.fresnel;

  const double scatter = kPi / 24.0 * g.L * w.n0 * W0sq * ratio3;
  const double turbulence = 1.6 * m.rytov * std::pow(om, 5.0 / 6.0) * ratio83;

  // Pointing jitter dominates the centroid: rms displacement alpha * L.
  const double wander = s.pointing_error * g.L;
  m.var_x0 = wander * wander;
  m.mean_W2 = W0sq / (om * om) * (focus_factor(s, om, g.L) + scatter + turbulence);
  m.cov_W2 = correlated(3.0 / 8.0 * W0sq * W0sq / std::pow(om, 19.0 / 6.0) *
                        (1.0 + scatter) * m.rytov * ratio83);
  return m;
}

BeamMoments beam_moments(const LinkScenario& s, const WeatherCondition& w,
                         const SlantGeometry& g) {
  return s.direction == LinkDirection::Uplink ? moments_uplink(s, w, g)
                                              : moments_downlink(s, w, g);
}

LogNormalParams lognormal_match(double mean_W2, const Mat2& cov_W2, double W0) {
  if (!(mean_W2 > 0.0)) throw std::invalid_argument("mean W^2 must be positive");
  if (!(W0 > 0.0)) throw std::invalid_argument("beam waist must be positive");

  const double W0sq = W0 * W0;
  const double m = mean_W2 / W0sq;
  const double msq = mean_W2 * mean_W2;

  LogNormalParams p;
  for (int i = 0; i < 2; ++i) {
    const double var = cov_W2[i][i] / (W0sq * W0sq);
    p.mean[i] = std::log(m * m / std::sqrt(var + m * m));
    for (int j = 0; j < 2; ++j) {
      const double arg = 1.0 + cov_W2[i][j] / msq;
      if (!(arg > 0.0))
        throw std::invalid_argument("W^2 covariance too negative for log-normal matching");
      p.cov[i][j] = std::log(arg);
    }
  }
  const PsdRepair r = floor_eigenvalues(p.cov);
  p.psd = r.floored == 0.0;
  return p;
}

PsdRepair floor_eigenvalues(const Mat2& m) {
  const double a = m[0][0];
  const double b = 0.5 * (m[0][1] + m[1][0]);
  const double d = m[1][1];
  const double half_tr = 0.5 * (a + d);
  const double disc = std::hypot(0.5 * (a - d), b);
  const double l1 = half_tr + disc;
  const double l2 = half_tr - disc;

  PsdRepair out;
  out.matrix = Mat2{{{a, b}, {b, d}}};
  if (l2 >= 0.0) return out;

  out.floored = -l2;
  // Eigenvector of l1: (b, l1 - a) or (l1 - d, b), whichever is better
  // conditioned.
  double vx = b, vy = l1 - a;
  if (std::hypot(vx, vy) < std::hypot(l1 - d, b)) {
    vx = l1 - d;
    vy = b;
  }
  const double norm = std::hypot(vx, vy);
  const double l1p = std::max(l1, 0.0);
  if (norm == 0.0) {
    // a == d and b == 0: isotropic, both eigenvalues equal l2 < 0.
    out.matrix = Mat2{};
    return out;
  }
  vx /= norm;
  vy /= norm;
  out.matrix = Mat2{{{l1p * vx * vx, l1p * vx * vy}, {l1p * vx * vy, l1p * vy * vy}}};
  return out;
}

Mat2 cholesky_psd(const Mat2& m) {
  Mat2 l{};
  const double a = std::max(m[0][0], 0.0);
  l[0][0] = std::sqrt(a);
  if (l[0][0] > 0.0) {
    l[1][0] = m[1][0] / l[0][0];
    l[1][1] = std::sqrt(std::max(m[1][1] - l[1][0] * l[1][0], 0.0));
  } else {
    l[1][1] = std::sqrt(std::max(m[1][1], 0.0));
  }
  return l;
}

EllipticBeamDistribution build_distribution(const BeamMoments& m, double W0) {
  if (m.var_x0 < 0.0) throw std::invalid_argument("centroid variance must be >= 0");
  const LogNormalParams ln = lognormal_match(m.mean_W2, m.cov_W2, W0);

  const PsdRepair repaired = floor_eigenvalues(ln.cov);
  const double scale = std::max({std::abs(ln.cov[0][0]), std::abs(ln.cov[1][1]),
                                 std::abs(ln.cov[0][1])});
  const double relative = scale > 0.0 ? repaired.floored / scale : 0.0;
  if (relative > kPsdRepairLimit)
    throw std::domain_error("log-normal covariance is not positive semidefinite");

  EllipticBeamDistribution d;
  d.waist = W0;
  d.psd_floor = relative;
  d.mean = {0.0, 0.0, ln.mean[0], ln.mean[1]};
  d.cov[0][0] = d.cov[1][1] = m.var_x0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.cov[2 + i][2 + j] = repaired.matrix[i][j];

  const Mat2 l = cholesky_psd(repaired.matrix);
  d.chol[0][0] = d.chol[1][1] = std::sqrt(m.var_x0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.chol[2 + i][2 + j] = l[i][j];
  return d;
}

BeamSample realize(const EllipticBeamDistribution& d,
                   const std::array<double, 4>& normals, double uniform) {
  std::array<double, 4> z = d.mean;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) z[i] += d.chol[i][j] * normals[j];

  BeamSample s;
  s.x0 = z[0];
  s.y0 = z[1];
  s.W1 = d.waist * std::exp(0.5 * z[2]);
  s.W2 = d.waist * std::exp(0.5 * z[3]);
  s.phi0 = uniform * (0.5 * kPi);
  return s;
}

}  // namespace satqkd
