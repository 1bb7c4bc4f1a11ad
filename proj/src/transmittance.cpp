#include "satqkd/transmittance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "satqkd/quadrature.hpp"

namespace satqkd {

namespace {

// Quadratic form of the elliptic Gaussian in the frame where the centroid
// sits at (rho0, 0):  exp(-2 (A1 u^2 + A2 v^2 + A3 u v)),
// u = rho cos(theta) - rho0, v = rho sin(theta).
struct BeamFrame {
  double rho0 = 0.0;
  double A1 = 0.0, A2 = 0.0, A3 = 0.0;
  double prefactor = 0.0;  // 2 chi / (pi W1 W2)
  double w_max = 0.0;
};

BeamFrame make_frame(const BeamSample& b, const ApertureSpec& ap) {
  BeamFrame f;
  f.rho0 = std::hypot(b.x0, b.y0);
  const double theta0 = f.rho0 > 0.0 ? std::atan2(b.y0, b.x0) : 0.0;
  const double psi = b.phi0 - theta0;
  const double c = std::cos(psi), s = std::sin(psi);
  const double inv1 = 1.0 / (b.W1 * b.W1), inv2 = 1.0 / (b.W2 * b.W2);
  f.A1 = c * c * inv1 + s * s * inv2;
  f.A2 = s * s * inv1 + c * c * inv2;
  f.A3 = (inv1 - inv2) * std::sin(2.0 * psi);
  f.prefactor = 2.0 * ap.chi_ext / (kPi * b.W1 * b.W2);
  f.w_max = std::max(b.W1, b.W2);
  return f;
}

struct Interval {
  double lo, hi;
};

// Breakpoints that isolate the beam spot (radius 4 W_max around the
// centroid) in rho and theta.
struct PanelLayout {
  std::vector<Interval> rho;
  std::vector<Interval> theta;
};

PanelLayout make_layout(const BeamFrame& f, double a) {
  const double spot = 4.0 * f.w_max;
  std::vector<double> rb{0.0};
  for (double r : {f.rho0 - spot, f.rho0 + spot})
    if (r > 0.0 && r < a) rb.push_back(r);
  rb.push_back(a);

  std::vector<double> tb{-kPi};
  if (f.rho0 > spot) {
    const double half_width = std::asin(spot / f.rho0);
    tb.push_back(-half_width);
    tb.push_back(half_width);
  }
  tb.push_back(kPi);

  PanelLayout p;
  for (std::size_t i = 0; i + 1 < rb.size(); ++i) p.rho.push_back({rb[i], rb[i + 1]});
  for (std::size_t i = 0; i + 1 < tb.size(); ++i) p.theta.push_back({tb[i], tb[i + 1]});
  return p;
}

constexpr int kMaxNodes = 1024;

// Tensor GL over one (rho, theta) rectangle of int exp(...) rho drho dtheta.
double integrate_cell(const BeamFrame& f, Interval r, Interval t, int nr, int nt) {
  const GaussLegendreRule& gr = gauss_legendre(nr);
  const GaussLegendreRule& gt = gauss_legendre(nt);
  std::array<double, kMaxNodes> cs, sn, wt;
  const double tm = 0.5 * (t.lo + t.hi), th = 0.5 * (t.hi - t.lo);
  for (int j = 0; j < nt; ++j) {
    const double theta = tm + th * gt.nodes[j];
    cs[j] = std::cos(theta);
    sn[j] = std::sin(theta);
    wt[j] = gt.weights[j];
  }
  const double rm = 0.5 * (r.lo + r.hi), rh = 0.5 * (r.hi - r.lo);
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double rho = rm + rh * gr.nodes[i];
    double row = 0.0;
    for (int j = 0; j < nt; ++j) {
      const double u = rho * cs[j] - f.rho0;
      const double v = rho * sn[j];
      row += wt[j] * std::exp(-2.0 * (f.A1 * u * u + f.A2 * v * v + f.A3 * u * v));
    }
    total += gr.weights[i] * rho * row;
  }
  return total * rh * th;
}

double integrate_layout(const BeamFrame& f, const PanelLayout& p, int nr, int nt) {
  double total = 0.0;
  for (const auto& r : p.rho)
    for (const auto& t : p.theta) total += integrate_cell(f, r, t, nr, nt);
  return total;
}

struct Cell {
  Interval r, t;
  double value, error;
  bool operator<(const Cell& o) const { return error < o.error; }
};

Cell evaluate_cell(const BeamFrame& f, Interval r, Interval t) {
  const double hi = integrate_cell(f, r, t, 16, 16);
  const double lo = integrate_cell(f, r, t, 8, 8);
  return Cell{r, t, hi, std::abs(hi - lo)};
}

TransmittanceResult adaptive(const BeamFrame& f, const PanelLayout& layout,
                             const QuadratureOptions& opts) {
  std::priority_queue<Cell> queue;
  double value = 0.0, error = 0.0;
  for (const auto& r : layout.rho)
    for (const auto& t : layout.theta) {
      Cell c = evaluate_cell(f, r, t);
      value += c.value;
      error += c.error;
      queue.push(c);
    }

  int cells = static_cast<int>(queue.size());
  while (f.prefactor * error > accepted_error(opts, f.prefactor * value) &&
         cells + 3 <= opts.max_cells) {
    const Cell worst = queue.top();
    queue.pop();
    value -= worst.value;
    error -= worst.error;
    const double rmid = 0.5 * (worst.r.lo + worst.r.hi);
    const double tmid = 0.5 * (worst.t.lo + worst.t.hi);
    for (Interval r : {Interval{worst.r.lo, rmid}, Interval{rmid, worst.r.hi}})
      for (Interval t : {Interval{worst.t.lo, tmid}, Interval{tmid, worst.t.hi}}) {
        Cell c = evaluate_cell(f, r, t);
        value += c.value;
        error += c.error;
        queue.push(c);
      }
    cells += 3;
  }
  // Re-sum to drop the drift accumulated by the running updates.
  value = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }

  TransmittanceResult res;
  res.eta = std::clamp(f.prefactor * value, 0.0, 1.0);
  res.error = f.prefactor * error;
  res.cells = cells;
  res.adaptive = true;
  return res;
}

}  // namespace

double accepted_error(const QuadratureOptions& opts, double eta) {
  return std::max(opts.abs_tol, opts.rel_tol * std::abs(eta));
}

TransmittanceResult integrate_transmittance(const BeamSample& beam,
                                            const ApertureSpec& aperture,
                                            const QuadratureOptions& opts) {
  if (!(beam.W1 > 0.0) || !(beam.W2 > 0.0))
    throw std::invalid_argument("beam semi-axes must be positive");
  if (!(aperture.radius > 0.0))
    throw std::invalid_argument("aperture radius must be positive");
  if (opts.max_order * 2 > kMaxNodes || opts.min_order < 2)
    throw std::invalid_argument("quadrature order out of range");

  const BeamFrame f = make_frame(beam, aperture);
  const double a = aperture.radius;

  TransmittanceResult res;
  // Beyond this distance the captured power is below exp(-200).
  if (f.rho0 > 10.0 * f.w_max + a) {
    res.short_circuit = true;
    return res;
  }

  const PanelLayout layout = make_layout(f, a);
  const double aspect = std::max(beam.W1, beam.W2) / std::min(beam.W1, beam.W2);
  if (aspect > 20.0 || f.rho0 > 5.0 * a) return adaptive(f, layout, opts);

  double previous = integrate_layout(f, layout, opts.min_order, 2 * opts.min_order);
  for (int n = 2 * opts.min_order; n <= opts.max_order; n *= 2) {
    const double current = integrate_layout(f, layout, n, 2 * n);
    const double eta = f.prefactor * current;
    const double err = f.prefactor * std::abs(current - previous);
    if (err <= accepted_error(opts, eta)) {
      res.eta = std::clamp(eta, 0.0, 1.0);
      res.error = err;
      res.radial_nodes = n;
      return res;
    }
    previous = current;
  }
  return adaptive(f, layout, opts);
}

double aperture_transmittance(const BeamSample& beam, const ApertureSpec& aperture,
                              const QuadratureOptions& opts) {
  const TransmittanceResult r = integrate_transmittance(beam, aperture, opts);
  if (r.error > accepted_error(opts, r.eta))
    throw IntegrationError("transmittance quadrature did not reach tolerance");
  return r.eta;
}

double analytic_centered(double W, double a, double chi) {
  if (!(W > 0.0) || !(a >= 0.0)) throw std::invalid_argument("W must be > 0, a >= 0");
  return -chi * std::expm1(-2.0 * a * a / (W * W));
}

}  // namespace satqkd
