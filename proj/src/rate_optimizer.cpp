#include <algorithm>
#include <cmath>
#include <functional>

#include "satqkd/qkd_rates.hpp"

namespace satqkd {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section maximization of f on [lo, hi]; returns the best abscissa
// seen, including the endpoints.
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
  double best_x = lo, best_f = f(lo);
  if (const double fh = f(hi); fh > best_f) best_x = hi, best_f = fh;
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 > best_f) best_x = x1, best_f = f1;
    if (f2 > best_f) best_x = x2, best_f = f2;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 > best_f) best_x = x1, best_f = f1;
  if (f2 > best_f) best_x = x2;
  return best_x;
}

// Coarse scan followed by golden refinement around the best scan point.
double scan_then_refine(const std::function<double(double)>& f, double lo, double hi) {
  if (!(hi > lo)) return lo;
  constexpr int kScan = 9;
  const double step = (hi - lo) / (kScan - 1);
  int best = 0;
  double best_f = -1.0;
  for (int i = 0; i < kScan; ++i) {
    const double v = f(lo + i * step);
    if (v > best_f) best = i, best_f = v;
  }
  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, kScan - 1) * step;
  const double x = golden_max(f, a, b, 25);
  return f(x) >= best_f ? x : lo + best * step;
}

OptimizedPoint optimize_sp(double eta, const Channel& ch, const LinkScenario& s,
                           const ProtocolParams& p) {
  OptimizedPoint best{rate_at(eta, ch, s, p), p};
  auto consider = [&](const ProtocolParams& c) {
    const RatePoint r = rate_at(eta, ch, s, c);
    if (r.rate > best.point.rate) best = {r, c};
    return r.rate;
  };

  const auto Q = qber(ch.n_noise, system_efficiency(s, eta), ch.Q0);
  if (!Q) return best;
  const double n = p.block_n;
  for (double kf : {0.1, 0.25, 0.5, 1.0})
    for (double dq : {0.0, 0.0025, 0.005, 0.01}) {
      ProtocolParams c = p;
      c.pe_bits = kf * n;
      c.Q_tol = std::min(*Q + dq, 0.5);
      consider(c);
    }

  // Continuous axis: log k around the best grid point.
  const ProtocolParams grid_best = best.params;
  const double lk = std::log(grid_best.k());
  golden_max(
      [&](double x) {
        ProtocolParams c = grid_best;
        c.pe_bits = std::max(1.0, std::exp(x));
        return consider(c);
      },
      lk - std::log(2.5), lk + std::log(2.5), 30);
  return best;
}

OptimizedPoint optimize_wcp(double eta, const Channel& ch, const LinkScenario& s,
                            const ProtocolParams& p) {
  OptimizedPoint best{rate_at(eta, ch, s, p), p};
  auto evaluate = [&](const ProtocolParams& c) {
    try {
      validate(c);
    } catch (const std::invalid_argument&) {
      return -1.0;
    }
    const RatePoint r = rate_at(eta, ch, s, c);
    if (r.rate > best.point.rate) best = {r, c};
    return r.rate;
  };

  constexpr double kGap = 1e-3;
  constexpr double kMinProb = 0.01;
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int coord = 0; coord < 5; ++coord) {
      ProtocolParams base = best.params;
      auto& mu = base.intensities;
      auto& pr = base.intensity_probs;
      double lo = 0.0, hi = 0.0;
      std::function<void(ProtocolParams&, double)> set;
      switch (coord) {
        case 0:  // signal intensity
          lo = mu[1] + mu[2] + kGap;
          hi = 1.0;
          set = [](ProtocolParams& c, double x) { c.intensities[0] = x; };
          break;
        case 1:  // decoy intensity
          lo = mu[2] + kGap;
          hi = mu[0] - mu[2] - kGap;
          set = [](ProtocolParams& c, double x) { c.intensities[1] = x; };
          break;
        case 2:  // signal probability, vacuum absorbs the change
          lo = 0.05;
          hi = 1.0 - pr[1] - kMinProb;
          set = [](ProtocolParams& c, double x) {
            c.intensity_probs[0] = x;
            c.intensity_probs[2] = 1.0 - x - c.intensity_probs[1];
          };
          break;
        case 3:  // decoy probability, vacuum absorbs the change
          lo = kMinProb;
          hi = 1.0 - pr[0] - kMinProb;
          set = [](ProtocolParams& c, double x) {
            c.intensity_probs[1] = x;
            c.intensity_probs[2] = 1.0 - c.intensity_probs[0] - x;
          };
          break;
        default:  // basis bias
          lo = 0.5;
          hi = 0.99;
          set = [](ProtocolParams& c, double x) { c.basis_prob = x; };
          break;
      }
      scan_then_refine(
          [&](double x) {
            ProtocolParams c = base;
            set(c, x);
            return evaluate(c);
          },
          lo, hi);
    }
  }
  return best;
}

}  // namespace

OptimizedPoint optimize_point(double eta, const Channel& ch, const LinkScenario& s,
                              const ProtocolParams& p) {
  return p.variant == Protocol::SinglePhoton ? optimize_sp(eta, ch, s, p)
                                             : optimize_wcp(eta, ch, s, p);
}

}  // namespace satqkd
