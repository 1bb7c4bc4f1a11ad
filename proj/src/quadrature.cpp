#include "satqkd/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "satqkd/constants.hpp"

namespace satqkd {

GaussLegendreRule make_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussLegendreRule& gauss_legendre(int n) {
  static const std::array<GaussLegendreRule, 9> pow2 = [] {
    std::array<GaussLegendreRule, 9> rules;
    for (int k = 0; k < 9; ++k) rules[k] = make_gauss_legendre(4 << k);
    return rules;
  }();
  for (int k = 0; k < 9; ++k)
    if ((4 << k) == n) return pow2[k];

  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> other;
  std::lock_guard lock(mutex);
  auto it = other.find(n);
  if (it == other.end()) it = other.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace satqkd
