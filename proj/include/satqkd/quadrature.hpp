#pragma once

#include <vector>

namespace satqkd {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the Legendre recurrence; accurate to ~1 ulp for
// n <= 1024.
GaussLegendreRule make_gauss_legendre(int n);

// Cached rule for n = 2^k, 4 <= n <= 1024. Other n are built on demand.
// Thread-safe; references stay valid for the program lifetime.
const GaussLegendreRule& gauss_legendre(int n);

}  // namespace satqkd
