#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "satqkd/rng.hpp"

using namespace satqkd;

TEST_CASE("Philox4x32-10 known answers") {
  // Reference vectors distributed with the Random123 library.
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                             K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  static_assert(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0})[0] == 0x6627e8d5);
}

TEST_CASE("open unit interval") {
  CHECK(to_open_unit(0, 0) > 0.0);
  CHECK(to_open_unit(0xffffffff, 0xffffffff) < 1.0);
  CHECK(std::isfinite(std::log(to_open_unit(0, 0))));
  CHECK(to_open_unit(0, 0) == 0x1p-53);
  CHECK(1.0 - to_open_unit(0xffffffff, 0xffffffff) == 0x1p-53);
}

TEST_CASE("per-sample variates are pure functions of seed and index") {
  const auto a = sample_variates(42, 1000);
  const auto b = sample_variates(42, 1000);
  CHECK(a.normals == b.normals);
  CHECK(a.uniform == b.uniform);
  CHECK(sample_variates(43, 1000).normals != a.normals);
  CHECK(sample_variates(42, 1001).normals != a.normals);
  CHECK(sample_variates(42, 1000 + (std::uint64_t{1} << 32)).normals != a.normals);
  CHECK(sample_variates(std::uint64_t{42} + (std::uint64_t{1} << 32), 1000).normals != a.normals);
}

TEST_CASE("variate moments") {
  constexpr int n = 200000;
  double s[4] = {}, s2[4] = {}, cross = 0, u = 0, u2 = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_variates(7, i);
    for (int k = 0; k < 4; ++k) {
      s[k] += v.normals[k];
      s2[k] += v.normals[k] * v.normals[k];
    }
    cross += v.normals[0] * v.normals[3];
    u += v.uniform;
    u2 += v.uniform * v.uniform;
  }
  // 5 sigma bands.
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(s[k] / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(s2[k] / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  }
  CHECK(std::abs(cross / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(u / n - 0.5) < 5.0 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(u2 / n - 1.0 / 3) < 5.0 * std::sqrt(4.0 / 45 / n));
}
