#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "satqkd/constants.hpp"

namespace satqkd {

// Philox4x32-10 (Salmon et al., SC'11).  Stateless: the output is a pure
// function of (counter, key), so any sample index can be drawn on any
// thread without coordination.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    return Counter{static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
                   static_cast<std::uint32_t>(p0)};
  }
};

// Uniform on (0, 1): 52 random bits offset by half a step, so both ends
// are excluded and the logarithm in Box-Muller is always finite.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 20) ^ (lo >> 12);
  return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

struct SampleVariates {
  std::array<double, 4> normals{};
  double uniform = 0.0;  // [0, 1)
};

// Variates for sample `index` of stream `seed`.  Blocks 0 and 1 feed
// Box-Muller for the four normals, block 2 the uniform.
inline SampleVariates sample_variates(std::uint64_t seed, std::uint64_t index) {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  const auto lo = static_cast<std::uint32_t>(index);
  const auto hi = static_cast<std::uint32_t>(index >> 32);

  SampleVariates v;
  for (std::uint32_t block = 0; block < 2; ++block) {
    const auto r = Philox4x32::generate({lo, hi, block, 0u}, key);
    const double u1 = to_open_unit(r[0], r[1]);
    const double u2 = to_open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    v.normals[2 * block] = radius * std::cos(2.0 * kPi * u2);
    v.normals[2 * block + 1] = radius * std::sin(2.0 * kPi * u2);
  }
  const auto r = Philox4x32::generate({lo, hi, 2u, 0u}, key);
  v.uniform = to_open_unit(r[0], r[1]) - 0x1p-53;  // k / 2^52, exact
  return v;
}

}  // namespace satqkd
