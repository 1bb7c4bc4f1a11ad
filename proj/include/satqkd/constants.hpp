#pragma once

#include <numbers>

namespace satqkd {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPlanck = 6.62607015e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kEarthRadius = 6371e3;         // m

// Largest zenith angle for which the uniform-slab link model is used.
inline constexpr double kMaxZenith = 80.0 * kPi / 180.0;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace satqkd
