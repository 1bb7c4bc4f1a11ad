#include "satqkd/link_geometry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace satqkd {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Zenith angles are accepted up to kMaxZenith plus rounding of a
// degree->radian conversion.
constexpr double kZenithSlack = 1e-12;

void check_zenith(double zenith) {
  require(zenith >= 0.0 && zenith <= kMaxZenith + kZenithSlack,
          "zenith angle outside [0, 80 deg]");
}

double chord(double zenith, double shell_height, double earth_radius) {
  const double c = std::cos(zenith);
  const double rc = earth_radius * c;
  return std::sqrt(rc * rc + 2.0 * earth_radius * shell_height +
                   shell_height * shell_height) -
         rc;
}

struct Preset {
  const char* name;
  double cn2;
  double n0;
  bool daytime;
};

constexpr double kPresetBeta = 0.7;

constexpr std::array<Preset, 6> kPresets{{
    {"night1", 1.12e-16, 0.61, false},
    {"night2", 5.50e-16, 3.00, false},
    {"night3", 1.10e-15, 6.10, false},
    {"day1", 1.64e-16, 0.01, true},
    {"day2", 8.00e-16, 0.05, true},
    {"day3", 1.60e-15, 0.10, true},
}};

}  // namespace

std::string_view to_string(LinkDirection d) {
  return d == LinkDirection::Downlink ? "down" : "up";
}

LinkDirection parse_direction(std::string_view s) {
  if (s == "down" || s == "downlink") return LinkDirection::Downlink;
  if (s == "up" || s == "uplink") return LinkDirection::Uplink;
  throw std::invalid_argument("unknown link direction: " + std::string(s));
}

void validate(const LinkScenario& s) {
  check_zenith(s.zenith_angle);
  require(s.sat_altitude > 0.0, "satellite altitude must be positive");
  require(s.atmo_thickness > 0.0, "atmosphere thickness must be positive");
  require(s.atmo_thickness < s.sat_altitude,
          "atmosphere thickness must be below the satellite altitude");
  require(s.waist > 0.0, "beam waist must be positive");
  require(s.receiver_radius > 0.0, "receiver radius must be positive");
  require(s.wavelength > 0.0, "wavelength must be positive");
  require(!s.focal_length || *s.focal_length > 0.0,
          "focal length must be positive");
  require(s.pointing_error >= 0.0, "pointing error must be non-negative");
  require(is_probability(s.detector_efficiency),
          "detector efficiency must be in [0,1]");
  require(is_probability(s.optics_transmittance),
          "optics transmittance must be in [0,1]");
}

void validate(const WeatherCondition& w) {
  require(w.cn2 >= 0.0, "C_n^2 must be non-negative");
  require(w.n0 >= 0.0, "n0 must be non-negative");
  require(w.beta >= 0.0, "beta must be non-negative");
}

SlantGeometry slant_path(double zenith, double sat_altitude,
                         double atmo_thickness, double earth_radius) {
  check_zenith(zenith);
  require(sat_altitude > 0.0 && atmo_thickness > 0.0 && earth_radius > 0.0,
          "altitudes must be positive");
  SlantGeometry g;
  g.L = chord(zenith, sat_altitude, earth_radius);
  g.h = chord(zenith, atmo_thickness, earth_radius);
  g.chi_ext = 1.0;
  return g;
}

double extinction(double zenith, double beta) {
  check_zenith(zenith);
  require(beta >= 0.0, "beta must be non-negative");
  return std::exp(-beta / std::cos(zenith));
}

SlantGeometry resolve_geometry(const LinkScenario& s, const WeatherCondition& w) {
  validate(s);
  validate(w);
  SlantGeometry g = slant_path(s.zenith_angle, s.sat_altitude, s.atmo_thickness);
  g.chi_ext = extinction(s.zenith_angle, w.beta);
  return g;
}

double cn2_from_hufnagel_valley(double ground_strength, double wind_speed,
                                double atmo_thickness) {
  require(atmo_thickness > 0.0, "atmosphere thickness must be positive");
  // int_0^inf z^10 exp(-z/1000) dz = 10! * 1000^11
  constexpr double kFactorial10 = 3628800.0;
  const double wind = wind_speed / 27.0;
  const double high_layer =
      5.94e-53 * wind * wind * kFactorial10 * std::pow(1000.0, 11);
  const double tropopause = 2.7e-16 * 1500.0;
  const double boundary = ground_strength * 100.0;
  return (high_layer + tropopause + boundary) / atmo_thickness;
}

double humidity_rescale_factor(double scale_height1_km, double scale_height2_km,
                               double atmo_thickness) {
  require(scale_height1_km > 0.0 && scale_height2_km > 0.0,
          "scale heights must be positive");
  require(atmo_thickness > 0.0, "atmosphere thickness must be positive");
  constexpr double kBreak = 5.0;  // km
  constexpr double kTop = 10.0;   // km
  const double lower = scale_height1_km * -std::expm1(-kBreak / scale_height1_km);
  const double at_break = std::exp(-kBreak / scale_height1_km);
  const double upper =
      at_break * scale_height2_km * -std::expm1(-(kTop - kBreak) / scale_height2_km);
  return (lower + upper) * 1e3 / atmo_thickness;
}

double n0_rescale(double n0_ground, double scale_height1_km,
                  double scale_height2_km, double atmo_thickness) {
  return n0_ground *
         humidity_rescale_factor(scale_height1_km, scale_height2_km, atmo_thickness);
}

WeatherCondition weather_preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) {
      return WeatherCondition{p.cn2, p.n0, kPresetBeta, p.daytime, p.name};
    }
  }
  throw std::invalid_argument("unknown weather preset: " + std::string(name));
}

std::vector<std::string> weather_preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

}  // namespace satqkd
