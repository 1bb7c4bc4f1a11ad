#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satqkd/constants.hpp"

namespace satqkd {

enum class LinkDirection { Downlink, Uplink };

std::string_view to_string(LinkDirection d);
LinkDirection parse_direction(std::string_view s);

// Geometry, optics and detector of one ground/satellite link.
//
// focal_length: std::nullopt means the beam is focused on the receiver
// (F = L). Any other value, including +inf for a collimated beam, is
// accepted but only the diffraction term of the beam moments accounts
// for it.
struct LinkScenario {
  LinkDirection direction = LinkDirection::Downlink;
  double sat_altitude = 500e3;     // m
  double atmo_thickness = 20e3;    // m
  double zenith_angle = 0.0;       // rad
  double waist = 0.15;             // W0, m
  double receiver_radius = 0.5;    // a, m
  double wavelength = 785e-9;      // m
  std::optional<double> focal_length;
  double pointing_error = 1.2e-6;  // rad
  double detector_efficiency = 0.5;
  double optics_transmittance = 0.8;
};

struct WeatherCondition {
  double cn2 = 0.0;   // m^(-2/3)
  double n0 = 0.0;    // m^-3
  double beta = 0.0;  // extinction exponent
  bool daytime = false;
  std::string label;
};

struct SlantGeometry {
  double L = 0.0;        // total sender-receiver distance, m
  double h = 0.0;        // distance travelled inside the atmosphere, m
  double chi_ext = 1.0;  // extinction transmittance
};

// Throws std::invalid_argument on any violated invariant.
void validate(const LinkScenario& s);
void validate(const WeatherCondition& w);

// Chord length from a ground point to a shell of height `sat_altitude`
// (L) and `atmo_thickness` (h) at the given zenith angle, spherical Earth.
SlantGeometry slant_path(double zenith, double sat_altitude,
                         double atmo_thickness,
                         double earth_radius = kEarthRadius);

// exp(-beta sec(zenith))
double extinction(double zenith, double beta);

// Full geometry for a scenario: slant lengths plus extinction.
SlantGeometry resolve_geometry(const LinkScenario& s, const WeatherCondition& w);

// Path-averaged C_n^2 of the Hufnagel-Valley profile over a slab of
// thickness `atmo_thickness`:  (1/h) int_0^inf C_n^2(z) dz.
double cn2_from_hufnagel_valley(double ground_strength, double wind_speed,
                                double atmo_thickness);

// Rescaling factor omega of the double-exponential humidity profile
// (scale heights in km, break at 5 km, integrated to 10 km).
double humidity_rescale_factor(double scale_height1_km, double scale_height2_km,
                               double atmo_thickness);

// omega * n0_ground.
double n0_rescale(double n0_ground, double scale_height1_km,
                  double scale_height2_km, double atmo_thickness);

// Built-in weather presets "night1".."night3", "day1".."day3".
// Values are the slab-averaged inputs of the link model
//
//                 C_n^2 [m^-2/3]   n0 [m^-3]
//   night1        1.12e-16         0.61
//   night2        5.50e-16         3.00
//   night3        1.10e-15         6.10
//   day1          1.64e-16         0.01
//   day2          8.00e-16         0.05
//   day3          1.60e-15         0.10
//
// with beta = 0.7 for every condition (extinction kept fixed across
// weather so that only beam effects change).
WeatherCondition weather_preset(std::string_view name);
std::vector<std::string> weather_preset_names();

}  // namespace satqkd
