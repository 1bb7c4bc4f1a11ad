#pragma once

#include <optional>
#include <string_view>
#include <vector>
#include <string>

#include "satqkd/link_geometry.hpp"

namespace satqkd {

enum class UplinkNoiseModel { MoonEarthshine, DaylightEarthshine };

// Stray-light parameters for one receiver.
struct NoiseEnvironment {
  double H_b = 1.5e-6;       // sky brightness, W m^-2 sr^-1 nm^-1 (down-link)
  double H_sun = 4.61e18;    // solar irradiance, photons s^-1 nm^-1 m^-2
  double A_E = 0.3;          // Earth albedo
  double A_M = 0.136;        // Moon albedo
  double R_M = 1.737e6;      // m
  double d_EM = 3.6e8;       // m
  double omega_fov = 1e-8;   // sr
  double B_f = 1.0;          // nm
  double delta_t = 1e-9;     // s
  double Q0 = 0.02;
  UplinkNoiseModel uplink_model = UplinkNoiseModel::MoonEarthshine;
  std::string label;
};

// Throws std::invalid_argument on negative entries or Q0 outside [0, 0.5].
void validate(const NoiseEnvironment& env);

// "night-fullmoon" or "day-clear" for the given link direction.
NoiseEnvironment noise_preset(std::string_view name, LinkDirection direction);
std::vector<std::string> noise_preset_names();

double photon_energy(double wavelength);

// (H_b / h nu) Omega pi a^2 B_f dt
double stray_photons_downlink(const NoiseEnvironment& env, double receiver_radius,
                              double wavelength);

// A_E A_M R_M^2 a^2 Omega / d_EM^2 B_f dt H_sun.  No pi, unlike the
// down-link expression.
double stray_photons_uplink_night(const NoiseEnvironment& env, double receiver_radius);

// Sunlit Earth seen directly by the satellite: A_E H_sun Omega a^2 B_f dt.
double stray_photons_uplink_day(const NoiseEnvironment& env, double receiver_radius);

// Dispatches on direction and env.uplink_model.
double stray_photons(const NoiseEnvironment& env, const LinkScenario& s);

// Q0 + N_noise / (2 (N_noise + N_sig)); nullopt when both are zero.
std::optional<double> qber(double n_noise, double n_sig, double Q0);

// Mean detected signal photons: eta * eta_det * T_opt * mu.
double system_efficiency(const LinkScenario& s, double eta);

// Single-photon source: eta_sys.  WCP of intensity mu: 1 - exp(-mu eta_sys).
double signal_single_photon(double eta_sys);
double signal_wcp(double mu, double eta_sys);

// Click probability per pulse, signal or background.
double click_probability_single_photon(double eta_sys, double n_noise);
double click_probability_wcp(double mu, double eta_sys, double n_noise);

}  // namespace satqkd
