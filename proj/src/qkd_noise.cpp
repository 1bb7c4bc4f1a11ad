#include "satqkd/qkd_noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace satqkd {

void validate(const NoiseEnvironment& env) {
  for (double v : {env.H_b, env.H_sun, env.A_E, env.A_M, env.R_M, env.omega_fov, env.B_f,
                   env.delta_t})
    if (!(v >= 0.0)) throw std::invalid_argument("noise parameters must be non-negative");
  if (!(env.d_EM > 0.0)) throw std::invalid_argument("Earth-Moon distance must be positive");
  if (!(env.Q0 >= 0.0 && env.Q0 <= 0.5)) throw std::invalid_argument("Q0 must be in [0, 0.5]");
}

NoiseEnvironment noise_preset(std::string_view name, LinkDirection direction) {
  NoiseEnvironment env;
  env.label = std::string(name);
  if (name == "night-fullmoon") {
    env.H_b = 1.5e-6;
    env.omega_fov = direction == LinkDirection::Downlink ? 1e-8 : 1e-10;
    env.B_f = 1.0;
    return env;
  }
  if (name == "day-clear") {
    env.H_b = 1.5e-3;
    env.omega_fov = 1e-10;
    env.B_f = 0.2;
    env.uplink_model = UplinkNoiseModel::DaylightEarthshine;
    return env;
  }
  throw std::invalid_argument("unknown noise preset: " + std::string(name));
}

std::vector<std::string> noise_preset_names() { return {"night-fullmoon", "day-clear"}; }

double photon_energy(double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  return kPlanck * kSpeedOfLight / wavelength;
}

double stray_photons_downlink(const NoiseEnvironment& env, double a, double wavelength) {
  return env.H_b / photon_energy(wavelength) * env.omega_fov * kPi * a * a * env.B_f *
         env.delta_t;
}

double stray_photons_uplink_night(const NoiseEnvironment& env, double a) {
  return env.A_E * env.A_M * env.R_M * env.R_M * a * a * env.omega_fov /
         (env.d_EM * env.d_EM) * env.B_f * env.delta_t * env.H_sun;
}

double stray_photons_uplink_day(const NoiseEnvironment& env, double a) {
  return env.A_E * env.H_sun * env.omega_fov * a * a * env.B_f * env.delta_t;
}

double stray_photons(const NoiseEnvironment& env, const LinkScenario& s) {
  if (s.direction == LinkDirection::Downlink)
    return stray_photons_downlink(env, s.receiver_radius, s.wavelength);
  return env.uplink_model == UplinkNoiseModel::MoonEarthshine
             ? stray_photons_uplink_night(env, s.receiver_radius)
             : stray_photons_uplink_day(env, s.receiver_radius);
}

std::optional<double> qber(double n_noise, double n_sig, double Q0) {
  if (n_noise < 0.0 || n_sig < 0.0)
    throw std::invalid_argument("photon counts must be non-negative");
  const double total = n_noise + n_sig;
  if (total == 0.0) return std::nullopt;
  return Q0 + 0.5 * n_noise / total;
}

double system_efficiency(const LinkScenario& s, double eta) {
  return eta * s.detector_efficiency * s.optics_transmittance;
}

double signal_single_photon(double eta_sys) { return eta_sys; }

double signal_wcp(double mu, double eta_sys) { return -std::expm1(-mu * eta_sys); }

double click_probability_single_photon(double eta_sys, double n_noise) {
  return 1.0 - (1.0 - eta_sys) * std::exp(-n_noise);
}

double click_probability_wcp(double mu, double eta_sys, double n_noise) {
  return -std::expm1(-(mu * eta_sys + n_noise));
}

}  // namespace satqkd
