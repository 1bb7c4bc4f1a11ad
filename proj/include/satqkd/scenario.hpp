#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satqkd/link_geometry.hpp"
#include "satqkd/pdt_sampler.hpp"
#include "satqkd/qkd_noise.hpp"
#include "satqkd/qkd_rates.hpp"

namespace satqkd {

// Optics presets: micius-down, micius-up, cubesat-down, cubesat-up.
LinkScenario link_preset(std::string_view name);
std::vector<std::string> link_preset_names();

struct SweepSpec {
  double lo_deg = 0.0;
  double hi_deg = 0.0;
  double step_deg = 1.0;

  std::vector<double> angles_deg() const;
};

// "lo:hi:step" in degrees, or a single angle.
SweepSpec parse_sweep(std::string_view text);
std::string to_string(const SweepSpec& s);

struct RunConfig {
  std::string preset = "micius-down";
  std::string weather = "night1";
  std::string noise = "night-fullmoon";
  LinkScenario scenario;
  WeatherCondition conditions;
  NoiseEnvironment noise_env;
  SweepSpec sweep;
  std::size_t samples = 10000;
  int bins = 200;
  std::uint64_t seed = 1;
  bool run_sp = true;
  bool run_wcp = true;
  ProtocolParams sp;
  ProtocolParams wcp;
  bool optimize = false;
  QuadratureOptions quadrature;
};

// Flat key = value view of a run; file lines and CLI flags both land here
// and later entries replace earlier ones.
using ConfigMap = std::map<std::string, std::string>;

// '#' starts a comment; blank lines ignored.  Throws std::runtime_error
// with the line number on malformed input.
ConfigMap parse_config_text(std::string_view text);
ConfigMap read_config_file(const std::filesystem::path& path);

// Presets first (preset, weather, noise), then every other key on top.
// Missing keys take preset-dependent defaults.  Throws
// std::invalid_argument on unknown keys and bad values.
RunConfig resolve_config(const ConfigMap& map);

// Every resolved parameter, enough to reproduce the run exactly.
ConfigMap to_config_map(const RunConfig& cfg);
std::vector<std::string> config_keys();

struct SummaryRow {
  double zenith_deg = 0.0;
  SlantGeometry geometry;
  TransmittanceDistribution pdt;
  std::optional<KeyRateResult> sp;
  std::optional<KeyRateResult> wcp;
};

std::vector<SummaryRow> evaluate_sweep(const RunConfig& cfg);

struct RunArtifacts {
  std::vector<std::filesystem::path> files;
  std::vector<SummaryRow> rows;
};

// Writes pdt_*.csv / pdt_*.json per point, summary.csv and manifest.txt
// into `out`.  Throws on invalid configuration, integration failure or
// unwritable output.
RunArtifacts run_scenario(const RunConfig& cfg, const std::filesystem::path& out);

struct ReproduceOptions {
  std::size_t pdt_samples = 10000;
  std::size_t sweep_samples = 1000;
  std::uint64_t seed = 1;
  bool optimize = true;
};

// Data behind the standard plots: PDT histograms, mean-transmittance
// sweeps for every weather condition and both optics, and key-rate
// sweeps.  Writes an index file describing each output.
std::vector<std::filesystem::path> reproduce_figures(const std::filesystem::path& out,
                                                     const ReproduceOptions& opts = {});

}  // namespace satqkd
