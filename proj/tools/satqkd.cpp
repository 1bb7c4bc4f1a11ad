#include <omp.h>

#include <cstdio>
#include <exception>
#include <optional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "satqkd/scenario.hpp"

namespace {

void print_presets() {
  std::cout << "link presets:\n";
  for (const auto& n : satqkd::link_preset_names()) {
    const auto s = satqkd::link_preset(n);
    std::cout << "  " << n << "  W0=" << s.waist << " m  a=" << s.receiver_radius << " m\n";
  }
  std::cout << "weather presets:\n";
  for (const auto& n : satqkd::weather_preset_names()) {
    const auto w = satqkd::weather_preset(n);
    std::cout << "  " << n << "  Cn2=" << w.cn2 << "  n0=" << w.n0 << "  beta=" << w.beta
              << (w.daytime ? "  day" : "  night") << "\n";
  }
  std::cout << "noise presets:\n";
  for (const auto& n : satqkd::noise_preset_names()) std::cout << "  " << n << "\n";
  std::cout << "config keys:\n";
  for (const auto& k : satqkd::config_keys()) std::cout << "  " << k << "\n";
}

std::string rate_cell(const std::optional<satqkd::KeyRateResult>& r) {
  if (!r) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", r->rate_avg);
  return buf;
}

void print_rows(const std::vector<satqkd::SummaryRow>& rows) {
  std::printf("%8s %12s %10s %10s %12s %12s\n", "zenith", "mean_eta", "loss_dB", "L_km",
              "R_sp", "R_wcp");
  for (const auto& r : rows)
    std::printf("%8.2f %12.5e %10.4f %10.2f %12s %12s\n", r.zenith_deg, r.pdt.mean_eta,
                r.pdt.mean_loss_db, r.geometry.L / 1e3, rate_cell(r.sp).c_str(),
                rate_cell(r.wcp).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic-beam transmittance and finite-key BB84 rates for satellite links"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out = "satqkd_out";
  int threads = 0;
  std::string preset, weather, noise, sweep, protocol, block, eps_sec, eps_cor, bins, samples,
      seed;
  bool optimize = false;

  app.add_option("--config", config_path, "key = value file; flags override it")
      ->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "link optics preset");
  app.add_option("--weather", weather, "weather preset (night1..3, day1..3)");
  app.add_option("--noise", noise, "background preset");
  app.add_option("--sweep", sweep, "zenith angles in degrees, lo:hi:step or one value");
  app.add_option("--samples", samples, "PDT samples per zenith angle");
  app.add_option("--bins", bins, "histogram bins on [0,1]");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--protocol", protocol, "sp, wcp or both")
      ->check(CLI::IsMember({"sp", "wcp", "both"}));
  app.add_option("--block", block, "block size for the selected protocol(s)");
  app.add_option("--eps-sec", eps_sec, "secrecy parameter");
  app.add_option("--eps-cor", eps_cor, "correctness parameter");
  app.add_flag("--optimize", optimize, "optimize protocol parameters per bin");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);

  auto* presets_cmd = app.add_subcommand("presets", "list presets and config keys");
  auto* reproduce_cmd = app.add_subcommand("reproduce", "write the standard data sets");
  reproduce_cmd->fallthrough();
  satqkd::ReproduceOptions rep;
  reproduce_cmd->add_option("--pdt-samples", rep.pdt_samples, "samples for the histograms");
  reproduce_cmd->add_option("--sweep-samples", rep.sweep_samples, "samples per sweep point");
  reproduce_cmd->add_option("--seed", rep.seed, "RNG seed");
  bool no_optimize = false;
  reproduce_cmd->add_flag("--no-optimize", no_optimize, "keep default protocol parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (*presets_cmd) {
      print_presets();
      return 0;
    }
    if (*reproduce_cmd) {
      rep.optimize = !no_optimize;
      for (const auto& f : satqkd::reproduce_figures(out, rep)) std::cout << f.string() << "\n";
      return 0;
    }

    satqkd::ConfigMap map;
    if (!config_path.empty()) map = satqkd::read_config_file(config_path);
    auto set = [&map](const char* key, const std::string& v) {
      if (!v.empty()) map[key] = v;
    };
    set("preset", preset);
    set("weather", weather);
    set("noise", noise);
    set("sweep", sweep);
    set("samples", samples);
    set("bins", bins);
    set("seed", seed);
    set("protocol", protocol);
    set("eps_sec", eps_sec);
    set("eps_cor", eps_cor);
    if (optimize) map["optimize"] = "true";
    if (!block.empty()) {
      const std::string p = map.count("protocol") ? map["protocol"] : "both";
      if (p != "wcp") map["block_sp"] = block;
      if (p != "sp") map["block_wcp"] = block;
    }

    const satqkd::RunConfig cfg = satqkd::resolve_config(map);
    const auto artifacts = satqkd::run_scenario(cfg, out);
    print_rows(artifacts.rows);
    std::cout << "wrote " << artifacts.files.size() << " files to " << out << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "satqkd: error: " << e.what() << "\n";
    return 2;
  }
}
