#include "satqkd/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "satqkd/output.hpp"

namespace satqkd {

LinkScenario link_preset(std::string_view name) {
  LinkScenario s;
  if (name == "micius-down") {
    s.direction = LinkDirection::Downlink;
    s.waist = 0.15;
    s.receiver_radius = 0.5;
  } else if (name == "micius-up") {
    s.direction = LinkDirection::Uplink;
    s.waist = 0.5;
    s.receiver_radius = 0.15;
  } else if (name == "cubesat-down") {
    s.direction = LinkDirection::Downlink;
    s.waist = 0.05;
    s.receiver_radius = 0.5;
  } else if (name == "cubesat-up") {
    s.direction = LinkDirection::Uplink;
    s.waist = 0.5;
    s.receiver_radius = 0.05;
  } else {
    throw std::invalid_argument("unknown link preset: " + std::string(name));
  }
  return s;
}

std::vector<std::string> link_preset_names() {
  return {"micius-down", "micius-up", "cubesat-down", "cubesat-up"};
}

std::vector<double> SweepSpec::angles_deg() const {
  std::vector<double> out;
  if (hi_deg == lo_deg) return {lo_deg};
  const double span = hi_deg - lo_deg;
  const auto n = static_cast<long>(std::floor(span / step_deg + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo_deg + i * step_deg);
  return out;
}

namespace {

double parse_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    if (v == "inf") return INFINITY;
    throw std::invalid_argument(std::string(key) + ": not a number: '" + std::string(v) + "'");
  }
  return x;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(std::string(key) + ": not a non-negative integer: '" +
                                std::string(v) + "'");
  return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(std::string(key) + ": expected true or false");
}

std::array<double, 3> parse_triple(std::string_view key, std::string_view v) {
  std::array<double, 3> out{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = v.find(',', start);
    if ((i < 2) != (comma != std::string_view::npos))
      throw std::invalid_argument(std::string(key) + ": expected three comma-separated values");
    out[i] = parse_double(key, v.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string triple(const std::array<double, 3>& a) {
  return format_double(a[0]) + "," + format_double(a[1]) + "," + format_double(a[2]);
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec s;
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) {
    s.lo_deg = s.hi_deg = parse_double("sweep", trim(text));
  } else {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw std::invalid_argument("sweep: expected lo:hi:step");
    s.lo_deg = parse_double("sweep", trim(text.substr(0, c1)));
    s.hi_deg = parse_double("sweep", trim(text.substr(c1 + 1, c2 - c1 - 1)));
    s.step_deg = parse_double("sweep", trim(text.substr(c2 + 1)));
  }
  if (!(s.lo_deg >= 0.0) || !(s.hi_deg <= 80.0) || !(s.hi_deg >= s.lo_deg))
    throw std::invalid_argument("sweep: angles must satisfy 0 <= lo <= hi <= 80 degrees");
  if (!(s.step_deg > 0.0)) throw std::invalid_argument("sweep: step must be positive");
  return s;
}

std::string to_string(const SweepSpec& s) {
  return fmt(s.lo_deg) + ":" + fmt(s.hi_deg) + ":" + fmt(s.step_deg);
}

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap map;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    map[std::string(key)] = std::string(value);
  }
  return map;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

struct KeySpec {
  const char* name;
  Setter set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto num = [&t](const char* name, auto member) {
      t.push_back({name,
                   [name, member](RunConfig& c, std::string_view v) {
                     member(c) = parse_double(name, v);
                   },
                   [member](const RunConfig& c) {
                     return fmt(member(const_cast<RunConfig&>(c)));
                   }});
    };
    t.push_back({"direction",
                 [](RunConfig& c, std::string_view v) {
                   c.scenario.direction = parse_direction(v);
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.scenario.direction)); }});
    num("sat_altitude", [](RunConfig& c) -> double& { return c.scenario.sat_altitude; });
    num("atmo_thickness", [](RunConfig& c) -> double& { return c.scenario.atmo_thickness; });
    num("waist", [](RunConfig& c) -> double& { return c.scenario.waist; });
    num("receiver_radius", [](RunConfig& c) -> double& { return c.scenario.receiver_radius; });
    num("wavelength", [](RunConfig& c) -> double& { return c.scenario.wavelength; });
    t.push_back({"focal_length",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "none")
                     c.scenario.focal_length.reset();
                   else
                     c.scenario.focal_length = parse_double("focal_length", v);
                 },
                 [](const RunConfig& c) {
                   return c.scenario.focal_length ? fmt(*c.scenario.focal_length)
                                                  : std::string("none");
                 }});
    num("pointing_error", [](RunConfig& c) -> double& { return c.scenario.pointing_error; });
    num("detector_efficiency",
        [](RunConfig& c) -> double& { return c.scenario.detector_efficiency; });
    num("optics_transmittance",
        [](RunConfig& c) -> double& { return c.scenario.optics_transmittance; });

    num("cn2", [](RunConfig& c) -> double& { return c.conditions.cn2; });
    num("n0", [](RunConfig& c) -> double& { return c.conditions.n0; });
    num("beta", [](RunConfig& c) -> double& { return c.conditions.beta; });
    t.push_back({"daytime",
                 [](RunConfig& c, std::string_view v) {
                   c.conditions.daytime = parse_bool("daytime", v);
                 },
                 [](const RunConfig& c) { return std::string(c.conditions.daytime ? "true" : "false"); }});

    num("H_b", [](RunConfig& c) -> double& { return c.noise_env.H_b; });
    num("H_sun", [](RunConfig& c) -> double& { return c.noise_env.H_sun; });
    num("A_E", [](RunConfig& c) -> double& { return c.noise_env.A_E; });
    num("A_M", [](RunConfig& c) -> double& { return c.noise_env.A_M; });
    num("R_M", [](RunConfig& c) -> double& { return c.noise_env.R_M; });
    num("d_EM", [](RunConfig& c) -> double& { return c.noise_env.d_EM; });
    num("omega_fov", [](RunConfig& c) -> double& { return c.noise_env.omega_fov; });
    num("B_f", [](RunConfig& c) -> double& { return c.noise_env.B_f; });
    num("delta_t", [](RunConfig& c) -> double& { return c.noise_env.delta_t; });
    num("Q0", [](RunConfig& c) -> double& { return c.noise_env.Q0; });
    t.push_back({"uplink_noise",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "moon")
                     c.noise_env.uplink_model = UplinkNoiseModel::MoonEarthshine;
                   else if (v == "daylight")
                     c.noise_env.uplink_model = UplinkNoiseModel::DaylightEarthshine;
                   else
                     throw std::invalid_argument("uplink_noise: expected moon or daylight");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.noise_env.uplink_model == UplinkNoiseModel::MoonEarthshine
                                          ? "moon"
                                          : "daylight");
                 }});

    t.push_back({"sweep",
                 [](RunConfig& c, std::string_view v) { c.sweep = parse_sweep(v); },
                 [](const RunConfig& c) { return to_string(c.sweep); }});
    t.push_back({"samples",
                 [](RunConfig& c, std::string_view v) {
                   c.samples = parse_uint("samples", v);
                   if (c.samples == 0) throw std::invalid_argument("samples must be >= 1");
                 },
                 [](const RunConfig& c) { return std::to_string(c.samples); }});
    t.push_back({"bins",
                 [](RunConfig& c, std::string_view v) {
                   const auto b = parse_uint("bins", v);
                   if (b < 2 || b > 1000000) throw std::invalid_argument("bins must be in [2, 1e6]");
                   c.bins = static_cast<int>(b);
                 },
                 [](const RunConfig& c) { return std::to_string(c.bins); }});
    t.push_back({"seed",
                 [](RunConfig& c, std::string_view v) { c.seed = parse_uint("seed", v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"protocol",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "both") {
                     c.run_sp = c.run_wcp = true;
                   } else {
                     const Protocol p = parse_protocol(v);
                     c.run_sp = p == Protocol::SinglePhoton;
                     c.run_wcp = p == Protocol::DecoyWCP;
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.run_sp && c.run_wcp ? "both" : c.run_sp ? "sp" : "wcp");
                 }});
    t.push_back({"optimize",
                 [](RunConfig& c, std::string_view v) { c.optimize = parse_bool("optimize", v); },
                 [](const RunConfig& c) { return std::string(c.optimize ? "true" : "false"); }});

    num("block_sp", [](RunConfig& c) -> double& { return c.sp.block_n; });
    t.push_back({"pe_bits_sp",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "auto")
                     c.sp.pe_bits.reset();
                   else
                     c.sp.pe_bits = parse_double("pe_bits_sp", v);
                 },
                 [](const RunConfig& c) {
                   return c.sp.pe_bits ? fmt(*c.sp.pe_bits) : std::string("auto");
                 }});
    t.push_back({"q_tol_sp",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "auto")
                     c.sp.Q_tol.reset();
                   else
                     c.sp.Q_tol = parse_double("q_tol_sp", v);
                 },
                 [](const RunConfig& c) {
                   return c.sp.Q_tol ? fmt(*c.sp.Q_tol) : std::string("auto");
                 }});
    num("basis_prob_sp", [](RunConfig& c) -> double& { return c.sp.basis_prob; });
    num("rep_rate_sp", [](RunConfig& c) -> double& { return c.sp.rep_rate; });
    num("block_wcp", [](RunConfig& c) -> double& { return c.wcp.block_n; });
    t.push_back({"intensities_wcp",
                 [](RunConfig& c, std::string_view v) {
                   c.wcp.intensities = parse_triple("intensities_wcp", v);
                 },
                 [](const RunConfig& c) { return triple(c.wcp.intensities); }});
    t.push_back({"intensity_probs_wcp",
                 [](RunConfig& c, std::string_view v) {
                   c.wcp.intensity_probs = parse_triple("intensity_probs_wcp", v);
                 },
                 [](const RunConfig& c) { return triple(c.wcp.intensity_probs); }});
    num("basis_prob_wcp", [](RunConfig& c) -> double& { return c.wcp.basis_prob; });
    num("rep_rate_wcp", [](RunConfig& c) -> double& { return c.wcp.rep_rate; });

    // Shared by both protocols.
    auto shared = [&t](const char* name, double ProtocolParams::*field) {
      t.push_back({name,
                   [name, field](RunConfig& c, std::string_view v) {
                     c.sp.*field = c.wcp.*field = parse_double(name, v);
                   },
                   [field](const RunConfig& c) { return fmt(c.sp.*field); }});
    };
    shared("eps_sec", &ProtocolParams::eps_sec);
    shared("eps_cor", &ProtocolParams::eps_cor);
    shared("f_ec", &ProtocolParams::f_EC);
    shared("q", &ProtocolParams::q);

    t.push_back({"quad_min_order",
                 [](RunConfig& c, std::string_view v) {
                   c.quadrature.min_order = static_cast<int>(parse_uint("quad_min_order", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.quadrature.min_order); }});
    t.push_back({"quad_max_order",
                 [](RunConfig& c, std::string_view v) {
                   c.quadrature.max_order = static_cast<int>(parse_uint("quad_max_order", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.quadrature.max_order); }});
    num("quad_abs_tol", [](RunConfig& c) -> double& { return c.quadrature.abs_tol; });
    num("quad_rel_tol", [](RunConfig& c) -> double& { return c.quadrature.rel_tol; });
    t.push_back({"quad_max_cells",
                 [](RunConfig& c, std::string_view v) {
                   c.quadrature.max_cells = static_cast<int>(parse_uint("quad_max_cells", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.quadrature.max_cells); }});
    return t;
  }();
  return table;
}

const char* const kPresetKeys[] = {"preset", "weather", "noise"};

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys(std::begin(kPresetKeys), std::end(kPresetKeys));
  for (const auto& k : key_table()) keys.emplace_back(k.name);
  return keys;
}

RunConfig resolve_config(const ConfigMap& map) {
  auto value = [&map](const char* key, const char* fallback) {
    const auto it = map.find(key);
    return it == map.end() ? std::string(fallback) : it->second;
  };

  for (const auto& [key, v] : map) {
    bool known = false;
    for (const char* p : kPresetKeys) known = known || key == p;
    for (const auto& k : key_table()) known = known || key == k.name;
    if (!known) throw std::invalid_argument("unknown config key: " + key);
  }

  RunConfig c;
  c.preset = value("preset", "micius-down");
  c.scenario = link_preset(c.preset);
  if (const auto it = map.find("direction"); it != map.end())
    c.scenario.direction = parse_direction(it->second);

  c.weather = value("weather", "night1");
  c.conditions = weather_preset(c.weather);
  if (const auto it = map.find("daytime"); it != map.end())
    c.conditions.daytime = parse_bool("daytime", it->second);

  c.noise = value("noise", c.conditions.daytime ? "day-clear" : "night-fullmoon");
  c.noise_env = noise_preset(c.noise, c.scenario.direction);

  c.sp = default_params(Protocol::SinglePhoton, c.scenario.direction);
  c.wcp = default_params(Protocol::DecoyWCP, c.scenario.direction);

  for (const auto& k : key_table())
    if (const auto it = map.find(k.name); it != map.end()) k.set(c, it->second);

  if (map.find("samples") == map.end())
    c.samples = c.sweep.angles_deg().size() > 1 ? 1000 : 10000;

  validate(c.scenario);
  validate(c.conditions);
  validate(c.noise_env);
  validate(c.sp);
  validate(c.wcp);
  if (c.quadrature.min_order < 2 || c.quadrature.max_order < c.quadrature.min_order ||
      c.quadrature.max_order > 512)
    throw std::invalid_argument("quadrature orders must satisfy 2 <= min <= max <= 512");
  return c;
}

ConfigMap to_config_map(const RunConfig& cfg) {
  ConfigMap map;
  map["preset"] = cfg.preset;
  map["weather"] = cfg.weather;
  map["noise"] = cfg.noise;
  for (const auto& k : key_table()) map[k.name] = k.get(cfg);
  return map;
}

std::vector<SummaryRow> evaluate_sweep(const RunConfig& cfg) {
  const std::vector<double> degrees = cfg.sweep.angles_deg();
  std::vector<double> zeniths;
  for (double d : degrees) zeniths.push_back(deg_to_rad(d));

  SamplerOptions opts;
  opts.samples = cfg.samples;
  opts.n_bins = cfg.bins;
  opts.seed = cfg.seed;
  opts.quadrature = cfg.quadrature;
  const auto points = sweep_mean_transmittance(cfg.scenario, cfg.conditions, zeniths, opts);

  const Channel ch = channel_noise(cfg.noise_env, cfg.scenario);
  auto rate = [&](const TransmittanceDistribution& pdt, const ProtocolParams& p) {
    return cfg.optimize ? optimize_rate(pdt, cfg.scenario, p, ch)
                        : pdt_averaged_rate(pdt, cfg.scenario, p, ch);
  };

  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    SummaryRow r;
    r.zenith_deg = degrees[i];
    r.geometry = pt.geometry;
    r.pdt = pt.pdt;
    if (cfg.run_sp) r.sp = rate(pt.pdt, cfg.sp);
    if (cfg.run_wcp) r.wcp = rate(pt.pdt, cfg.wcp);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string point_stem(double zenith_deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pdt_z%06.2f", zenith_deg);
  return buf;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string s = "# satqkd-summary v1\n";
  s += csv_row({"zenith_deg", "L_m", "h_m", "chi_ext", "mean_eta", "median_eta", "std_eta",
                "loss_db", "rate_sp", "status_sp", "key_length_sp", "pe_bits_sp", "q_tol_sp",
                "rate_wcp", "status_wcp", "key_length_wcp", "mu1_wcp", "mu2_wcp", "mu3_wcp",
                "p1_wcp", "p2_wcp", "p3_wcp", "basis_prob_wcp"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{fmt(r.zenith_deg),       fmt(r.geometry.L),
                                   fmt(r.geometry.h),        fmt(r.geometry.chi_ext),
                                   fmt(r.pdt.mean_eta),      fmt(r.pdt.median_eta),
                                   fmt(r.pdt.std_eta),       fmt(r.pdt.mean_loss_db)};
    if (r.sp) {
      const auto& p = r.sp->optimal_params;
      cells.insert(cells.end(),
                   {fmt(r.sp->rate_avg), std::string(to_string(r.sp->status)),
                    fmt(r.sp->key_length), fmt(p.k()),
                    p.Q_tol ? fmt(*p.Q_tol) : std::string("auto")});
    } else {
      cells.insert(cells.end(), 5, "");
    }
    if (r.wcp) {
      const auto& p = r.wcp->optimal_params;
      cells.insert(cells.end(),
                   {fmt(r.wcp->rate_avg), std::string(to_string(r.wcp->status)),
                    fmt(r.wcp->key_length), fmt(p.intensities[0]), fmt(p.intensities[1]),
                    fmt(p.intensities[2]), fmt(p.intensity_probs[0]), fmt(p.intensity_probs[1]),
                    fmt(p.intensity_probs[2]), fmt(p.basis_prob)});
    } else {
      cells.insert(cells.end(), 10, "");
    }
    s += csv_row(cells);
  }
  return s;
}

std::string manifest_text(const RunConfig& cfg) {
  std::string s = "# satqkd run manifest; replay with --config\n";
  for (const auto& [k, v] : to_config_map(cfg)) s += k + " = " + v + "\n";
  return s;
}

void ensure_directory(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out))
    throw std::runtime_error("cannot create output directory " + out.string());
}

}  // namespace

RunArtifacts run_scenario(const RunConfig& cfg, const std::filesystem::path& out) {
  ensure_directory(out);
  RunArtifacts a;
  a.rows = evaluate_sweep(cfg);
  for (const auto& r : a.rows) {
    const std::string stem = point_stem(r.zenith_deg);
    a.files.push_back(out / (stem + ".csv"));
    write_text_file(a.files.back(), pdt_csv(r.pdt));
    a.files.push_back(out / (stem + ".json"));
    write_text_file(a.files.back(), pdt_summary_json(r.pdt));
  }
  a.files.push_back(out / "summary.csv");
  write_text_file(a.files.back(), summary_csv(a.rows));
  a.files.push_back(out / "manifest.txt");
  write_text_file(a.files.back(), manifest_text(cfg));
  return a;
}

std::vector<std::filesystem::path> reproduce_figures(const std::filesystem::path& out,
                                                     const ReproduceOptions& opts) {
  ensure_directory(out);
  std::vector<std::filesystem::path> files;
  std::string index = "# file: contents\n";
  auto emit = [&](const std::string& name, const std::string& content,
                  const std::string& what) {
    files.push_back(out / name);
    write_text_file(files.back(), content);
    index += name + ": " + what + "\n";
  };

  auto base = [&](const char* preset, const char* weather) {
    ConfigMap m{{"preset", preset}, {"weather", weather}, {"seed", std::to_string(opts.seed)},
                {"optimize", opts.optimize ? "true" : "false"}};
    return m;
  };

  // Single-point histograms at the zenith.
  for (const char* preset : {"micius-down", "micius-up"}) {
    ConfigMap m = base(preset, "night1");
    m["samples"] = std::to_string(opts.pdt_samples);
    m["protocol"] = "sp";
    const RunConfig cfg = resolve_config(m);
    const auto rows = evaluate_sweep(cfg);
    const std::string dir(to_string(cfg.scenario.direction));
    emit("pdt_" + dir + "link_night1_zenith0.csv", pdt_csv(rows[0].pdt),
         "PDT histogram, " + dir + "-link, night condition 1, zenith, M=" +
             std::to_string(opts.pdt_samples));
  }

  const char* const weathers[] = {"night1", "night2", "night3", "day1", "day2", "day3"};
  auto sweep_cfg = [&](const char* preset, const char* weather) {
    ConfigMap m = base(preset, weather);
    m["sweep"] = "0:80:5";
    m["samples"] = std::to_string(opts.sweep_samples);
    return m;
  };

  // Mean transmittance against zenith angle for every weather condition.
  for (const char* preset : {"micius-down", "micius-up"}) {
    std::vector<std::vector<SummaryRow>> all;
    std::vector<std::string> header{"zenith_deg", "L_m"};
    for (const char* w : weathers) {
      ConfigMap m = sweep_cfg(preset, w);
      m["protocol"] = "sp";
      RunConfig cfg = resolve_config(m);
      cfg.run_sp = false;
      all.push_back(evaluate_sweep(cfg));
      header.push_back(std::string("mean_eta_") + w);
      header.push_back(std::string("loss_db_") + w);
    }
    std::string s = csv_row(header);
    for (std::size_t i = 0; i < all[0].size(); ++i) {
      std::vector<std::string> cells{fmt(all[0][i].zenith_deg), fmt(all[0][i].geometry.L)};
      for (const auto& rows : all) {
        cells.push_back(fmt(rows[i].pdt.mean_eta));
        cells.push_back(fmt(rows[i].pdt.mean_loss_db));
      }
      s += csv_row(cells);
    }
    const std::string dir(to_string(link_preset(preset).direction));
    emit("mean_transmittance_" + dir + "link_weather.csv", s,
         "mean transmittance and loss vs zenith, " + dir + "-link, six weather conditions");
  }

  // Large against small satellite optics, night condition 1.
  {
    std::vector<std::string> header{"zenith_deg"};
    std::vector<std::vector<SummaryRow>> all;
    for (const char* preset : {"micius-down", "cubesat-down", "micius-up", "cubesat-up"}) {
      ConfigMap m = sweep_cfg(preset, "night1");
      m["protocol"] = "sp";
      RunConfig cfg = resolve_config(m);
      cfg.run_sp = false;
      all.push_back(evaluate_sweep(cfg));
      header.push_back(std::string("loss_db_") + preset);
    }
    std::string s = csv_row(header);
    for (std::size_t i = 0; i < all[0].size(); ++i) {
      std::vector<std::string> cells{fmt(all[0][i].zenith_deg)};
      for (const auto& rows : all) cells.push_back(fmt(rows[i].pdt.mean_loss_db));
      s += csv_row(cells);
    }
    emit("mean_loss_optics_comparison.csv", s,
         "mean loss vs zenith, large and small satellite optics, both directions");
  }

  // Key rates, condition 1, night and day.
  for (const char* preset : {"micius-down", "micius-up"}) {
    for (const char* w : {"night1", "day1"}) {
      const RunConfig cfg = resolve_config(sweep_cfg(preset, w));
      const auto rows = evaluate_sweep(cfg);
      std::string s = csv_row({"zenith_deg", "L_m", "mean_eta", "rate_sp", "status_sp",
                               "rate_wcp", "status_wcp"});
      for (const auto& r : rows)
        s += csv_row({fmt(r.zenith_deg), fmt(r.geometry.L), fmt(r.pdt.mean_eta),
                      fmt(r.sp->rate_avg), std::string(to_string(r.sp->status)),
                      fmt(r.wcp->rate_avg), std::string(to_string(r.wcp->status))});
      const std::string dir(to_string(cfg.scenario.direction));
      const std::string when = cfg.conditions.daytime ? "day" : "night";
      emit("key_rate_" + dir + "link_" + when + ".csv", s,
           "PDT-averaged key rate per pulse vs zenith, SP and WCP, " + dir + "-link, " + when +
               "-time, condition 1");
    }
  }

  files.push_back(out / "index.txt");
  write_text_file(files.back(), index);
  return files;
}

}  // namespace satqkd
