#include "satqkd/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace satqkd {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

std::string pdt_csv(const TransmittanceDistribution& pdt) {
  std::string s = "bin_lower,bin_upper,probability\n";
  for (int i = 0; i < pdt.n_bins(); ++i)
    s += csv_row({format_double(pdt.bin_lower(i)), format_double(pdt.bin_upper(i)),
                  format_double(pdt.bin_prob[i])});
  return s;
}

std::string pdt_summary_json(const TransmittanceDistribution& pdt) {
  nlohmann::ordered_json j;
  j["M"] = pdt.sample_count;
  j["seed"] = pdt.seed;
  j["n_bins"] = pdt.n_bins();
  j["mean_eta"] = pdt.mean_eta;
  j["median_eta"] = pdt.median_eta;
  j["std_eta"] = pdt.std_eta;
  if (std::isfinite(pdt.mean_loss_db))
    j["mean_loss_db"] = pdt.mean_loss_db;
  else
    j["mean_loss_db"] = nullptr;
  return j.dump(2) + "\n";
}

}  // namespace satqkd
