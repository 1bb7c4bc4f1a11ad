#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "satqkd/pdt_sampler.hpp"

namespace satqkd {

// %.17g, which round-trips every double; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

// Writes the whole file at once; throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Header "bin_lower,bin_upper,probability" then one row per bin.
std::string pdt_csv(const TransmittanceDistribution& pdt);

// {"M", "seed", "n_bins", "mean_eta", "median_eta", "std_eta", "mean_loss_db"}
std::string pdt_summary_json(const TransmittanceDistribution& pdt);

// Comma-joined row; cells are written as given.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace satqkd
