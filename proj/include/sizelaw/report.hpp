#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sizelaw/regression.hpp"

namespace sizelaw {

struct FitRow {
  std::string analysis;
  FitResult fit;
};

// " | "-separated table: analysis, alpha and beta to 4 places, r and R² to 2,
// space label. Robust rows print R² as NA. An empty list gives the header only.
std::string render_fit_table(const std::vector<FitRow>& rows);

// Plain-text summary of a run directory, built only from the tables stored in
// it (fits.csv, nrmse.csv, bins.csv, ...). Missing tables are skipped.
std::string render_report(const std::filesystem::path& run_dir);

}  // namespace sizelaw
