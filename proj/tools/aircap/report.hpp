#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aircap/poisson.hpp"
#include "aircap/regress.hpp"

namespace aircap::cli {

// Table-4-style display name for a design-matrix column.
std::string display_name(const std::string& term);

struct CoefRow {
    std::string label;
    double coef = 0.0;
    double se = 0.0;
};

// Aligned text block: one coefficient per row with the standard error in
// parentheses underneath, then a footer of name/value lines.
std::string coef_table(const std::string& title, const std::vector<CoefRow>& rows,
                       const std::vector<std::pair<std::string, std::string>>& footer);

std::string fmt_int(std::size_t v);
std::string fmt_fixed(double v, int digits = 4);

// estimates CSV: term,estimate,std_error,t_stat,semi_elasticity_pct.
void write_estimates_csv(const std::filesystem::path& path, const RegressionResult& r);
void write_estimates_csv(const std::filesystem::path& path, const PoissonFEResult& r);

// key,value pairs.
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, std::string>>& entries);

std::vector<CoefRow> coef_rows(const RegressionResult& r);

// Writes text to a file and echoes it to stdout.
void emit_table(const std::filesystem::path& path, const std::string& text);

}  // namespace aircap::cli
