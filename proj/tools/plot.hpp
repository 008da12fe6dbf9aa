#pragma once

#include <filesystem>
#include <string>

#include "escape_lab/csv.hpp"

namespace escape_lab::cli {

enum class PlotKind { Survival, Profile };

/// Parses "survival" or "profile"; throws ConfigError otherwise.
PlotKind parse_plot_kind(const std::string& name);

/// Renders a standalone SVG line chart.
///  * Survival: survival_freq (with ci_low/ci_high whiskers) against lambda,
///    plus a vertical marker at the critical value for degree d.
///  * Profile: empirical_exponent and analytic_exponent against n, one pair of
///    curves per value of c.
/// Throws ConfigError listing missing columns, or when the table has no rows.
std::string render_plot(const CsvTable& table, PlotKind kind, int d);

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind, int d, const std::filesystem::path& out_path);

}  // namespace escape_lab::cli
