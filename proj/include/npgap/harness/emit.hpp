#pragma once

#include "npgap/harness/sweep.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace npgap {

struct PlotSeries {
    std::string x, y;
};

// "COLX:COLY"; throws ConfigError for a malformed spec or unknown column.
PlotSeries parse_plot(const std::string& spec);

// 17 significant digits, shortest exponent form that round-trips.
std::string format_double(double v);

// Header line of column names, then one line per row.
std::string to_csv(const std::vector<SweepRow>& rows);
// Generic table with a fixed header.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

nlohmann::json row_json(const SweepRow& row);
nlohmann::json fit_json(const std::vector<SweepRow>& rows, const std::string& x, const std::string& y,
                        bool exclude_largest);

// Report with the raw config text echoed verbatim under "config".
nlohmann::json sweep_report(const ExperimentConfig& config, const SweepResult& result);

// Log-log plot, one polyline per series; rows with non-positive values are skipped.
// Throws DomainError if rows is empty.
std::string svg_plot(const std::vector<SweepRow>& rows, const std::vector<PlotSeries>& series,
                     const std::string& title);

// Creates parent directories; throws IoError on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace npgap
