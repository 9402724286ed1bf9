#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsg/design.hpp"
#include "wsg/metrics.hpp"

namespace wsg::io {

/// Shortest-safe decimal: 17 significant digits, locale independent.
std::string format_real(double x);

/// Fixed six-decimal rendering for human-facing tables.
std::string format_fixed(double x, int decimals = 6);

/// Strict, locale-independent parse of a whole cell; nullopt on anything else.
std::optional<double> parse_real(std::string_view text);

/// JSON coefficient document:
/// {q, degree, j, weight_kind, weights[], coefficients[], r, s, metrics{...}}
/// with every real written to 17 significant digits.
std::string coefficient_document(const FilterCoefficients<double>& c, const MetricsReport<double>& metrics);

/// Rebuilds taps and spec from a coefficient document. Weights are validated
/// against their declared kind.
FilterCoefficients<double> parse_coefficient_document(std::string_view json);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of the named column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
};

/// Comma-separated, first row header, double-quoted fields may hold commas.
CsvTable read_csv(std::istream& in);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace wsg::io
