// Tabular output: CSV, NDJSON and a small self-contained SVG line plotter.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dlambda {

/// Column-major-named, row-major-stored numeric table. NaN is the undefined
/// marker (written as `nan` in CSV and `null` in NDJSON).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::size_t column(std::string_view name) const; // throws std::out_of_range
    bool empty() const { return rows.empty(); }
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip representation with up to 12 significant digits;
/// NaN becomes "nan".
std::string format_number(double value);

/// `# key: value` metadata lines, then the header row, then the data.
void write_csv(std::ostream& out, const Table& table, const Metadata& meta);

/// A {"meta": {...}} line followed by one object per row.
void write_ndjson(std::ostream& out, const Table& table, const Metadata& meta);

struct PlotSpec {
    std::string title;
    std::string x_column;
    std::vector<std::string> y_columns;
    std::string group_column; // optional: one series per distinct value
    std::string x_label;
    std::string y_label;
    bool equal_aspect = false; // phase diagrams
};

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 600;

/// Standalone 800x600 SVG with ticked axes, one polyline per series and a
/// legend. NaN values break the polyline. Throws std::invalid_argument for an
/// empty table.
std::string render_svg(const Table& table, const PlotSpec& spec, const Metadata& meta);

} // namespace dlambda
