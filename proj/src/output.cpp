#include "dlambda/output.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dlambda {

void Table::add_row(std::vector<double> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("row width does not match the column count");
    rows.push_back(std::move(row));
}

std::size_t Table::column(std::string_view name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no column named " + std::string(name));
    return static_cast<std::size_t>(it - columns.begin());
}

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    return fmt::format("{:.12g}", value);
}

void write_csv(std::ostream& out, const Table& table, const Metadata& meta)
{
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

void write_ndjson(std::ostream& out, const Table& table, const Metadata& meta)
{
    nlohmann::ordered_json head;
    for (const auto& [key, value] : meta) head["meta"][key] = value;
    out << head.dump() << '\n';
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::isnan(row[c]))
                obj[table.columns[c]] = nullptr;
            else
                obj[table.columns[c]] = row[c];
        }
        out << obj.dump() << '\n';
    }
}

namespace {

constexpr std::array<std::string_view, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kLeft = 80.0, kRight = 210.0, kTop = 50.0, kBottom = 60.0;

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v)
    {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle()
    {
        if (!(hi >= lo)) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi == lo) {
            const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
    double span() const { return hi - lo; }
};

std::string escape(std::string_view s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double span)
{
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : (f < 3.5 ? 2.0 : (f < 7.5 ? 5.0 : 10.0));
    return nice * mag;
}

std::vector<double> ticks(const Range& r)
{
    const double step = nice_step(r.span());
    std::vector<double> t;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step)
        t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

std::vector<Series> collect(const Table& table, const PlotSpec& spec)
{
    const std::size_t xc = table.column(spec.x_column);
    std::vector<std::size_t> ycs;
    for (const auto& y : spec.y_columns) ycs.push_back(table.column(y));

    std::vector<Series> out;
    if (spec.group_column.empty()) {
        for (std::size_t k = 0; k < ycs.size(); ++k) {
            Series s{spec.y_columns[k], {}};
            for (const auto& row : table.rows) s.points.emplace_back(row[xc], row[ycs[k]]);
            out.push_back(std::move(s));
        }
        return out;
    }

    const std::size_t gc = table.column(spec.group_column);
    std::vector<double> groups;
    for (const auto& row : table.rows)
        if (std::find(groups.begin(), groups.end(), row[gc]) == groups.end())
            groups.push_back(row[gc]);
    for (const double g : groups) {
        for (std::size_t k = 0; k < ycs.size(); ++k) {
            std::string name = spec.group_column + "=" + format_number(g);
            if (ycs.size() > 1) name = spec.y_columns[k] + " (" + name + ")";
            Series s{name, {}};
            for (const auto& row : table.rows)
                if (row[gc] == g) s.points.emplace_back(row[xc], row[ycs[k]]);
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace

std::string render_svg(const Table& table, const PlotSpec& spec, const Metadata& meta)
{
    if (table.empty()) throw std::invalid_argument("cannot plot an empty table");
    const auto series = collect(table, spec);

    Range xr, yr;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xr.include(x);
            yr.include(y);
        }
    }
    xr.settle();
    yr.settle();

    const double pw = kSvgWidth - kLeft - kRight;
    const double ph = kSvgHeight - kTop - kBottom;
    if (spec.equal_aspect) {
        const double scale = std::max(xr.span() / pw, yr.span() / ph);
        const double xc = 0.5 * (xr.lo + xr.hi), yc = 0.5 * (yr.lo + yr.hi);
        xr.lo = xc - 0.5 * scale * pw;
        xr.hi = xc + 0.5 * scale * pw;
        yr.lo = yc - 0.5 * scale * ph;
        yr.hi = yc + 0.5 * scale * ph;
    }
    auto px = [&](double x) { return kLeft + (x - xr.lo) / xr.span() * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / yr.span() * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
    for (const auto& [key, value] : meta) svg += "  " + escape(key) + ": " + escape(value) + "\n";
    svg += "-->\n";
    svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                       "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                       kSvgWidth, kSvgHeight);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                       kSvgWidth, kSvgHeight);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                       kLeft + pw / 2.0, escape(spec.title));
    svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
                       "fill=\"none\" stroke=\"black\"/>\n",
                       kLeft, kTop, pw, ph);

    for (const double t : ticks(xr)) {
        const double x = px(t);
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                           "stroke=\"black\"/>\n",
                           x, kTop + ph, kTop + ph + 5.0);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                           kTop + ph + 19.0, format_number(t));
    }
    for (const double t : ticks(yr)) {
        const double y = py(t);
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                           "stroke=\"black\"/>\n",
                           kLeft - 5.0, y, kLeft);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                           kLeft - 8.0, y + 4.0, format_number(t));
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + pw / 2.0, static_cast<double>(kSvgHeight) - 15.0,
                       escape(spec.x_label.empty() ? spec.x_column : spec.x_label));
    svg += fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
                       kTop + ph / 2.0, escape(spec.y_label));

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto colour = kPalette[k % kPalette.size()];
        std::string points;
        auto flush = [&] {
            if (!points.empty())
                svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                                   "points=\"{}\"/>\n",
                                   colour, points);
            points.clear();
        };
        for (const auto& [x, y] : series[k].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", px(x), py(y));
        }
        flush();

        const double ly = kTop + 10.0 + 18.0 * static_cast<double>(k);
        const double lx = kLeft + pw + 12.0;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                           "stroke=\"{}\" stroke-width=\"2\"/>\n",
                           lx, ly, lx + 22.0, ly, colour);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 28.0, ly + 4.0,
                           escape(series[k].name));
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace dlambda
