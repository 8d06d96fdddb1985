#include "qgb/plot.hpp"

#include "qgb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qgb {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

}  // namespace

int Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("table has no column '" + name + "'");
    return static_cast<int>(it - columns.begin());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
        os << '\n';
    }
    return os.str();
}

std::string to_svg(const Table& t, const PlotSpec& spec) {
    const int xc = t.column(spec.x_column);
    std::vector<int> ycs;
    for (const auto& y : spec.y_columns) ycs.push_back(t.column(y));
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& row : t.rows) {
        xmin = std::min(xmin, row[xc]);
        xmax = std::max(xmax, row[xc]);
        for (int yc : ycs)
            if (std::isfinite(row[yc])) {
                ymin = std::min(ymin, row[yc]);
                ymax = std::max(ymax, row[yc]);
            }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0;
    if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\"" << fixed(kHeight)
       << "\" viewBox=\"0 0 " << fixed(kWidth) << ' ' << fixed(kHeight) << "\" font-family=\"sans-serif\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth) << "\" height=\"" << fixed(kHeight) << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"24.00\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw) << "\" height=\""
       << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0, yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(kTop + ph + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_number(std::round(xv * 1e4) / 1e4) << "</text>\n";
        os << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_number(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
    os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 16) << "\" text-anchor=\"middle\" font-size=\"13\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"18.00\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18.00 "
       << fixed(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";
    for (std::size_t k = 0; k < ycs.size(); ++k) {
        const char* color = kColors[k % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& row : t.rows) {
            if (!std::isfinite(row[ycs[k]])) continue;
            os << (first ? "" : " ") << fixed(px(row[xc])) << ',' << fixed(py(row[ycs[k]]));
            first = false;
        }
        os << "\"/>\n";
        const double ly = kTop + 14 + 20.0 * k;
        os << "<line x1=\"" << fixed(kLeft + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(kLeft + pw + 36)
           << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fixed(kLeft + pw + 42) << "\" y=\"" << fixed(ly + 4) << "\" font-size=\"12\">"
           << escape(spec.y_columns[k]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace qgb
