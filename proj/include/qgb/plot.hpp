#pragma once

#include <string>
#include <vector>

namespace qgb {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string x_column;
    std::vector<std::string> y_columns;
};

std::string format_number(double v);
std::string to_csv(const Table& t);
std::string to_svg(const Table& t, const PlotSpec& spec);

void write_text(const std::string& path, const std::string& content);

}  // namespace qgb
