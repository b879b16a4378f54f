#pragma once

#include <string>
#include <vector>

namespace ringlight {

/// Round-trip formatting; identical doubles always give identical text.
std::string format_number(double x);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    /// Numeric view of a column (non-numeric cells become NaN).
    std::vector<double> column(const std::string& name) const;
};

/// Writes `# key=value` header lines followed by the table.
void write_csv(const std::string& path, const Table& table,
               const std::vector<std::pair<std::string, std::string>>& header);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false; // scatter instead of a line
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

std::string render_svg(const LinePlot& plot);

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x; // column coordinates
    std::vector<double> y; // row coordinates
    std::vector<std::vector<double>> values; // values[row][col]
};

std::string render_svg(const Heatmap& map);

} // namespace ringlight
