#include "ringlight/output.hpp"

#include "ringlight/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ringlight {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        throw DimensionMismatch("table row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw InvalidArgument("no column '" + name + "'");
    }
    const auto c = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        double v = std::numeric_limits<double>::quiet_NaN();
        const auto& cell = row[c];
        std::from_chars(cell.data(), cell.data() + cell.size(), v);
        out.push_back(v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const std::string& path, const Table& table,
               const std::vector<std::pair<std::string, std::string>>& header) {
    std::ostringstream out;
    for (const auto& [k, v] : header) {
        out << "# " << k << '=' << v << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
    write_text(path, out.str());
}

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 55.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v) const {
        if (log) {
            v = std::log10(v);
        }
        return (v - lo) / (hi - lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::ceil(lo - 1e-9); e <= hi + 1e-9; e += 1.0) {
                out.push_back(std::pow(10.0, e));
            }
            return out;
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double f : {1.0, 2.0, 5.0, 10.0}) {
            if (f * mag >= raw) {
                step = f * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
            out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
        }
        return out;
    }
};

Axis make_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v) || (log && v <= 0.0)) {
            continue;
        }
        const double w = log ? std::log10(v) : v;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        lo -= 0.5;
        hi += 0.5;
    } else if (!log) {
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
}

void frame(std::ostringstream& out, const std::string& title, const std::string& xl,
           const std::string& yl, const Axis& ax, const Axis& ay, double plot_right) {
    const double pw = plot_right - left;
    const double ph = height - top - bottom;
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double t : ax.ticks()) {
        const double x = left + ax.map(t) * pw;
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"#333\"/>"
            << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18)
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = top + ph - ay.map(t) * ph;
        out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << left
            << "\" y2=\"" << num(y) << "\" stroke=\"#333\"/>"
            << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
    }
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12)
        << "\" text-anchor=\"middle\">" << esc(xl) << "</text>\n";
    out << "<text transform=\"translate(16," << num(top + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << esc(yl) << "</text>\n";
    out << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << esc(title) << "</text>\n";
}

std::string open_svg() {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out.str();
}

// Perceptually ordered dark-blue to yellow ramp.
std::string ramp(double t) {
    static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

} // namespace

std::string render_svg(const LinePlot& plot) {
    std::vector<double> xs, ys;
    for (const auto& s : plot.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = make_axis(xs, plot.log_x);
    const Axis ay = make_axis(ys, plot.log_y);
    const double plot_right = width - right;
    const double pw = plot_right - left;
    const double ph = height - top - bottom;

    std::ostringstream out;
    out << open_svg();
    frame(out, plot.title, plot.x_label, plot.y_label, ax, ay, plot_right);
    auto valid = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!plot.log_x || x > 0) && (!plot.log_y || y > 0);
    };
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* color = palette[k % 10];
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (valid(s.x[i], s.y[i])) {
                    out << "<circle cx=\"" << num(left + ax.map(s.x[i]) * pw) << "\" cy=\""
                        << num(top + ph - ay.map(s.y[i]) * ph) << "\" r=\"2.5\" fill=\"" << color
                        << "\"/>\n";
                }
            }
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (valid(s.x[i], s.y[i])) {
                    out << num(left + ax.map(s.x[i]) * pw) << ',' << num(top + ph - ay.map(s.y[i]) * ph)
                        << ' ';
                }
            }
            out << "\"/>\n";
        }
        const double ly = top + 12 + 16 * static_cast<double>(k);
        out << "<rect x=\"" << num(plot_right + 10) << "\" y=\"" << num(ly - 8) << "\" width=\"12\" height=\"3\" fill=\""
            << color << "\"/><text x=\"" << num(plot_right + 27) << "\" y=\"" << num(ly) << "\">"
            << esc(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_svg(const Heatmap& map) {
    const Axis ax = make_axis(map.x, false);
    const Axis ay = make_axis(map.y, false);
    const double plot_right = width - right;
    const double pw = plot_right - left;
    const double ph = height - top - bottom;
    double vlo = std::numeric_limits<double>::infinity();
    double vhi = -vlo;
    for (const auto& row : map.values) {
        for (double v : row) {
            if (std::isfinite(v)) {
                vlo = std::min(vlo, v);
                vhi = std::max(vhi, v);
            }
        }
    }
    if (!(vhi > vlo)) {
        vhi = vlo + 1.0;
    }

    std::ostringstream out;
    out << open_svg();
    // cell edges halfway between neighbouring coordinates
    auto edges = [](const std::vector<double>& c) {
        std::vector<double> e(c.size() + 1);
        if (c.size() == 1) {
            e[0] = c[0] - 0.5;
            e[1] = c[0] + 0.5;
            return e;
        }
        for (std::size_t i = 1; i < c.size(); ++i) {
            e[i] = 0.5 * (c[i - 1] + c[i]);
        }
        e.front() = c.front() - (e[1] - c.front());
        e.back() = c.back() + (c.back() - e[c.size() - 1]);
        return e;
    };
    Axis bx = ax, by = ay;
    const auto ex = edges(map.x);
    const auto ey = edges(map.y);
    bx.lo = std::min(ex.front(), ex.back());
    bx.hi = std::max(ex.front(), ex.back());
    by.lo = std::min(ey.front(), ey.back());
    by.hi = std::max(ey.front(), ey.back());
    for (std::size_t r = 0; r < map.values.size() && r < map.y.size(); ++r) {
        for (std::size_t c = 0; c < map.values[r].size() && c < map.x.size(); ++c) {
            const double x0 = left + bx.map(std::min(ex[c], ex[c + 1])) * pw;
            const double x1 = left + bx.map(std::max(ex[c], ex[c + 1])) * pw;
            const double y0 = top + ph - by.map(std::max(ey[r], ey[r + 1])) * ph;
            const double y1 = top + ph - by.map(std::min(ey[r], ey[r + 1])) * ph;
            out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.3)
                << "\" height=\"" << num(y1 - y0 + 0.3) << "\" fill=\""
                << ramp((map.values[r][c] - vlo) / (vhi - vlo)) << "\"/>\n";
        }
    }
    frame(out, map.title, map.x_label, map.y_label, bx, by, plot_right);
    for (int i = 0; i <= 20; ++i) {
        const double t = i / 20.0;
        out << "<rect x=\"" << num(plot_right + 20) << "\" y=\"" << num(top + ph * (1 - t) - ph / 20)
            << "\" width=\"16\" height=\"" << num(ph / 20 + 0.5) << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
    out << "<text x=\"" << num(plot_right + 42) << "\" y=\"" << num(top + 8) << "\">" << tick_label(vhi)
        << "</text><text x=\"" << num(plot_right + 42) << "\" y=\"" << num(top + ph) << "\">"
        << tick_label(vlo) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace ringlight
