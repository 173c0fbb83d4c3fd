#include "metrology/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace metrology {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#d62728", "#9467bd", "#2ca02c",
                          "#8c564b", "#e377c2", "#7f7f7f"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo < hi)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

class Canvas {
  public:
    Canvas(Range x, Range y, bool log_y) : x_(x), y_(y), log_y_(log_y) {}

    double px(double x) const {
        return kMarginLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        if (log_y_) y = std::log10(y);
        return kHeight - kMarginBottom -
               (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kMarginTop - kMarginBottom);
    }

    void axes(std::ostringstream& out, const std::string& title, const std::string& x_label,
              const std::string& y_label) const {
        out << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='"
            << kWidth - kMarginLeft - kMarginRight << "' height='"
            << kHeight - kMarginTop - kMarginBottom << "' fill='none' stroke='#333'/>\n";
        out << "<text x='" << (kMarginLeft + kWidth - kMarginRight) / 2 << "' y='22' "
            << "text-anchor='middle' font-size='15'>" << title << "</text>\n";
        out << "<text x='" << (kMarginLeft + kWidth - kMarginRight) / 2 << "' y='"
            << kHeight - 12 << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
        out << "<text x='18' y='" << (kMarginTop + kHeight - kMarginBottom) / 2
            << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
            << (kMarginTop + kHeight - kMarginBottom) / 2 << ")'>" << y_label << "</text>\n";
        for (int i = 0; i <= 4; ++i) {
            const double tx = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            out << "<text x='" << px(tx) << "' y='" << kHeight - kMarginBottom + 18
                << "' text-anchor='middle' font-size='11'>" << fmt(tx) << "</text>\n";
            const double ty = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            out << "<text x='" << kMarginLeft - 8 << "' y='"
                << kHeight - kMarginBottom -
                       (ty - y_.lo) / (y_.hi - y_.lo) * (kHeight - kMarginTop - kMarginBottom) + 4
                << "' text-anchor='end' font-size='11'>"
                << (log_y_ ? "1e" + fmt(ty) : fmt(ty)) << "</text>\n";
        }
    }

    void legend(std::ostringstream& out, std::span<const PlotSeries> series) const {
        double y = kMarginTop + 12;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const char* color = kPalette[i % std::size(kPalette)];
            out << "<line x1='" << kWidth - kMarginRight + 10 << "' y1='" << y << "' x2='"
                << kWidth - kMarginRight + 34 << "' y2='" << y << "' stroke='" << color
                << "' stroke-width='2'/>\n";
            out << "<text x='" << kWidth - kMarginRight + 40 << "' y='" << y + 4
                << "' font-size='11'>" << series[i].label << "</text>\n";
            y += 18;
        }
    }

  private:
    Range x_, y_;
    bool log_y_;
};

bool usable(double y, bool log_y) { return std::isfinite(y) && (!log_y || y > 0.0); }

}  // namespace

std::string render_line_plot(std::span<const PlotSeries> series, const std::string& title,
                             const std::string& x_label, const std::string& y_label, bool log_y) {
    Range xr, yr;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.y[i], log_y)) continue;
            xr.include(s.x[i]);
            yr.include(log_y ? std::log10(s.y[i]) : s.y[i]);
        }
    }
    if (!(xr.lo <= xr.hi)) xr = Range{0.0, 1.0};
    if (!(yr.lo <= yr.hi)) yr = Range{0.0, 1.0};
    xr.pad();
    yr.pad();
    const Canvas canvas(xr, yr, log_y);

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    canvas.axes(out, title, x_label, y_label);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const PlotSeries& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (!usable(s.y[j], log_y)) continue;
            out << canvas.px(s.x[j]) << ',' << canvas.py(s.y[j]) << ' ';
        }
        out << "'/>\n";
    }
    canvas.legend(out, series);
    out << "</svg>\n";
    return out.str();
}

std::string render_scatter_plot(std::span<const PlotSeries> series,
                                std::span<const std::vector<double>> y_errors,
                                const std::string& title, const std::string& x_label,
                                const std::string& y_label) {
    Range xr, yr;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const PlotSeries& s = series[i];
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (!usable(s.y[j], false)) continue;
            xr.include(s.x[j]);
            const double err =
                (i < y_errors.size() && j < y_errors[i].size() && std::isfinite(y_errors[i][j]))
                    ? y_errors[i][j]
                    : 0.0;
            yr.include(s.y[j] - err);
            yr.include(s.y[j] + err);
        }
    }
    if (!(xr.lo <= xr.hi)) xr = Range{0.0, 1.0};
    if (!(yr.lo <= yr.hi)) yr = Range{0.0, 1.0};
    xr.pad();
    yr.pad();
    const Canvas canvas(xr, yr, false);

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    canvas.axes(out, title, x_label, y_label);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const PlotSeries& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            if (!usable(s.y[j], false)) continue;
            const double cx = canvas.px(s.x[j]);
            const double cy = canvas.py(s.y[j]);
            if (i < y_errors.size() && j < y_errors[i].size() && std::isfinite(y_errors[i][j]) &&
                y_errors[i][j] > 0.0) {
                out << "<line x1='" << cx << "' y1='" << canvas.py(s.y[j] - y_errors[i][j])
                    << "' x2='" << cx << "' y2='" << canvas.py(s.y[j] + y_errors[i][j])
                    << "' stroke='" << color << "' stroke-width='1'/>\n";
            }
            out << "<circle cx='" << cx << "' cy='" << cy << "' r='3' fill='" << color << "'/>\n";
        }
    }
    canvas.legend(out, series);
    out << "</svg>\n";
    return out.str();
}

}  // namespace metrology
