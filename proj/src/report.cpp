#include "hivemon/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hivemon/errors.hpp"
#include "hivemon/stream_io.hpp"

namespace hivemon {

std::vector<MeasurementSeries> measurement_series(const std::vector<HiveSample>& samples) {
    std::vector<MeasurementSeries> series{
        {"temperature_f", {}}, {"humidity_pct", {}},  {"cpu_temp_c", {}},
        {"gpu_temp_c", {}},    {"bees_deck", {}},     {"bees_leaving", {}},
        {"bees_arriving", {}}, {"avg_size_mm", {}},   {"pollen_count", {}},
        {"mite_count", {}},
    };
    for (const HiveSample& s : samples) {
        series[0].points.emplace_back(s.timestamp, s.temperature_f);
        series[1].points.emplace_back(s.timestamp, s.humidity_pct);
        series[2].points.emplace_back(s.timestamp, s.cpu_temp_c);
        series[3].points.emplace_back(s.timestamp, s.gpu_temp_c);
        series[4].points.emplace_back(s.timestamp, static_cast<double>(s.bees_deck));
        series[5].points.emplace_back(s.timestamp, static_cast<double>(s.bees_leaving));
        series[6].points.emplace_back(s.timestamp, static_cast<double>(s.bees_arriving));
        if (s.avg_size_mm) series[7].points.emplace_back(s.timestamp, *s.avg_size_mm);
        series[8].points.emplace_back(s.timestamp, static_cast<double>(s.pollen_count));
        series[9].points.emplace_back(s.timestamp, static_cast<double>(s.mite_count));
    }
    return series;
}

void write_series_csv(const MeasurementSeries& series, std::ostream& sink) {
    sink << "timestamp," << series.name << '\n';
    for (const auto& [ts, value] : series.points) {
        sink << ts << ',' << io::format_double(value) << '\n';
    }
    if (!sink) throw IoError("write failure on series sink");
}

void write_series_svg(const MeasurementSeries& series, std::ostream& sink) {
    constexpr double width = 960.0, height = 360.0;
    constexpr double left = 60.0, right = 20.0, top = 24.0, bottom = 32.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    sink << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
         << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << left << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"14\">"
         << series.name << "</text>\n"
         << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
         << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

    if (series.points.empty()) {
        sink << "<text x=\"" << left + plot_w / 2 - 30 << "\" y=\"" << top + plot_h / 2
             << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#888\">no data</text>\n"
             << "</svg>\n";
        if (!sink) throw IoError("write failure on svg sink");
        return;
    }

    double t_min = static_cast<double>(series.points.front().first);
    double t_max = static_cast<double>(series.points.back().first);
    if (t_max <= t_min) t_max = t_min + 1.0;
    double v_min = series.points.front().second;
    double v_max = v_min;
    for (const auto& [ts, value] : series.points) {
        v_min = std::min(v_min, value);
        v_max = std::max(v_max, value);
    }
    if (v_max <= v_min) v_max = v_min + 1.0;

    const auto px = [&](std::int64_t ts) {
        return left + (static_cast<double>(ts) - t_min) / (t_max - t_min) * plot_w;
    };
    const auto py = [&](double value) {
        return top + (1.0 - (value - v_min) / (v_max - v_min)) * plot_h;
    };

    sink << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& [ts, value] : series.points) {
        sink << px(ts) << ',' << py(value) << ' ';
    }
    sink << "\"/>\n";
    sink << "<text x=\"4\" y=\"" << top + 10 << "\" font-family=\"sans-serif\" font-size=\"11\">"
         << io::format_double(v_max) << "</text>\n"
         << "<text x=\"4\" y=\"" << top + plot_h
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << io::format_double(v_min)
         << "</text>\n"
         << "</svg>\n";
    if (!sink) throw IoError("write failure on svg sink");
}

}  // namespace hivemon
