#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hivemon/telemetry/sample.hpp"

namespace hivemon {

/// One of the ten hive measurements as a (timestamp, value) series.
struct MeasurementSeries {
    std::string name;
    std::vector<std::pair<std::int64_t, double>> points;
};

/// Expand samples into the ten measurement series. Samples without a size
/// estimate contribute no point to avg_size_mm.
std::vector<MeasurementSeries> measurement_series(const std::vector<HiveSample>& samples);

/// timestamp,value rows under a header.
void write_series_csv(const MeasurementSeries& series, std::ostream& sink);

/// Static line-chart image of the series.
void write_series_svg(const MeasurementSeries& series, std::ostream& sink);

}  // namespace hivemon
