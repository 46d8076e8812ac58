#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hivemon/analytics.hpp"

namespace hivemon {

/// One telemetry record: the ten hive measurements plus a UTC timestamp.
/// JSON field names match these member names verbatim.
struct HiveSample {
    std::int64_t timestamp = 0;  // UTC seconds
    double temperature_f = 0.0;
    double humidity_pct = 0.0;
    double cpu_temp_c = 0.0;
    double gpu_temp_c = 0.0;
    long bees_deck = 0;
    long bees_leaving = 0;
    long bees_arriving = 0;
    std::optional<double> avg_size_mm;
    long pollen_count = 0;
    long mite_count = 0;

    bool operator==(const HiveSample&) const = default;
};

/// Throws ValidationError listing every violated field.
void validate(const HiveSample& sample);

/// Environment readings that accompany a video summary in an upload.
struct EnvironmentReadings {
    double temperature_f = 0.0;
    double humidity_pct = 0.0;
    double cpu_temp_c = 0.0;
    double gpu_temp_c = 0.0;
};

/// Build the upload payload for one processed video.
HiveSample sample_from_summary(const VideoSummary& summary, const EnvironmentReadings& env,
                               std::int64_t timestamp);

std::string sample_to_json(const HiveSample& sample);
HiveSample sample_from_json(const std::string& text);  // throws FormatError

/// Registered hive: identity plus the monitoring system's auth key.
struct HiveInfo {
    std::string id;
    std::string name;
    std::string location;
    std::string key;

    bool operator==(const HiveInfo&) const = default;
};

/// Self-reported network descriptor of a monitoring system (free-form
/// string fields: hostname, addresses, ...).
using NetworkInfo = std::map<std::string, std::string>;

}  // namespace hivemon
