#include "hivemon/telemetry/sample.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hivemon/errors.hpp"

namespace hivemon {

using nlohmann::json;

void validate(const HiveSample& sample) {
    std::string bad;
    const auto flag = [&bad](const char* name) {
        if (!bad.empty()) bad += ", ";
        bad += name;
    };
    if (sample.timestamp < 0) flag("timestamp");
    if (!std::isfinite(sample.temperature_f)) flag("temperature_f");
    if (!std::isfinite(sample.humidity_pct) || sample.humidity_pct < 0.0 ||
        sample.humidity_pct > 100.0) {
        flag("humidity_pct");
    }
    if (!std::isfinite(sample.cpu_temp_c)) flag("cpu_temp_c");
    if (!std::isfinite(sample.gpu_temp_c)) flag("gpu_temp_c");
    if (sample.bees_deck < 0) flag("bees_deck");
    if (sample.bees_leaving < 0) flag("bees_leaving");
    if (sample.bees_arriving < 0) flag("bees_arriving");
    if (sample.avg_size_mm && (!std::isfinite(*sample.avg_size_mm) || *sample.avg_size_mm < 0.0)) {
        flag("avg_size_mm");
    }
    if (sample.pollen_count < 0) flag("pollen_count");
    if (sample.mite_count < 0) flag("mite_count");
    if (!bad.empty()) {
        throw ValidationError("invalid sample fields: " + bad);
    }
}

HiveSample sample_from_summary(const VideoSummary& summary, const EnvironmentReadings& env,
                               std::int64_t timestamp) {
    HiveSample sample;
    sample.timestamp = timestamp;
    sample.temperature_f = env.temperature_f;
    sample.humidity_pct = env.humidity_pct;
    sample.cpu_temp_c = env.cpu_temp_c;
    sample.gpu_temp_c = env.gpu_temp_c;
    sample.bees_deck = summary.deck;
    sample.bees_leaving = summary.leaving;
    sample.bees_arriving = summary.arriving;
    sample.avg_size_mm = summary.mean_size_mm;
    sample.pollen_count = summary.pollen_tracks;
    sample.mite_count = summary.mite_tracks;
    return sample;
}

namespace {

json sample_to_json_object(const HiveSample& s) {
    json j{
        {"timestamp", s.timestamp},
        {"temperature_f", s.temperature_f},
        {"humidity_pct", s.humidity_pct},
        {"cpu_temp_c", s.cpu_temp_c},
        {"gpu_temp_c", s.gpu_temp_c},
        {"bees_deck", s.bees_deck},
        {"bees_leaving", s.bees_leaving},
        {"bees_arriving", s.bees_arriving},
        {"pollen_count", s.pollen_count},
        {"mite_count", s.mite_count},
    };
    if (s.avg_size_mm) {
        j["avg_size_mm"] = *s.avg_size_mm;
    } else {
        j["avg_size_mm"] = nullptr;
    }
    return j;
}

}  // namespace

std::string sample_to_json(const HiveSample& sample) {
    return sample_to_json_object(sample).dump();
}

HiveSample sample_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("sample is not valid JSON: ") + e.what());
    }
    try {
        HiveSample s;
        s.timestamp = j.at("timestamp").get<std::int64_t>();
        s.temperature_f = j.at("temperature_f").get<double>();
        s.humidity_pct = j.at("humidity_pct").get<double>();
        s.cpu_temp_c = j.at("cpu_temp_c").get<double>();
        s.gpu_temp_c = j.at("gpu_temp_c").get<double>();
        s.bees_deck = j.at("bees_deck").get<long>();
        s.bees_leaving = j.at("bees_leaving").get<long>();
        s.bees_arriving = j.at("bees_arriving").get<long>();
        if (j.contains("avg_size_mm") && !j["avg_size_mm"].is_null()) {
            s.avg_size_mm = j["avg_size_mm"].get<double>();
        }
        s.pollen_count = j.at("pollen_count").get<long>();
        s.mite_count = j.at("mite_count").get<long>();
        return s;
    } catch (const json::exception& e) {
        throw FormatError(std::string("sample JSON missing or mistyped field: ") + e.what());
    }
}

}  // namespace hivemon
