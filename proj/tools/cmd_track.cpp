#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "hivemon/analytics.hpp"
#include "hivemon/errors.hpp"
#include "hivemon/stream_io.hpp"
#include "hivemon/telemetry/sample.hpp"
#include "hivemon/tracker.hpp"

namespace hivemon::cli {

namespace {

using nlohmann::json;

struct TrackOptions {
    std::vector<std::string> streams;
    HiveGeometry geom;
    std::string out_dir = ".";
    std::string secondary_path;
    SecondaryThresholds thresholds;
    double interval_s = 330.0;  // deployment cadence between videos
    std::string telemetry_url;
    std::string hive_id;
    std::string key_file;
    std::int64_t timestamp = 0;  // 0: use wall clock
    EnvironmentReadings env;
};

json summary_to_json(const VideoSummary& summary) {
    json j{{"arriving", summary.arriving},
           {"leaving", summary.leaving},
           {"deck", summary.deck},
           {"new", summary.new_count},
           {"pollen_tracks", summary.pollen_tracks},
           {"mite_tracks", summary.mite_tracks},
           {"total_tracks", summary.total_tracks}};
    if (summary.mean_size_mm) {
        j["mean_size_mm"] = *summary.mean_size_mm;
    } else {
        j["mean_size_mm"] = nullptr;
    }
    return j;
}

void upload_summary(const TrackOptions& opts, const VideoSummary& summary,
                    std::int64_t timestamp) {
    std::string url = opts.telemetry_url;
    std::string path_prefix;
    // split scheme://host:port from any path prefix
    const auto scheme = url.find("://");
    const auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        path_prefix = url.substr(slash);
        url = url.substr(0, slash);
        if (path_prefix == "/") path_prefix.clear();
    }
    httplib::Client client(url);
    client.set_connection_timeout(5, 0);

    const HiveSample sample = sample_from_summary(summary, opts.env, timestamp);
    const json payload{{"hive", opts.hive_id}, {"sample", json::parse(sample_to_json(sample))}};
    httplib::Headers headers{{"X-Auth-Key", read_key_file(opts.key_file)}};
    const auto res = client.Post(path_prefix + "/api/upload-data", headers, payload.dump(),
                                 "application/json");
    if (!res) {
        throw IoError("telemetry upload failed: cannot reach " + opts.telemetry_url);
    }
    if (res->status != 200) {
        throw IoError("telemetry upload rejected with HTTP " + std::to_string(res->status) +
                      ": " + res->body);
    }
    std::cout << "uploaded sample (sequence " << json::parse(res->body)["sequence"] << ")\n";
}

void track_one(const TrackOptions& opts, const std::string& stream_path,
               std::int64_t timestamp) {
    std::ifstream in(stream_path);
    if (!in) {
        throw IoError("cannot open detection stream: " + stream_path);
    }

    Tracker tracker(opts.geom);
    parse_detection_stream(in, [&](FrameDetections&& frame) { tracker.step(frame); });
    const std::vector<TrackProfile> profiles = tracker.finalize();

    ProfileFlags flags;
    if (!opts.secondary_path.empty()) {
        std::ifstream sec(opts.secondary_path);
        if (!sec) throw IoError("cannot open secondary detections: " + opts.secondary_path);
        flags = associate_secondary(profiles, parse_secondary_detections(sec), opts.thresholds);
    }
    const VideoSummary summary = summarize_video(profiles, flags);

    const auto stem = std::filesystem::path(stream_path).stem().string();
    const auto out_dir = std::filesystem::path(opts.out_dir);
    std::filesystem::create_directories(out_dir);

    const auto log_path = out_dir / (stem + ".tracks.csv");
    {
        std::ofstream log(log_path);
        if (!log) throw IoError("cannot write track log: " + log_path.string());
        write_track_log(profiles, log);
    }
    const auto summary_path = out_dir / (stem + ".summary.json");
    {
        std::ofstream sj(summary_path);
        if (!sj) throw IoError("cannot write summary: " + summary_path.string());
        sj << summary_to_json(summary).dump(2) << '\n';
    }

    std::cout << stem << ": arriving " << summary.arriving << ", leaving " << summary.leaving
              << ", deck " << summary.deck << ", new " << summary.new_count << ", pollen "
              << summary.pollen_tracks << ", mites " << summary.mite_tracks << ", mean size ";
    if (summary.mean_size_mm) {
        std::cout << *summary.mean_size_mm << " mm";
    } else {
        std::cout << "--";
    }
    std::cout << " -> " << log_path.string() << '\n';

    if (!opts.telemetry_url.empty()) {
        upload_summary(opts, summary, timestamp);
    }
}

void run_track(const TrackOptions& opts) {
    std::int64_t timestamp = opts.timestamp;
    if (timestamp == 0) {
        timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
    }
    for (std::size_t i = 0; i < opts.streams.size(); ++i) {
        if (i > 0 && opts.interval_s > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(opts.interval_s));
        }
        track_one(opts, opts.streams[i],
                  timestamp + static_cast<std::int64_t>(i * opts.interval_s));
    }
}

}  // namespace

void setup_track(CLI::App& app) {
    auto opts = std::make_shared<TrackOptions>();
    CLI::App* cmd = app.add_subcommand(
        "track", "Track detection streams into profiles, summaries and optional uploads");
    cmd->add_option("streams", opts->streams, "Detection stream files, processed in order")
        ->required();
    add_geometry_options(*cmd, opts->geom);
    cmd->add_option("--out", opts->out_dir, "Output directory for track logs and summaries")
        ->capture_default_str();
    cmd->add_option("--secondary", opts->secondary_path,
                    "Secondary (pollen/mite) detections file to associate");
    cmd->add_option("--threshold-pollen", opts->thresholds.pollen,
                    "Pollen confidence threshold")
        ->capture_default_str();
    cmd->add_option("--threshold-mite", opts->thresholds.mite, "Mite confidence threshold")
        ->capture_default_str();
    cmd->add_option("--interval", opts->interval_s,
                    "Seconds between successive streams in loop mode (0 disables)")
        ->capture_default_str();
    cmd->add_option("--telemetry-url", opts->telemetry_url,
                    "Upload each summary to this service (e.g. http://host:8089)");
    cmd->add_option("--hive", opts->hive_id, "Hive id for telemetry uploads");
    cmd->add_option("--key-file", opts->key_file, "File holding the hive's auth key");
    cmd->add_option("--timestamp", opts->timestamp,
                    "UTC seconds for the first upload (default: wall clock)");
    cmd->add_option("--env-temperature-f", opts->env.temperature_f,
                    "Hive temperature reading (F)");
    cmd->add_option("--env-humidity-pct", opts->env.humidity_pct, "Hive humidity reading (%)");
    cmd->add_option("--env-cpu-temp-c", opts->env.cpu_temp_c, "CPU temperature (C)");
    cmd->add_option("--env-gpu-temp-c", opts->env.gpu_temp_c, "GPU temperature (C)");
    cmd->callback([opts] {
        if (!opts->telemetry_url.empty() && (opts->hive_id.empty() || opts->key_file.empty())) {
            throw ValidationError("--telemetry-url needs --hive and --key-file");
        }
        validate(opts->geom);
        run_track(*opts);
    });
}

std::string read_key_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read key file: " + path);
    std::string key;
    std::getline(in, key);
    while (!key.empty() && (key.back() == '\r' || key.back() == '\n' || key.back() == ' ')) {
        key.pop_back();
    }
    return key;
}

}  // namespace hivemon::cli
