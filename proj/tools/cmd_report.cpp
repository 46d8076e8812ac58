#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "hivemon/errors.hpp"
#include "hivemon/report.hpp"
#include "hivemon/telemetry/store.hpp"

namespace hivemon::cli {

namespace {

struct ReportOptions {
    std::string data_dir;
    std::string hive_id;
    std::string samples_path;
    std::string out_dir = "report";
    std::string mode = "raw";
    int year = 0;
};

std::vector<HiveSample> load_samples(const ReportOptions& opts) {
    if (!opts.samples_path.empty()) {
        std::ifstream in(opts.samples_path);
        if (!in) throw IoError("cannot open samples file: " + opts.samples_path);
        std::vector<HiveSample> samples;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                samples.push_back(sample_from_json(line));
            } catch (const FormatError& e) {
                throw FormatError(opts.samples_path + ":" + std::to_string(line_no) + ": " +
                                  e.what());
            }
        }
        return samples;
    }
    HiveStore store{std::filesystem::path(opts.data_dir)};
    return store.samples(opts.hive_id);
}

void run_report(const ReportOptions& opts) {
    std::vector<HiveSample> samples = load_samples(opts);
    if (opts.mode == "hourly") {
        int year = opts.year;
        if (year == 0 && !samples.empty()) {
            // default to the year of the newest sample
            for (int y = 1970; y <= 2200; ++y) {
                const auto [begin, end] = year_range_utc(y);
                if (samples.back().timestamp >= begin && samples.back().timestamp < end) {
                    year = y;
                    break;
                }
            }
        }
        const auto [begin, end] = year_range_utc(year);
        std::vector<HiveSample> in_year;
        for (const HiveSample& s : samples) {
            if (s.timestamp >= begin && s.timestamp < end) in_year.push_back(s);
        }
        samples = downsample_hourly(in_year);
    }

    if (samples.empty()) {
        std::cerr << "warning: no samples to report; emitting empty series\n";
    }

    const auto out_dir = std::filesystem::path(opts.out_dir);
    std::filesystem::create_directories(out_dir);
    for (const MeasurementSeries& series : measurement_series(samples)) {
        const auto csv_path = out_dir / (series.name + ".csv");
        {
            std::ofstream out(csv_path);
            if (!out) throw IoError("cannot write " + csv_path.string());
            write_series_csv(series, out);
        }
        const auto svg_path = out_dir / (series.name + ".svg");
        {
            std::ofstream out(svg_path);
            if (!out) throw IoError("cannot write " + svg_path.string());
            write_series_svg(series, out);
        }
        std::cout << series.name << ": " << series.points.size() << " points -> "
                  << csv_path.string() << ", " << svg_path.string() << '\n';
    }
}

}  // namespace

void setup_report(CLI::App& app) {
    auto opts = std::make_shared<ReportOptions>();
    CLI::App* cmd = app.add_subcommand(
        "report", "Emit per-measurement series files and chart images from stored samples");
    cmd->add_option("--data-dir", opts->data_dir, "Telemetry store directory");
    cmd->add_option("--hive", opts->hive_id, "Hive id inside the store");
    cmd->add_option("--samples", opts->samples_path,
                    "Read samples from a JSONL file instead of a store");
    cmd->add_option("--out", opts->out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--mode", opts->mode, "raw (every sample) or hourly (downsampled)")
        ->check(CLI::IsMember({"raw", "hourly"}))
        ->capture_default_str();
    cmd->add_option("--year", opts->year,
                    "Calendar year for hourly mode (default: year of the newest sample)");
    cmd->callback([opts] {
        if (opts->samples_path.empty() && (opts->data_dir.empty() || opts->hive_id.empty())) {
            throw ValidationError("report needs --samples or both --data-dir and --hive");
        }
        run_report(*opts);
    });
}

}  // namespace hivemon::cli
