#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "hivemon/analytics.hpp"
#include "hivemon/errors.hpp"
#include "hivemon/eval.hpp"
#include "hivemon/stream_io.hpp"

namespace hivemon::cli {

namespace {

struct EvalOptions {
    std::string truth_path;
    std::string log_path;
    std::string secondary_path;
    std::string tracking_table_path;
    std::string pollen_table_path;
    std::string out_path;
    SecondaryThresholds thresholds;
};

std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open ") + what + ": " + path);
    return in;
}

void run_eval(const EvalOptions& opts) {
    MetricsReport report;
    if (!opts.tracking_table_path.empty()) {
        auto tracking_in = open_input(opts.tracking_table_path, "tracking table");
        const auto tracking = parse_tracking_table(tracking_in);
        std::vector<PollenVideoCounts> pollen;
        if (!opts.pollen_table_path.empty()) {
            auto pollen_in = open_input(opts.pollen_table_path, "pollen table");
            pollen = parse_pollen_table(pollen_in);
        }
        report = evaluate_tables(tracking, pollen);
    } else if (!opts.truth_path.empty() && !opts.log_path.empty()) {
        auto truth_in = open_input(opts.truth_path, "ground truth");
        const auto truth = parse_ground_truth(truth_in);
        auto log_in = open_input(opts.log_path, "track log");
        const auto profiles = parse_track_log(log_in);
        if (!opts.secondary_path.empty()) {
            auto sec_in = open_input(opts.secondary_path, "secondary detections");
            const ProfileFlags flags = associate_secondary(
                profiles, parse_secondary_detections(sec_in), opts.thresholds);
            report = compare_runs(truth, profiles, &flags);
        } else {
            report = compare_runs(truth, profiles);
        }
    } else {
        throw ValidationError(
            "eval needs either --tracking-table (with optional --pollen-table) "
            "or --truth together with --log");
    }

    if (opts.out_path.empty()) {
        write_metrics_report(report, std::cout);
    } else {
        std::ofstream out(opts.out_path);
        if (!out) throw IoError("cannot write " + opts.out_path);
        write_metrics_report(report, out);
        std::cout << "report written to " << opts.out_path << '\n';
    }
}

}  // namespace

void setup_eval(CLI::App& app) {
    auto opts = std::make_shared<EvalOptions>();
    CLI::App* cmd = app.add_subcommand(
        "eval", "Score a tracker run against ground truth, or pre-tabulated counts");
    cmd->add_option("--truth", opts->truth_path, "Ground truth CSV");
    cmd->add_option("--log", opts->log_path, "Track log CSV produced by `track`");
    cmd->add_option("--secondary", opts->secondary_path,
                    "Secondary detections to derive pollen/mite counts");
    cmd->add_option("--tracking-table", opts->tracking_table_path,
                    "Per-video arriving/leaving count table");
    cmd->add_option("--pollen-table", opts->pollen_table_path,
                    "Per-video pollen count table (adds precision/recall/F1)");
    cmd->add_option("--out", opts->out_path, "Write the report here instead of stdout");
    cmd->add_option("--threshold-pollen", opts->thresholds.pollen,
                    "Pollen confidence threshold")
        ->capture_default_str();
    cmd->add_option("--threshold-mite", opts->thresholds.mite, "Mite confidence threshold")
        ->capture_default_str();
    cmd->callback([opts] { run_eval(*opts); });
}

}  // namespace hivemon::cli
