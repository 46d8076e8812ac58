#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "hivemon/errors.hpp"
#include "hivemon/simulator.hpp"
#include "hivemon/stream_io.hpp"

namespace hivemon::cli {

namespace {

struct SimulateOptions {
    SimConfig config;
    std::string out_dir = ".";
    std::string name = "sim";
};

void run_simulate(const SimulateOptions& opts) {
    const SimOutput sim = generate(opts.config);

    const auto out_dir = std::filesystem::path(opts.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto stream_path = out_dir / (opts.name + ".stream.txt");
    const auto truth_path = out_dir / (opts.name + ".truth.csv");
    {
        std::ofstream out(stream_path);
        if (!out) throw IoError("cannot write " + stream_path.string());
        write_detection_stream(sim.stream, out);
    }
    {
        std::ofstream out(truth_path);
        if (!out) throw IoError("cannot write " + truth_path.string());
        write_ground_truth(sim.truth, out);
    }

    const VideoSummary truth = truth_summary(sim.truth);
    std::cout << "simulated " << sim.truth.size() << " bees over " << sim.stream.size()
              << " frames (arriving " << truth.arriving << ", leaving " << truth.leaving
              << ", deck " << truth.deck << ", new " << truth.new_count << ")\n"
              << "stream: " << stream_path.string() << "\ntruth:  " << truth_path.string()
              << '\n';
}

}  // namespace

void setup_simulate(CLI::App& app) {
    auto opts = std::make_shared<SimulateOptions>();
    CLI::App* cmd = app.add_subcommand(
        "simulate", "Generate a synthetic detection stream with exact ground truth");
    add_geometry_options(*cmd, opts->config.geom);
    cmd->add_option("--out", opts->out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--name", opts->name, "Base name for the emitted files")
        ->capture_default_str();
    cmd->add_option("--seed", opts->config.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--bees", opts->config.bee_count, "Number of bees to spawn")
        ->capture_default_str();
    cmd->add_option("--duration", opts->config.duration_s, "Video length in seconds")
        ->capture_default_str();
    cmd->add_option("--fps", opts->config.fps, "Frames per second")->capture_default_str();
    cmd->add_option_function<std::string>(
           "--speed",
           [opts](const std::string& text) {
               const auto [lo, hi] = parse_range(text);
               opts->config.speed_px_per_frame = {lo, hi};
           },
           "Per-frame speed range in px as LO:HI")
        ->default_str("4:12");
    cmd->add_option("--jitter", opts->config.jitter_px,
                    "Std-dev of detection position noise (px)")
        ->capture_default_str();
    cmd->add_option("--dropout", opts->config.dropout_prob,
                    "Per-frame probability a visible bee goes undetected")
        ->capture_default_str();
    cmd->add_option("--spawn-top", opts->config.spawn.top, "Spawn weight: hive side")
        ->capture_default_str();
    cmd->add_option("--spawn-bottom", opts->config.spawn.bottom, "Spawn weight: outside")
        ->capture_default_str();
    cmd->add_option("--spawn-deck", opts->config.spawn.deck, "Spawn weight: mid-frame deck")
        ->capture_default_str();
    cmd->add_option_function<std::string>(
           "--worker-len",
           [opts](const std::string& text) {
               const auto [lo, hi] = parse_range(text);
               opts->config.worker_len_px = {lo, hi};
           },
           "Worker body length range in px as LO:HI")
        ->default_str("70:84");
    cmd->add_option_function<std::string>(
           "--drone-len",
           [opts](const std::string& text) {
               const auto [lo, hi] = parse_range(text);
               opts->config.drone_len_px = {lo, hi};
           },
           "Drone body length range in px as LO:HI")
        ->default_str("97:110");
    cmd->add_option("--drone-fraction", opts->config.drone_fraction,
                    "Fraction of bees drawn from the drone size mode")
        ->capture_default_str();
    cmd->add_option("--min-separation", opts->config.min_separation_px,
                    "Schedule bees to keep at least this midpoint separation (px, 0 = off)")
        ->capture_default_str();
    cmd->callback([opts] { run_simulate(*opts); });
}

}  // namespace hivemon::cli
