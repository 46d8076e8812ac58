#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hivemon/errors.hpp"

namespace cli = hivemon::cli;

namespace hivemon::cli {

std::pair<double, double> parse_dimensions(const std::string& text) {
    const auto sep = text.find('x');
    if (sep == std::string::npos) {
        throw CLI::ValidationError("expected WxH, got '" + text + "'");
    }
    try {
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected WxH numbers, got '" + text + "'");
    }
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto sep = text.find(':');
    if (sep == std::string::npos) {
        throw CLI::ValidationError("expected LO:HI, got '" + text + "'");
    }
    try {
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected LO:HI numbers, got '" + text + "'");
    }
}

void add_geometry_options(CLI::App& cmd, HiveGeometry& geom) {
    cmd.add_option_function<std::string>(
           "--geometry",
           [&geom](const std::string& text) {
               const auto [w, h] = parse_dimensions(text);
               geom.frame_w = w;
               geom.frame_h = h;
           },
           "Frame size in pixels as WxH")
        ->default_str("640x420");
    cmd.add_option_function<std::string>(
           "--container",
           [&geom](const std::string& text) {
               const auto [w, h] = parse_dimensions(text);
               geom.container_w_mm = w;
               geom.container_h_mm = h;
           },
           "Physical work area in millimeters as WxH")
        ->default_str("110x65");
    cmd.add_option("--arrive-line", geom.arrive_line, "Arrive trigger y (px)")
        ->capture_default_str();
    cmd.add_option("--leave-line", geom.leave_line, "Leave trigger y (px)")
        ->capture_default_str();
    cmd.add_option("--tolerance", geom.match_tolerance, "Matching tolerance (px)")
        ->capture_default_str();
}

}  // namespace hivemon::cli

int main(int argc, char** argv) {
    CLI::App app{"Hive-entrance monitoring toolkit: track detection streams, simulate "
                 "ground-truth scenarios, evaluate runs, report measurements and serve "
                 "hive telemetry."};
    app.set_config("--config", "", "Read options from an INI/TOML config file");
    app.require_subcommand(1);

    cli::setup_track(app);
    cli::setup_simulate(app);
    cli::setup_eval(app);
    cli::setup_report(app);
    cli::setup_serve(app);

    try {
        app.parse(argc, argv);
        return cli::kExitOk;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const hivemon::FormatError& e) {
        std::cerr << "error (format): " << e.what() << '\n';
        return cli::kExitFormat;
    } catch (const hivemon::IoError& e) {
        std::cerr << "error (io): " << e.what() << '\n';
        return cli::kExitIo;
    } catch (const hivemon::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitOther;
    }
}
