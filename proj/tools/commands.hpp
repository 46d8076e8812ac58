#pragma once

#include <string>
#include <utility>

#include <CLI11.hpp>

#include "hivemon/geometry.hpp"

namespace hivemon::cli {

// Exit codes, also documented in the README:
//   0 success, 2 input format error, 3 validation/domain error,
//   4 I/O error, 1 anything else (CLI usage errors keep CLI11's codes).
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;

/// Registers the shared geometry flags (defaults: 640x420 frame, lines at
/// 140/280, 50 px tolerance, 110x65 mm work area) onto a subcommand.
void add_geometry_options(CLI::App& cmd, HiveGeometry& geom);

/// Applies "WxH" strings such as 640x420 or 110x65.
std::pair<double, double> parse_dimensions(const std::string& text);

/// "LO:HI" range strings such as 4:12.
std::pair<double, double> parse_range(const std::string& text);

/// Whole file with trailing whitespace trimmed (auth key files).
std::string read_key_file(const std::string& path);

// Each setup_* adds one subcommand; the work happens in its callback.
void setup_track(CLI::App& app);
void setup_simulate(CLI::App& app);
void setup_eval(CLI::App& app);
void setup_report(CLI::App& app);
void setup_serve(CLI::App& app);

}  // namespace hivemon::cli
