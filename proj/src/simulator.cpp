#include "hivemon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hivemon/errors.hpp"

namespace hivemon {

namespace {

// Uniform draws built directly on mt19937_64 output so streams are
// reproducible independent of the standard library's distribution
// implementations.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed) : engine_(seed) {}
    SimRng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{seed, stream};
        engine_.seed(seq);
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double uniform(const Range& r) { return uniform(r.lo, r.hi); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(uniform01() * static_cast<double>(hi - lo + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        // Box-Muller, one value per call.
        const double u1 = std::max(uniform01(), 0x1.0p-53);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

enum class Side { Top, Bottom, Deck, Stay };

struct Waypoint {
    double x = 0.0;
    double y = 0.0;
    std::int64_t dwell_frames = 0;
};

struct BeePlan {
    double half_w = 0.0;
    double half_h = 0.0;
    double speed = 0.0;
    std::int64_t spawn_frame = 0;
    std::uint64_t noise_stream = 0;
    std::vector<Waypoint> waypoints;
};

struct BeeTrace {
    std::int64_t first_frame = 0;
    std::vector<Midpoint> positions;  // noise-free midpoint per visible frame
    std::uint64_t noise_stream = 0;
    double half_w = 0.0;
    double half_h = 0.0;
};

Side pick_spawn_side(SimRng& rng, const SpawnModel& spawn) {
    const double total = spawn.top + spawn.bottom + spawn.deck;
    const double u = rng.uniform01() * total;
    if (u < spawn.top) return Side::Top;
    if (u < spawn.top + spawn.bottom) return Side::Bottom;
    return Side::Deck;
}

Side pick_exit_side(SimRng& rng, Side spawn_side) {
    const double u = rng.uniform01();
    switch (spawn_side) {
        case Side::Top:
            if (u < 0.55) return Side::Bottom;
            if (u < 0.90) return Side::Top;
            return Side::Stay;
        case Side::Bottom:
            if (u < 0.55) return Side::Top;
            if (u < 0.90) return Side::Bottom;
            return Side::Stay;
        default:
            if (u < 0.35) return Side::Top;
            if (u < 0.70) return Side::Bottom;
            return Side::Stay;
    }
}

// spawn point -> optional deck loiter stops -> exit point (or a stay point
// dwelling past the end of the video).
std::vector<Waypoint> build_waypoints(SimRng& rng, const HiveGeometry& geom, double center_x,
                                      double wander, double half_h, Side spawn_side,
                                      Side exit_side, std::int64_t total_frames) {
    const auto wx = [&] { return center_x + rng.uniform(-wander, wander); };
    const auto deck_y = [&] {
        return rng.uniform(geom.arrive_line + 15.0, geom.leave_line - 15.0);
    };
    const double y_top = half_h + 1.0;
    const double y_bottom = geom.frame_h - half_h - 1.0;

    std::vector<Waypoint> waypoints;
    switch (spawn_side) {
        case Side::Top: waypoints.push_back({wx(), y_top, 0}); break;
        case Side::Bottom: waypoints.push_back({wx(), y_bottom, 0}); break;
        default: waypoints.push_back({wx(), deck_y(), 0}); break;
    }

    const bool loiter = spawn_side == Side::Deck || rng.bernoulli(0.5);
    if (loiter) {
        const int stops = static_cast<int>(rng.uniform_int(1, 2));
        for (int s = 0; s < stops; ++s) {
            waypoints.push_back({wx(), deck_y(), rng.uniform_int(4, 16)});
        }
    }

    switch (exit_side) {
        case Side::Top: waypoints.push_back({wx(), -half_h - 4.0, 0}); break;
        case Side::Bottom: waypoints.push_back({wx(), geom.frame_h + half_h + 4.0, 0}); break;
        default: waypoints.push_back({wx(), deck_y(), total_frames}); break;
    }
    return waypoints;
}

// Walks the waypoint polyline at `speed` px/frame and records the midpoint
// for every frame the full box fits inside the frame bounds.
BeeTrace trace_path(const BeePlan& plan, const HiveGeometry& geom, std::int64_t total_frames) {
    BeeTrace trace;
    trace.first_frame = plan.spawn_frame;
    trace.noise_stream = plan.noise_stream;
    trace.half_w = plan.half_w;
    trace.half_h = plan.half_h;

    const auto fits = [&](double x, double y) {
        return x - plan.half_w >= 0.0 && x + plan.half_w <= geom.frame_w &&
               y - plan.half_h >= 0.0 && y + plan.half_h <= geom.frame_h;
    };

    double x = plan.waypoints[0].x;
    double y = plan.waypoints[0].y;
    std::size_t target = 1;
    std::int64_t dwell_left = plan.waypoints[0].dwell_frames;

    for (std::int64_t frame = plan.spawn_frame; frame < total_frames; ++frame) {
        if (!fits(x, y)) break;
        trace.positions.push_back({x, y});

        if (dwell_left > 0) {
            --dwell_left;
            continue;
        }
        if (target >= plan.waypoints.size()) break;  // path exhausted

        double remaining = plan.speed;
        while (remaining > 0.0 && target < plan.waypoints.size()) {
            const Waypoint& wp = plan.waypoints[target];
            const double dx = wp.x - x;
            const double dy = wp.y - y;
            const double dist = std::hypot(dx, dy);
            if (dist <= remaining) {
                x = wp.x;
                y = wp.y;
                remaining -= dist;
                dwell_left = wp.dwell_frames;
                ++target;
                if (dwell_left > 0) break;
            } else {
                x += dx / dist * remaining;
                y += dy / dist * remaining;
                remaining = 0.0;
            }
        }
    }
    return trace;
}

// Runs a position through the same box -> midpoint arithmetic the tracker
// applies, so noise-free truth and tracker observations agree bit-for-bit.
double observed_mid_y(const Midpoint& pos, double half_h) {
    const double min_y = pos.y - half_h;
    const double max_y = pos.y + half_h;
    return (max_y - min_y) / 2.0 + min_y;
}

TrackStatus final_status_of(const BeeTrace& trace, const HiveGeometry& geom) {
    TrackStatus status = TrackStatus::New;
    for (std::size_t i = 1; i < trace.positions.size(); ++i) {
        const CrossingEvent event =
            crossing(observed_mid_y(trace.positions[i - 1], trace.half_h),
                     observed_mid_y(trace.positions[i], trace.half_h), geom);
        if (event != CrossingEvent::None) {
            status = status_after(event);
        }
    }
    return status;
}

void validate_range(const Range& r, const char* name) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi)) || r.lo <= 0.0 || r.hi < r.lo) {
        throw ValidationError(std::string("simulator config: range ") + name +
                              " must be positive and non-empty");
    }
}

}  // namespace

void validate(const SimConfig& config) {
    validate(config.geom);
    if (!(config.fps > 0.0) || !std::isfinite(config.fps)) {
        throw ValidationError("simulator config: fps must be positive");
    }
    if (!(config.duration_s > 0.0) || !std::isfinite(config.duration_s)) {
        throw ValidationError("simulator config: duration must be positive");
    }
    if (config.bee_count < 0) {
        throw ValidationError("simulator config: bee count must be non-negative");
    }
    validate_range(config.speed_px_per_frame, "speed_px_per_frame");
    validate_range(config.worker_len_px, "worker_len_px");
    validate_range(config.drone_len_px, "drone_len_px");
    for (double p : {config.spawn.top, config.spawn.bottom, config.spawn.deck,
                     config.dropout_prob, config.drone_fraction}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError("simulator config: probabilities must lie in [0,1]");
        }
    }
    if (config.spawn.top + config.spawn.bottom + config.spawn.deck <= 0.0) {
        throw ValidationError("simulator config: spawn weights must not all be zero");
    }
    if (config.jitter_px < 0.0 || config.min_separation_px < 0.0) {
        throw ValidationError("simulator config: jitter and separation must be non-negative");
    }
}

DetailedSimOutput generate_detailed(const SimConfig& config) {
    validate(config);
    const HiveGeometry& geom = config.geom;
    const std::int64_t total_frames =
        std::max<std::int64_t>(1, std::llround(config.fps * config.duration_s));

    SimRng plan_rng(config.seed);

    const double wander = 12.0;
    const double max_len = std::max(config.worker_len_px.hi, config.drone_len_px.hi);
    const double max_half_w = 0.55 * max_len / 2.0;
    const double edge = max_half_w + wander + 2.0;

    // Corridor centers for separation-guaranteed scheduling.
    std::vector<double> corridor_x;
    std::vector<std::int64_t> corridor_free;
    if (config.min_separation_px > 0.0) {
        const double pitch = config.min_separation_px + 2.0 * wander + 2.0;
        for (double cx = edge; cx + edge <= geom.frame_w + 1e-9; cx += pitch) {
            corridor_x.push_back(cx);
        }
        if (corridor_x.empty()) {
            throw ValidationError("simulator config: frame too narrow for requested separation");
        }
        corridor_free.assign(corridor_x.size(), 0);
    }

    struct PlannedBee {
        BeeTrace trace;
        TrackStatus final_status = TrackStatus::New;
    };
    std::vector<PlannedBee> bees;
    bees.reserve(static_cast<std::size_t>(config.bee_count));

    for (int b = 0; b < config.bee_count; ++b) {
        const bool drone = plan_rng.bernoulli(config.drone_fraction);
        const double len = plan_rng.uniform(drone ? config.drone_len_px : config.worker_len_px);
        const double width = len * plan_rng.uniform(0.40, 0.55);
        const Side spawn_side = pick_spawn_side(plan_rng, config.spawn);
        const Side exit_side = pick_exit_side(plan_rng, spawn_side);
        const std::int64_t desired_spawn =
            plan_rng.uniform_int(0, std::max<std::int64_t>(0, total_frames * 4 / 5 - 1));

        BeePlan plan;
        plan.half_w = width / 2.0;
        plan.half_h = len / 2.0;
        plan.speed = plan_rng.uniform(config.speed_px_per_frame);
        plan.noise_stream = static_cast<std::uint64_t>(b) + 1;

        double center_x = 0.0;
        std::size_t corridor = 0;
        if (corridor_x.empty()) {
            center_x = plan_rng.uniform(edge, geom.frame_w - edge);
            plan.spawn_frame = desired_spawn;
        } else {
            // Pick the corridor that lets the bee spawn earliest; one bee per
            // corridor at a time keeps concurrent bees separated.
            std::int64_t best_start = std::max(corridor_free[0], desired_spawn);
            for (std::size_t k = 1; k < corridor_x.size(); ++k) {
                const std::int64_t start = std::max(corridor_free[k], desired_spawn);
                if (start < best_start) {
                    corridor = k;
                    best_start = start;
                }
            }
            center_x = corridor_x[corridor];
            plan.spawn_frame = best_start;
        }
        if (plan.spawn_frame >= total_frames) continue;  // video over before the bee appears

        plan.waypoints = build_waypoints(plan_rng, geom, center_x, wander, plan.half_h,
                                         spawn_side, exit_side, total_frames);

        BeeTrace trace = trace_path(plan, geom, total_frames);
        if (trace.positions.empty()) continue;
        if (!corridor_x.empty()) {
            corridor_free[corridor] =
                trace.first_frame + static_cast<std::int64_t>(trace.positions.size()) + 2;
        }

        PlannedBee bee;
        bee.final_status = final_status_of(trace, geom);
        bee.trace = std::move(trace);
        bees.push_back(std::move(bee));
    }

    // Ids in order of first visibility so a clean tracker run creates
    // profiles in the same order.
    std::stable_sort(bees.begin(), bees.end(), [](const PlannedBee& a, const PlannedBee& b) {
        return a.trace.first_frame < b.trace.first_frame;
    });

    DetailedSimOutput out;
    out.frames.resize(static_cast<std::size_t>(total_frames));
    out.truth.reserve(bees.size());

    for (std::size_t i = 0; i < bees.size(); ++i) {
        const PlannedBee& bee = bees[i];
        const std::int64_t bee_id = static_cast<std::int64_t>(i) + 1;

        GroundTruthRecord rec;
        rec.bee_id = bee_id;
        rec.final_status = bee.final_status;
        rec.first_frame = bee.trace.first_frame;
        rec.last_frame =
            bee.trace.first_frame + static_cast<std::int64_t>(bee.trace.positions.size()) - 1;
        out.truth.push_back(rec);

        SimRng noise(config.seed, bee.trace.noise_stream);
        for (std::size_t p = 0; p < bee.trace.positions.size(); ++p) {
            const std::int64_t frame = bee.trace.first_frame + static_cast<std::int64_t>(p);
            const Midpoint& pos = bee.trace.positions[p];
            const double jx = config.jitter_px > 0.0 ? noise.normal() * config.jitter_px : 0.0;
            const double jy = config.jitter_px > 0.0 ? noise.normal() * config.jitter_px : 0.0;
            const double conf = 0.6 + 0.4 * noise.uniform01();
            const bool dropped = config.dropout_prob > 0.0 && noise.bernoulli(config.dropout_prob);
            if (dropped) continue;

            DetectionBox box;
            box.min_x = std::clamp(pos.x + jx - bee.trace.half_w, 0.0, geom.frame_w);
            box.max_x = std::clamp(pos.x + jx + bee.trace.half_w, 0.0, geom.frame_w);
            box.min_y = std::clamp(pos.y + jy - bee.trace.half_h, 0.0, geom.frame_h);
            box.max_y = std::clamp(pos.y + jy + bee.trace.half_h, 0.0, geom.frame_h);
            box.confidence = conf;
            out.frames[static_cast<std::size_t>(frame)].push_back({bee_id, box});
        }
    }
    return out;
}

SimOutput generate(const SimConfig& config) {
    DetailedSimOutput detailed = generate_detailed(config);
    SimOutput out;
    out.truth = std::move(detailed.truth);
    out.stream.reserve(detailed.frames.size());
    for (std::size_t f = 0; f < detailed.frames.size(); ++f) {
        FrameDetections frame;
        frame.frame_index = static_cast<std::int64_t>(f);
        frame.boxes.reserve(detailed.frames[f].size());
        for (const SimFrameBox& sb : detailed.frames[f]) {
            frame.boxes.push_back(sb.box);
        }
        out.stream.push_back(std::move(frame));
    }
    return out;
}

VideoSummary truth_summary(const std::vector<GroundTruthRecord>& truth) {
    VideoSummary summary;
    for (const GroundTruthRecord& rec : truth) {
        switch (rec.final_status) {
            case TrackStatus::Arriving: ++summary.arriving; break;
            case TrackStatus::Leaving: ++summary.leaving; break;
            case TrackStatus::Deck: ++summary.deck; break;
            case TrackStatus::New: ++summary.new_count; break;
        }
        if (rec.has_pollen) ++summary.pollen_tracks;
        if (rec.has_mite) ++summary.mite_tracks;
    }
    summary.total_tracks = static_cast<long>(truth.size());
    return summary;
}

}  // namespace hivemon
