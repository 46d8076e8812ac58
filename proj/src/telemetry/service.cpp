#include "hivemon/telemetry/service.hpp"

#include <chrono>
#include <functional>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hivemon/errors.hpp"
#include "hivemon/telemetry/store.hpp"

namespace hivemon {

using nlohmann::json;

namespace {

std::int64_t now_utc_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, json{{"error", message}});
}

// Maps library errors onto HTTP statuses; keeps every handler uniform.
void guarded(httplib::Response& res, const std::function<void()>& handler) {
    try {
        handler();
    } catch (const AuthError& e) {
        reply_error(res, 401, e.what());
    } catch (const NotFoundError& e) {
        reply_error(res, 404, e.what());
    } catch (const OrderingError& e) {
        reply_error(res, 409, e.what());
    } catch (const ValidationError& e) {
        reply_error(res, 422, e.what());
    } catch (const FormatError& e) {
        reply_error(res, 400, e.what());
    } catch (const std::exception& e) {
        reply_error(res, 500, e.what());
    }
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw FormatError(std::string("request body is not valid JSON: ") + e.what());
    }
}

std::string require_string(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_string()) {
        throw FormatError(std::string("request is missing string field '") + field + "'");
    }
    return j[field].get<std::string>();
}

json sample_to_response(const HiveSample& s) {
    return json::parse(sample_to_json(s));
}

}  // namespace

TelemetryService::TelemetryService(HiveStore& store, std::string version)
    : store_(store), version_(std::move(version)), started_at_(now_utc_seconds()) {}

void TelemetryService::attach(httplib::Server& server) {
    server.Post("/api/upload-data", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parse_body(req);
            const std::string hive = require_string(body, "hive");
            if (!body.contains("sample")) {
                throw FormatError("request is missing object field 'sample'");
            }
            const HiveSample sample = sample_from_json(body["sample"].dump());
            const auto seq =
                store_.upload_data(req.get_header_value("X-Auth-Key"), hive, sample);
            reply_json(res, 200, json{{"ok", true}, {"sequence", seq}});
        });
    });

    server.Post("/api/upload-network",
                [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parse_body(req);
            const std::string hive = require_string(body, "hive");
            if (!body.contains("network") || !body["network"].is_object()) {
                throw FormatError("request is missing object field 'network'");
            }
            NetworkInfo info;
            try {
                info = body["network"].get<NetworkInfo>();
            } catch (const json::exception&) {
                throw FormatError("'network' must map string keys to string values");
            }
            store_.upload_network(req.get_header_value("X-Auth-Key"), hive, info);
            reply_json(res, 200, json{{"ok", true}});
        });
    });

    // Video payloads are accepted for protocol compatibility and discarded.
    server.Post("/api/upload-video", [](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply_json(res, 200, json{{"ok", true}, {"stored", false}}); });
    });

    server.Get("/api/get-data", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_param("hive")) throw FormatError("missing query parameter 'hive'");
            const std::string hive = req.get_param_value("hive");
            const std::string mode =
                req.has_param("mode") ? req.get_param_value("mode") : "latest";
            if (mode == "latest") {
                const auto sample = store_.latest(hive);
                json body{{"hive", hive}, {"mode", "latest"}};
                if (sample) {
                    body["sample"] = sample_to_response(*sample);
                } else {
                    body["sample"] = nullptr;
                    body["marker"] = "--";
                }
                reply_json(res, 200, body);
            } else if (mode == "history") {
                if (!req.has_param("year")) {
                    throw FormatError("history mode needs query parameter 'year'");
                }
                int year = 0;
                try {
                    year = std::stoi(req.get_param_value("year"));
                } catch (const std::exception&) {
                    throw FormatError("query parameter 'year' must be an integer");
                }
                json samples = json::array();
                for (const HiveSample& s : store_.history(hive, year)) {
                    samples.push_back(sample_to_response(s));
                }
                reply_json(res, 200,
                           json{{"hive", hive},
                                {"mode", "history"},
                                {"year", year},
                                {"samples", std::move(samples)}});
            } else {
                throw FormatError("mode must be 'latest' or 'history'");
            }
        });
    });

    server.Get("/api/get-network", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_param("hive")) throw FormatError("missing query parameter 'hive'");
            const std::string hive = req.get_param_value("hive");
            const auto net = store_.network(hive);
            json body{{"hive", hive}};
            body["network"] = net ? json(*net) : json(nullptr);
            reply_json(res, 200, body);
        });
    });

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] {
            reply_json(res, 200,
                       json{{"service", "hivemon"},
                            {"version", version_},
                            {"uptime_s", now_utc_seconds() - started_at_},
                            {"hives", store_.hives().size()}});
        });
    });
}

}  // namespace hivemon
