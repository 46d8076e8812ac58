#pragma once

#include <string>

namespace httplib {
class Server;
}

namespace hivemon {

class HiveStore;

/// HTTP surface of the hive-data service. Auth token travels in the
/// X-Auth-Key header; payloads are JSON. Endpoints:
///
///   POST /api/upload-data     {"hive": ID, "sample": {HiveSample fields}}
///   POST /api/upload-network  {"hive": ID, "network": {string: string}}
///   POST /api/upload-video    acknowledged, payload discarded
///   GET  /api/get-data?hive=ID&mode=latest
///   GET  /api/get-data?hive=ID&mode=history&year=Y
///   GET  /api/get-network?hive=ID
///   GET  /api/health
class TelemetryService {
public:
    TelemetryService(HiveStore& store, std::string version);

    /// Register all routes on an httplib server.
    void attach(httplib::Server& server);

private:
    HiveStore& store_;
    std::string version_;
    std::int64_t started_at_ = 0;
};

}  // namespace hivemon
