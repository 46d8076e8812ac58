#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "hivemon/errors.hpp"
#include "hivemon/telemetry/service.hpp"
#include "hivemon/telemetry/store.hpp"

namespace hivemon::cli {

namespace {

using nlohmann::json;

struct ServeOptions {
    std::string listen = "127.0.0.1:8089";
    std::string data_dir = "hive-data";
    std::string key_file;
};

httplib::Server* g_server = nullptr;

void handle_signal(int) {
    if (g_server) g_server->stop();
}

// The key file shares the registry schema: a JSON array of
// {id, name, location, key}. Entries already in the store are kept as-is.
void register_from_key_file(HiveStore& store, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read key file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw FormatError("key file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_array()) throw FormatError("key file must hold an array of hives");
    for (const json& h : j) {
        HiveInfo info;
        try {
            info.id = h.at("id").get<std::string>();
            info.name = h.value("name", "");
            info.location = h.value("location", "");
            info.key = h.at("key").get<std::string>();
        } catch (const json::exception& e) {
            throw FormatError("key file entry missing field: " + std::string(e.what()));
        }
        if (!store.has_hive(info.id)) {
            store.register_hive(info);
        }
    }
}

void run_serve(const ServeOptions& opts) {
    const auto colon = opts.listen.rfind(':');
    if (colon == std::string::npos) {
        throw ValidationError("--listen must be ADDR:PORT, got '" + opts.listen + "'");
    }
    const std::string host = opts.listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(opts.listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValidationError("--listen port must be an integer");
    }

    HiveStore store{std::filesystem::path(opts.data_dir)};
    if (!opts.key_file.empty()) {
        register_from_key_file(store, opts.key_file);
    }

    httplib::Server server;
    TelemetryService service(store, "0.1.0");
    service.attach(server);

    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    if (!server.bind_to_port(host, port)) {
        throw IoError("cannot bind " + opts.listen + " (port in use or address unavailable)");
    }
    std::cout << "serving hive telemetry on http://" << opts.listen << " (data dir "
              << store.data_dir().string() << ", " << store.hives().size() << " hives)\n"
              << std::flush;
    server.listen_after_bind();
    std::cout << "shut down\n";
}

}  // namespace

void setup_serve(CLI::App& app) {
    auto opts = std::make_shared<ServeOptions>();
    CLI::App* cmd =
        app.add_subcommand("serve", "Run the hive telemetry service over HTTP");
    cmd->add_option("--listen", opts->listen, "Listen address as ADDR:PORT")
        ->envname("HIVEMON_LISTEN")
        ->capture_default_str();
    cmd->add_option("--data-dir", opts->data_dir, "Directory for registry and sample logs")
        ->envname("HIVEMON_DATA_DIR")
        ->capture_default_str();
    cmd->add_option("--key-file", opts->key_file,
                    "JSON hive registry to load (array of {id,name,location,key})")
        ->envname("HIVEMON_KEY_FILE");
    cmd->callback([opts] { run_serve(*opts); });
}

}  // namespace hivemon::cli
