#include "cropsense/http_endpoint.hpp"

#include "httplib.h"
#include "json.hpp"

#include <sstream>
#include <thread>

namespace cropsense::ingestion {

using json = nlohmann::ordered_json;

namespace {

int status_for(Errc code) {
    switch (code) {
    case Errc::UnknownAgent: return 404;
    case Errc::AgentNotActive: return 403;
    case Errc::DuplicateImage: return 409;
    case Errc::ParseError: return 400;
    default: return 422;
    }
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
    res.status = status_for(code);
    res.set_content(json{{"error", to_string(code)}, {"message", message}}.dump(), "application/json");
}

}  // namespace

struct IngestionServer::Impl {
    ReportStore& store;
    BlobStore* blobs;
    httplib::Server server;
    std::thread worker;
    int port = -1;

    Impl(ReportStore& s, BlobStore* b) : store(s), blobs(b) {
        // SO_REUSEADDR only: httplib's default also sets SO_REUSEPORT, which
        // lets a second server share the port silently.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        routes();
    }

    void routes() {
        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"status":"ok"})", "application/json");
        });

        server.Post("/reports", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                auto [agent_id, capture] = parse_submission(req.body);
                auto accepted = store.submit(agent_id, capture);
                res.status = 201;
                res.set_content(json{{"report_id", accepted.report_id}, {"k", accepted.ordinal}}.dump(),
                                "application/json");
            } catch (const Error& e) {
                send_error(res, e.code(), e.what());
            }
        });

        server.Post("/reports/batch", [this](const httplib::Request& req, httplib::Response& res) {
            json body;
            try {
                body = json::parse(req.body);
            } catch (const json::exception& e) {
                return send_error(res, Errc::ParseError, e.what());
            }
            if (!body.is_object() || !body.contains("agent_id") || !body["agent_id"].is_string() ||
                !body.contains("captures") || !body["captures"].is_array()) {
                return send_error(res, Errc::ParseError, "batch needs agent_id and a captures array");
            }
            const auto agent_id = body["agent_id"].get<std::string>();
            std::vector<Capture> captures;
            try {
                for (auto item : body["captures"]) {
                    item["agent_id"] = agent_id;
                    captures.push_back(parse_submission(item.dump()).second);
                }
            } catch (const Error& e) {
                return send_error(res, e.code(), e.what());
            }
            json results = json::array();
            for (const auto& r : store.submit_batch(agent_id, captures)) {
                if (r.accepted) {
                    results.push_back({{"report_id", r.accepted->report_id}, {"k", r.accepted->ordinal}});
                } else {
                    results.push_back({{"error", to_string(*r.error)}, {"message", r.message}});
                }
            }
            res.set_content(json{{"results", results}}.dump(), "application/json");
        });

        server.Get("/reports", [this](const httplib::Request& req, httplib::Response& res) {
            ReportFilter filter;
            try {
                if (req.has_param("agent_id")) filter.agent_id = req.get_param_value("agent_id");
                if (req.has_param("label")) {
                    auto label = parse_label(req.get_param_value("label"));
                    if (!label) throw Error(Errc::InvalidLabel, "unknown label");
                    filter.label = *label;
                }
                if (req.has_param("from") || req.has_param("to")) {
                    DateRange range{Date::min(), Date::max()};
                    if (req.has_param("from")) range.first = parse_date(req.get_param_value("from"));
                    if (req.has_param("to")) range.last = parse_date(req.get_param_value("to"));
                    filter.received = range;
                }
            } catch (const Error& e) {
                return send_error(res, e.code(), e.what());
            }
            std::ostringstream out;
            for (const auto& r : store.query(filter)) out << report_to_json_line(r) << '\n';
            res.set_content(out.str(), "application/x-ndjson");
        });

        server.Post("/blobs", [this](const httplib::Request& req, httplib::Response& res) {
            if (blobs == nullptr) return send_error(res, Errc::IoError, "no blob store configured");
            try {
                auto ref = blobs->put(req.body);
                res.status = 201;
                res.set_content(json{{"image_ref", ref}}.dump(), "application/json");
            } catch (const Error& e) {
                send_error(res, e.code(), e.what());
            }
        });
    }
};

IngestionServer::IngestionServer(ReportStore& store, BlobStore* blobs) : impl_(std::make_unique<Impl>(store, blobs)) {}

IngestionServer::~IngestionServer() { stop(); }

int IngestionServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        throw Error(Errc::AddressInUse, "cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->port = bound;
    return bound;
}

void IngestionServer::run() {
    if (impl_->port < 0) throw Error(Errc::ConfigInvalid, "server not bound");
    impl_->server.listen_after_bind();
}

void IngestionServer::start() {
    if (impl_->port < 0) throw Error(Errc::ConfigInvalid, "server not bound");
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void IngestionServer::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

int IngestionServer::port() const noexcept { return impl_->port; }

}  // namespace cropsense::ingestion
