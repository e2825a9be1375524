#pragma once

// HTTP front: POST /query, GET /health, and the web UI bundle at /.

#include <filesystem>
#include <optional>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "extrans/engine.hpp"

namespace extrans::service {

namespace fs = std::filesystem;
using nlohmann::json;

inline json answerJson(const rank::Answer& a)
{
    json spans = json::array();
    for (const auto& sp : a.spans)
        spans.push_back({sp.start, sp.end});
    return {{"doc", a.docId}, {"sent", a.sentId}, {"text", a.sentenceText}, {"spans", spans}, {"score", a.score}};
}

inline json resultJson(const QueryResult& r)
{
    json answers = json::array();
    for (const auto& a : r.answers)
        answers.push_back(answerJson(a));
    return {{"answers", answers}, {"elapsedMs", r.elapsedMs}};
}

struct Reply {
    int status = 200;
    json body;
};

// Request handling without the socket, so it can be tested directly.
inline Reply handleQuery(const QueryEngine& engine, const std::string& requestBody)
{
    json req = json::parse(requestBody, nullptr, false);
    if (req.is_discarded() || !req.is_object())
        return {400, {{"error", "bad_request"}, {"detail", "body must be a JSON object"}}};
    if (!req.contains("question") || !req["question"].is_string())
        return {400, {{"error", "bad_request"}, {"detail", "missing string field 'question'"}}};

    store::StorageMode mode = store::StorageMode::External;
    if (req.contains("mode")) {
        const auto& m = req["mode"];
        if (m == "internal")
            mode = store::StorageMode::Internal;
        else if (m != "external")
            return {400, {{"error", "bad_request"}, {"detail", "mode must be 'internal' or 'external'"}}};
    }

    try {
        return {200, resultJson(engine.ask(req["question"].get<std::string>(), mode))};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnparseableQuery)
            return {400, {{"error", "unparseable_query"}, {"detail", e.what()}}};
        return {500, {{"error", to_string(e.code())}, {"detail", e.what()}}};
    }
}

inline json healthJson(const QueryEngine& engine)
{
    return {{"status", "ok"}, {"docs", engine.database().documentCount()}};
}

class Server {
public:
    Server(const QueryEngine& engine, std::optional<fs::path> uiDir = std::nullopt)
        : engine_(engine)
    {
        http_.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
            const Reply r = handleQuery(engine_, req.body);
            res.status = r.status;
            res.set_content(r.body.dump(), "application/json");
        });
        http_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(healthJson(engine_).dump(), "application/json");
        });
        if (uiDir && http_.set_mount_point("/", uiDir->string()))
            return;
        http_.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("extrans query service: POST /query, GET /health\n", "text/plain");
        });
    }

    bool listen(const std::string& host, int port) { return http_.listen(host, port); }
    int bindToAnyPort(const std::string& host) { return http_.bind_to_any_port(host); }
    bool listenAfterBind() { return http_.listen_after_bind(); }
    void waitUntilReady() const { http_.wait_until_ready(); }
    void stop() { http_.stop(); }

private:
    const QueryEngine& engine_;
    httplib::Server http_;
};

} // namespace extrans::service
