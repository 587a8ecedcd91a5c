#pragma once

#include "cropsense/ingestion.hpp"

#include <memory>
#include <string>

namespace cropsense::ingestion {

/// HTTP front end for a ReportStore.
///
///   POST /reports         submission JSON -> 201 {"report_id","k"}
///   POST /reports/batch   {"agent_id","captures":[...]} -> 200 {"results":[...]}
///   GET  /reports         JSONL, filters: agent_id, label, from, to
///   POST /blobs           raw image bytes -> 201 {"image_ref"} (needs a BlobStore)
///   GET  /health
///
/// Rejections answer with {"error": "<Errc>", "message": "..."}: 404 for
/// UnknownAgent, 403 AgentNotActive, 409 DuplicateImage, 400 malformed JSON,
/// 422 for the remaining validation errors.
class IngestionServer {
public:
    explicit IngestionServer(ReportStore& store, BlobStore* blobs = nullptr);
    ~IngestionServer();

    IngestionServer(const IngestionServer&) = delete;
    IngestionServer& operator=(const IngestionServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws AddressInUse.
    int bind(const std::string& host, int port);

    /// Serves until stop(); requires bind().
    void run();
    /// run() on a background thread.
    void start();
    void stop();

    int port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cropsense::ingestion
