#pragma once

#include "cropsense/diagnosis.hpp"
#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"
#include "cropsense/time.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cropsense::ingestion {

enum class Label { Disease, Whitefly, Anomaly, Other };

inline constexpr std::array<Label, 4> kLabels{Label::Disease, Label::Whitefly, Label::Anomaly, Label::Other};

std::string_view to_string(Label l) noexcept;
std::optional<Label> parse_label(std::string_view text);

/// What the device sends. Coordinates are optional because GPS can fail to
/// resolve; the label is kept as received so it can be rejected explicitly.
struct Capture {
    Timestamp captured_at{};
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::string label;
    std::string comment;
    std::string image_ref;
};

struct Report {
    std::string report_id;
    std::string agent_id;
    std::uint32_t ordinal = 0;  // 1-based position in the agent's accepted sequence
    Timestamp captured_at{};
    Timestamp received_at{};
    double latitude = 0.0;
    double longitude = 0.0;
    Label label = Label::Other;
    std::string comment;
    std::string image_ref;
    std::optional<Diagnosis> expert_diagnosis;

    friend bool operator==(const Report&, const Report&) = default;
};

struct AcceptedReport {
    std::string report_id;
    std::uint32_t ordinal = 0;

    friend bool operator==(const AcceptedReport&, const AcceptedReport&) = default;
};

/// Outcome of one capture in a batch submission.
struct SubmitResult {
    std::optional<AcceptedReport> accepted;
    std::optional<Errc> error;
    std::string message;

    bool ok() const noexcept { return accepted.has_value(); }
};

struct ReportFilter {
    std::optional<std::string> agent_id;
    std::optional<registry::Zardi> region;  // the submitting agent's station
    std::optional<Label> label;
    std::optional<DateRange> received;      // by receipt date (UTC)
    std::optional<bool> has_expert_diagnosis;
};

struct AnnotationAudit {
    std::string report_id;
    std::optional<Diagnosis> previous;
    Diagnosis current = Diagnosis::None;
    Timestamp at{};
};

Timestamp system_now();

/// "R-<agent_id>-<ordinal, 6 digits>"
std::string make_report_id(std::string_view agent_id, std::uint32_t ordinal);

/// Append-only report log with per-agent ordinals.
///
/// submit() is safe under concurrent callers: validation against the
/// directory happens outside the lock, then the duplicate check, ordinal
/// assignment and append run as one exclusive section. Queries take a shared
/// lock and see whole submissions only.
class ReportStore {
public:
    using Clock = std::function<Timestamp()>;

    /// `directory` may be null for stores that are only loaded and queried;
    /// submissions then fail with UnknownAgent and region filters with
    /// UnresolvableAgent.
    explicit ReportStore(const registry::Registry* directory = nullptr, Clock clock = system_now);

    ReportStore(const ReportStore&) = delete;
    ReportStore& operator=(const ReportStore&) = delete;

    /// Throws Error(UnknownAgent | AgentNotActive | MissingGeotag |
    /// InvalidCoordinates | InvalidLabel | ParseError | DuplicateImage).
    /// Rejected submissions never consume an ordinal.
    AcceptedReport submit(std::string_view agent_id, const Capture& capture);

    /// Offline upload: ordinals follow array order; each capture is accepted
    /// or rejected on its own.
    std::vector<SubmitResult> submit_batch(std::string_view agent_id, std::span<const Capture> captures);

    /// Matching reports in receipt order.
    std::vector<Report> query(const ReportFilter& filter = {}) const;

    std::optional<Report> find(std::string_view report_id) const;

    /// Re-annotation overwrites and is recorded in the audit log.
    Report attach_expert_diagnosis(std::string_view report_id, Diagnosis diagnosis);

    std::vector<AnnotationAudit> audit_log() const;
    std::size_t size() const;
    std::uint32_t count_for(std::string_view agent_id) const;
    const registry::Registry* directory() const noexcept { return directory_; }

    /// Canonical serialization: one report per line, fixed field order.
    void write_jsonl(std::ostream& out) const;
    /// Replaces the store content. Rejects duplicate ids or image refs and
    /// per-agent ordinals that are not exactly 1..n in file order.
    void load_jsonl(std::istream& in);

    /// Every accepted report is also appended to this stream (write-through
    /// log). Pass nullptr to detach.
    void set_append_log(std::ostream* log);

    /// Inserts an already-validated report (import paths and tests). The
    /// ordinal must be the agent's next one.
    void insert_validated(Report report);

private:
    const registry::Registry* directory_;
    Clock clock_;

    mutable std::shared_mutex mutex_;
    std::vector<Report> reports_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_agent_;
    std::unordered_set<std::string> image_keys_;
    std::vector<AnnotationAudit> audit_;
    std::ostream* append_log_ = nullptr;

    Report validate(std::string_view agent_id, const Capture& capture) const;
    AcceptedReport append_locked(Report report);
};

std::string report_to_json_line(const Report& report);
Report report_from_json_line(std::string_view line);

/// Wire format of a submission body: the capture fields plus agent_id.
std::pair<std::string, Capture> parse_submission(std::string_view json_body);
std::string submission_to_json(std::string_view agent_id, const Capture& capture);

struct AnnotationRow {
    std::string report_id;
    Diagnosis diagnosis = Diagnosis::None;
};

/// CSV with columns report_id,diagnosis. Errors carry the line number.
std::vector<AnnotationRow> read_annotations_csv(std::istream& in);

/// Applies every row; returns the number applied. Unknown ids throw
/// UnknownReport before anything is written.
std::size_t apply_annotations(ReportStore& store, std::span<const AnnotationRow> rows);

// ---------------------------------------------------------------------------

/// Content-addressed image blobs: "sha256:<hex>" refs, files under a root.
class BlobStore {
public:
    explicit BlobStore(std::filesystem::path root);

    std::string put(std::string_view bytes);
    bool contains(std::string_view ref) const;
    std::optional<std::string> get(std::string_view ref) const;

    static std::string ref_for(std::string_view bytes);

private:
    std::filesystem::path root_;
    std::filesystem::path path_of(std::string_view ref) const;
};

/// On-disk store: <dir>/reports.jsonl plus an exclusive lock file. Opening a
/// directory that another StoreDirectory holds throws StoreLocked.
class StoreDirectory {
public:
    StoreDirectory(const std::filesystem::path& dir, ReportStore& store);
    ~StoreDirectory();

    StoreDirectory(const StoreDirectory&) = delete;
    StoreDirectory& operator=(const StoreDirectory&) = delete;

    /// Rewrites reports.jsonl canonically (including annotations).
    void flush();

    const std::filesystem::path& path() const noexcept { return dir_; }
    static std::filesystem::path reports_file(const std::filesystem::path& dir) { return dir / "reports.jsonl"; }

private:
    std::filesystem::path dir_;
    ReportStore& store_;
    int lock_fd_ = -1;
    std::ofstream log_;
};

}  // namespace cropsense::ingestion
