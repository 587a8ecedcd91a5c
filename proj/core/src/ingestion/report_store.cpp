#include "cropsense/csv.hpp"
#include "cropsense/ingestion.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>

namespace cropsense::ingestion {

using json = nlohmann::ordered_json;

namespace {

std::string image_key(std::string_view agent_id, std::string_view image_ref) {
    std::string key(agent_id);
    key.push_back('\x1f');
    key.append(image_ref);
    return key;
}

}  // namespace

std::string_view to_string(Label l) noexcept {
    switch (l) {
    case Label::Disease: return "Disease";
    case Label::Whitefly: return "Whitefly";
    case Label::Anomaly: return "Anomaly";
    case Label::Other: return "Other";
    }
    return "";
}

std::optional<Label> parse_label(std::string_view text) {
    for (Label l : kLabels) {
        const auto name = to_string(l);
        if (text.size() != name.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < text.size() && same; ++i) {
            same = std::tolower(static_cast<unsigned char>(text[i])) == std::tolower(static_cast<unsigned char>(name[i]));
        }
        if (same) return l;
    }
    return std::nullopt;
}

Timestamp system_now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

std::string make_report_id(std::string_view agent_id, std::uint32_t ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "-%06u", ordinal);
    return "R-" + std::string(agent_id) + buf;
}

ReportStore::ReportStore(const registry::Registry* directory, Clock clock)
    : directory_(directory), clock_(std::move(clock)) {}

Report ReportStore::validate(std::string_view agent_id, const Capture& capture) const {
    if (directory_ == nullptr) {
        throw Error(Errc::UnknownAgent, "no agent directory attached; cannot accept " + std::string(agent_id));
    }
    auto agent = directory_->find(agent_id);
    if (!agent) throw Error(Errc::UnknownAgent, "unknown agent " + std::string(agent_id));
    if (agent->status != registry::AgentStatus::Selected) {
        throw Error(Errc::AgentNotActive,
                    "agent " + std::string(agent_id) + " is " + std::string(registry::to_string(agent->status)));
    }
    if (!agent->device_id) {
        throw Error(Errc::AgentNotActive, "agent " + std::string(agent_id) + " has no device assigned");
    }
    if (!capture.latitude || !capture.longitude || std::isnan(*capture.latitude) || std::isnan(*capture.longitude)) {
        throw Error(Errc::MissingGeotag, "capture has no GPS fix");
    }
    if (!(*capture.latitude >= -90.0 && *capture.latitude <= 90.0) ||
        !(*capture.longitude >= -180.0 && *capture.longitude <= 180.0)) {
        throw Error(Errc::InvalidCoordinates, "coordinates out of range");
    }
    auto label = parse_label(capture.label);
    if (!label) throw Error(Errc::InvalidLabel, "unknown label '" + capture.label + "'");
    if (capture.image_ref.empty()) throw Error(Errc::ParseError, "capture has no image_ref");

    Report r;
    r.agent_id = std::string(agent_id);
    r.captured_at = capture.captured_at;
    r.latitude = *capture.latitude;
    r.longitude = *capture.longitude;
    r.label = *label;
    r.comment = capture.comment;
    r.image_ref = capture.image_ref;
    return r;
}

AcceptedReport ReportStore::append_locked(Report report) {
    auto key = image_key(report.agent_id, report.image_ref);
    if (image_keys_.contains(key)) {
        throw Error(Errc::DuplicateImage, "agent " + report.agent_id + " already uploaded " + report.image_ref);
    }
    auto& slots = by_agent_[report.agent_id];
    const auto ordinal = static_cast<std::uint32_t>(slots.size() + 1);
    if (report.ordinal == 0) report.ordinal = ordinal;
    if (report.ordinal != ordinal) {
        throw Error(Errc::HistoryGap, "report " + report.report_id + " has ordinal " +
                                          std::to_string(report.ordinal) + ", expected " + std::to_string(ordinal));
    }
    if (report.report_id.empty()) report.report_id = make_report_id(report.agent_id, ordinal);
    if (by_id_.contains(report.report_id)) {
        throw Error(Errc::ParseError, "duplicate report id " + report.report_id);
    }

    const auto index = reports_.size();
    image_keys_.insert(std::move(key));
    by_id_.emplace(report.report_id, index);
    slots.push_back(index);
    reports_.push_back(std::move(report));
    const auto& stored = reports_.back();
    if (append_log_ != nullptr) {
        *append_log_ << report_to_json_line(stored) << '\n';
        append_log_->flush();
    }
    return AcceptedReport{stored.report_id, stored.ordinal};
}

AcceptedReport ReportStore::submit(std::string_view agent_id, const Capture& capture) {
    auto report = validate(agent_id, capture);
    std::unique_lock lock(mutex_);
    report.received_at = clock_();
    return append_locked(std::move(report));
}

std::vector<SubmitResult> ReportStore::submit_batch(std::string_view agent_id, std::span<const Capture> captures) {
    std::vector<SubmitResult> results(captures.size());
    std::vector<std::optional<Report>> validated(captures.size());
    for (std::size_t i = 0; i < captures.size(); ++i) {
        try {
            validated[i] = validate(agent_id, captures[i]);
        } catch (const Error& e) {
            results[i].error = e.code();
            results[i].message = e.what();
        }
    }
    std::unique_lock lock(mutex_);
    const auto received = clock_();
    for (std::size_t i = 0; i < captures.size(); ++i) {
        if (!validated[i]) continue;
        validated[i]->received_at = received;
        try {
            results[i].accepted = append_locked(std::move(*validated[i]));
        } catch (const Error& e) {
            results[i].error = e.code();
            results[i].message = e.what();
        }
    }
    return results;
}

void ReportStore::insert_validated(Report report) {
    std::unique_lock lock(mutex_);
    append_locked(std::move(report));
}

std::vector<Report> ReportStore::query(const ReportFilter& filter) const {
    std::unordered_map<std::string, registry::Zardi> region_of;
    if (filter.region) {
        if (directory_ == nullptr) {
            throw Error(Errc::UnresolvableAgent, "region filter needs an agent directory");
        }
        for (const auto& a : directory_->agents()) region_of.emplace(a.agent_id, a.profile.region);
    }
    auto matches = [&](const Report& r) {
        if (filter.agent_id && r.agent_id != *filter.agent_id) return false;
        if (filter.label && r.label != *filter.label) return false;
        if (filter.received && !filter.received->contains(r.received_at)) return false;
        if (filter.has_expert_diagnosis && r.expert_diagnosis.has_value() != *filter.has_expert_diagnosis) {
            return false;
        }
        if (filter.region) {
            auto it = region_of.find(r.agent_id);
            if (it == region_of.end() || it->second != *filter.region) return false;
        }
        return true;
    };

    std::shared_lock lock(mutex_);
    std::vector<Report> out;
    if (filter.agent_id) {
        auto it = by_agent_.find(*filter.agent_id);
        if (it == by_agent_.end()) return out;
        for (auto idx : it->second) {
            if (matches(reports_[idx])) out.push_back(reports_[idx]);
        }
        return out;
    }
    for (const auto& r : reports_) {
        if (matches(r)) out.push_back(r);
    }
    return out;
}

std::optional<Report> ReportStore::find(std::string_view report_id) const {
    std::shared_lock lock(mutex_);
    auto it = by_id_.find(std::string(report_id));
    if (it == by_id_.end()) return std::nullopt;
    return reports_[it->second];
}

Report ReportStore::attach_expert_diagnosis(std::string_view report_id, Diagnosis diagnosis) {
    std::unique_lock lock(mutex_);
    auto it = by_id_.find(std::string(report_id));
    if (it == by_id_.end()) throw Error(Errc::UnknownReport, "unknown report " + std::string(report_id));
    auto& r = reports_[it->second];
    if (r.expert_diagnosis) {
        audit_.push_back(AnnotationAudit{r.report_id, r.expert_diagnosis, diagnosis, clock_()});
    }
    r.expert_diagnosis = diagnosis;
    return r;
}

std::vector<AnnotationAudit> ReportStore::audit_log() const {
    std::shared_lock lock(mutex_);
    return audit_;
}

std::size_t ReportStore::size() const {
    std::shared_lock lock(mutex_);
    return reports_.size();
}

std::uint32_t ReportStore::count_for(std::string_view agent_id) const {
    std::shared_lock lock(mutex_);
    auto it = by_agent_.find(std::string(agent_id));
    return it == by_agent_.end() ? 0u : static_cast<std::uint32_t>(it->second.size());
}

void ReportStore::write_jsonl(std::ostream& out) const {
    std::shared_lock lock(mutex_);
    for (const auto& r : reports_) out << report_to_json_line(r) << '\n';
}

void ReportStore::load_jsonl(std::istream& in) {
    std::vector<Report> loaded;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            loaded.push_back(report_from_json_line(line));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::unique_lock lock(mutex_);
    reports_.clear();
    by_id_.clear();
    by_agent_.clear();
    image_keys_.clear();
    audit_.clear();
    auto* log = std::exchange(append_log_, nullptr);
    for (auto& r : loaded) append_locked(std::move(r));
    append_log_ = log;
}

void ReportStore::set_append_log(std::ostream* log) {
    std::unique_lock lock(mutex_);
    append_log_ = log;
}

std::string report_to_json_line(const Report& r) {
    json j{
        {"report_id", r.report_id},
        {"agent_id", r.agent_id},
        {"ordinal", r.ordinal},
        {"captured_at", format_rfc3339(r.captured_at)},
        {"received_at", format_rfc3339(r.received_at)},
        {"latitude", r.latitude},
        {"longitude", r.longitude},
        {"label", to_string(r.label)},
        {"comment", r.comment},
        {"image_ref", r.image_ref},
        {"expert_diagnosis", r.expert_diagnosis ? json(to_string(*r.expert_diagnosis)) : json(nullptr)},
    };
    return j.dump();
}

Report report_from_json_line(std::string_view line) {
    try {
        const json j = json::parse(line);
        Report r;
        r.report_id = j.at("report_id").get<std::string>();
        r.agent_id = j.at("agent_id").get<std::string>();
        r.ordinal = j.at("ordinal").get<std::uint32_t>();
        r.captured_at = parse_rfc3339(j.at("captured_at").get<std::string>());
        r.received_at = parse_rfc3339(j.at("received_at").get<std::string>());
        r.latitude = j.at("latitude").get<double>();
        r.longitude = j.at("longitude").get<double>();
        auto label = parse_label(j.at("label").get<std::string>());
        if (!label) throw Error(Errc::InvalidLabel, "report " + r.report_id + " has an unknown label");
        r.label = *label;
        r.comment = j.at("comment").get<std::string>();
        r.image_ref = j.at("image_ref").get<std::string>();
        if (const auto& d = j.at("expert_diagnosis"); !d.is_null()) {
            auto diagnosis = parse_diagnosis(d.get<std::string>());
            if (!diagnosis) throw Error(Errc::ParseError, "report " + r.report_id + " has an unknown diagnosis");
            r.expert_diagnosis = *diagnosis;
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("report record: ") + e.what());
    }
}

std::pair<std::string, Capture> parse_submission(std::string_view body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("submission body: ") + e.what());
    }
    if (!j.is_object()) throw Error(Errc::ParseError, "submission body must be a JSON object");
    try {
        Capture c;
        const auto agent_id = j.at("agent_id").get<std::string>();
        c.captured_at = parse_rfc3339(j.at("captured_at").get<std::string>());
        if (j.contains("latitude") && !j["latitude"].is_null()) c.latitude = j["latitude"].get<double>();
        if (j.contains("longitude") && !j["longitude"].is_null()) c.longitude = j["longitude"].get<double>();
        c.label = j.value("label", std::string{});
        c.comment = j.value("comment", std::string{});
        c.image_ref = j.value("image_ref", std::string{});
        return {agent_id, std::move(c)};
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("submission body: ") + e.what());
    }
}

std::string submission_to_json(std::string_view agent_id, const Capture& c) {
    json j{
        {"agent_id", agent_id},
        {"captured_at", format_rfc3339(c.captured_at)},
        {"latitude", c.latitude ? json(*c.latitude) : json(nullptr)},
        {"longitude", c.longitude ? json(*c.longitude) : json(nullptr)},
        {"label", c.label},
        {"comment", c.comment},
        {"image_ref", c.image_ref},
    };
    return j.dump();
}

std::vector<AnnotationRow> read_annotations_csv(std::istream& in) {
    const auto table = csv::read(in);
    const auto id_col = table.column("report_id");
    const auto dx_col = table.column("diagnosis");
    if (!id_col || !dx_col) throw Error(Errc::ParseError, "annotation CSV needs report_id,diagnosis columns");
    std::vector<AnnotationRow> rows;
    rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        auto d = parse_diagnosis(row.fields[*dx_col]);
        if (!d) {
            throw Error(Errc::ParseError, "line " + std::to_string(row.line) + ": unknown diagnosis '" +
                                              row.fields[*dx_col] + "'");
        }
        rows.push_back(AnnotationRow{row.fields[*id_col], *d});
    }
    return rows;
}

std::size_t apply_annotations(ReportStore& store, std::span<const AnnotationRow> rows) {
    for (const auto& row : rows) {
        if (!store.find(row.report_id)) throw Error(Errc::UnknownReport, "unknown report " + row.report_id);
    }
    for (const auto& row : rows) store.attach_expert_diagnosis(row.report_id, row.diagnosis);
    return rows.size();
}

}  // namespace cropsense::ingestion
