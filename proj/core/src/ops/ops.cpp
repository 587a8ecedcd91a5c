#include "cropsense/ops.hpp"

#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

namespace cropsense::ops {

using json = nlohmann::ordered_json;

std::string_view to_string(IssueCategory c) noexcept {
    switch (c) {
    case IssueCategory::Technical: return "Technical";
    case IssueCategory::Network: return "Network";
    case IssueCategory::Social: return "Social";
    case IssueCategory::Schedule: return "Schedule";
    case IssueCategory::PhoneUse: return "PhoneUse";
    case IssueCategory::Other: return "Other";
    }
    return "";
}

std::optional<IssueCategory> parse_issue_category(std::string_view text) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
        return out;
    };
    const auto wanted = lower(text);
    for (auto c : kIssueCategories) {
        if (lower(to_string(c)) == wanted) return c;
    }
    return std::nullopt;
}

std::string issue_to_json_line(const IssueLogEntry& e) {
    return json{{"agent_id", e.agent_id},
                {"week", e.week},
                {"category", to_string(e.category)},
                {"note", e.note},
                {"escalated_to_engineering", e.escalated_to_engineering}}
        .dump();
}

IssueLogEntry issue_from_json_line(std::string_view line) {
    try {
        const auto j = json::parse(line);
        IssueLogEntry e;
        e.agent_id = j.at("agent_id").get<std::string>();
        e.week = j.at("week").get<std::string>();
        parse_iso_week(e.week);
        const auto category = j.at("category").get<std::string>();
        auto c = parse_issue_category(category);
        if (!c) throw Error(Errc::ParseError, "unknown issue category '" + category + "'");
        e.category = *c;
        e.note = j.value("note", std::string{});
        e.escalated_to_engineering = j.value("escalated_to_engineering", false);
        return e;
    } catch (const json::exception& ex) {
        throw Error(Errc::ParseError, std::string("issue log: ") + ex.what());
    }
}

std::vector<IssueLogEntry> read_issue_log(std::istream& in) {
    std::vector<IssueLogEntry> log;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            log.push_back(issue_from_json_line(line));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(n) + ": " + e.what());
        }
    }
    return log;
}

WeeklyIssueReport weekly_issue_report(std::span<const IssueLogEntry> log, std::string_view week) {
    WeeklyIssueReport report;
    report.week = std::string(week);
    for (auto c : kIssueCategories) report.counts[c] = 0;
    for (const auto& e : log) {
        if (e.week != week) continue;
        ++report.counts[e.category];
        ++report.total;
        if (e.escalated_to_engineering) report.open.push_back(e);
    }
    return report;
}

void write_issue_report_csv(std::ostream& out, const WeeklyIssueReport& report) {
    out << "kind,category,count,agent_id,note\n";
    for (const auto& [c, n] : report.counts) out << "count," << to_string(c) << ',' << n << ",,\n";
    for (const auto& e : report.open) {
        out << "open," << to_string(e.category) << ",1," << csv::escape(e.agent_id) << ',' << csv::escape(e.note) << '\n';
    }
}

std::vector<CallAssignment> assign_calls(std::vector<std::string> agent_ids, int operators) {
    if (operators < 1) throw Error(Errc::ConfigInvalid, "need at least one operator");
    std::sort(agent_ids.begin(), agent_ids.end());
    agent_ids.erase(std::unique(agent_ids.begin(), agent_ids.end()), agent_ids.end());
    std::vector<CallAssignment> out;
    if (agent_ids.empty()) return out;
    for (int i = 0; i < operators; ++i) out.push_back(CallAssignment{i + 1, {}});
    for (std::size_t i = 0; i < agent_ids.size(); ++i) {
        out[i % static_cast<std::size_t>(operators)].agent_ids.push_back(std::move(agent_ids[i]));
    }
    return out;
}

std::vector<CallAssignment> assign_calls(const registry::Registry& registry, int operators) {
    std::vector<std::string> ids;
    for (const auto& a : registry.with_status(registry::AgentStatus::Selected)) ids.push_back(a.agent_id);
    return assign_calls(std::move(ids), operators);
}

void write_call_assignments_csv(std::ostream& out, std::span<const CallAssignment> assignments) {
    out << "operator_id,agent_id\n";
    for (const auto& a : assignments) {
        for (const auto& id : a.agent_ids) out << a.operator_id << ',' << csv::escape(id) << '\n';
    }
}

}  // namespace cropsense::ops
