#pragma once

#include "cropsense/registry.hpp"
#include "cropsense/time.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cropsense::ops {

enum class IssueCategory { Technical, Network, Social, Schedule, PhoneUse, Other };

inline constexpr std::array<IssueCategory, 6> kIssueCategories{IssueCategory::Technical, IssueCategory::Network,
                                                               IssueCategory::Social,    IssueCategory::Schedule,
                                                               IssueCategory::PhoneUse,  IssueCategory::Other};

std::string_view to_string(IssueCategory c) noexcept;
std::optional<IssueCategory> parse_issue_category(std::string_view text);

/// One call-centre conversation outcome. `week` is the ISO week label.
struct IssueLogEntry {
    std::string agent_id;
    std::string week;
    IssueCategory category = IssueCategory::Other;
    std::string note;
    bool escalated_to_engineering = false;

    friend bool operator==(const IssueLogEntry&, const IssueLogEntry&) = default;
};

std::string issue_to_json_line(const IssueLogEntry& entry);
/// Throws ParseError for malformed lines or unknown categories.
IssueLogEntry issue_from_json_line(std::string_view line);
std::vector<IssueLogEntry> read_issue_log(std::istream& in);

struct WeeklyIssueReport {
    std::string week;
    std::map<IssueCategory, int> counts;  // every category, zero-filled
    std::vector<IssueLogEntry> open;      // escalated entries
    int total = 0;
};

WeeklyIssueReport weekly_issue_report(std::span<const IssueLogEntry> log, std::string_view week);
/// category,count rows, then one open,<agent>,<category>,<note> row per escalation.
void write_issue_report_csv(std::ostream& out, const WeeklyIssueReport& report);

struct CallAssignment {
    int operator_id = 1;  // 1-based
    std::vector<std::string> agent_ids;

    friend bool operator==(const CallAssignment&, const CallAssignment&) = default;
};

/// Round-robin over the agent ids in byte order. Throws ConfigInvalid when
/// `operators` < 1.
std::vector<CallAssignment> assign_calls(std::vector<std::string> agent_ids, int operators);
/// Selected agents only.
std::vector<CallAssignment> assign_calls(const registry::Registry& registry, int operators);

/// operator_id,agent_id
void write_call_assignments_csv(std::ostream& out, std::span<const CallAssignment> assignments);

}  // namespace cropsense::ops
