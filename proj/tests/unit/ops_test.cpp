#include "cropsense/error.hpp"
#include "cropsense/ops.hpp"

#include "test_registry.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace cropsense;
using namespace cropsense::ops;

namespace {

std::vector<std::string> ids(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("agent" + std::to_string(1000 + i));
    return out;
}

}  // namespace

TEST(Calls, SixOperatorsOver175Agents) {
    const auto plan = assign_calls(ids(175), 6);
    ASSERT_EQ(plan.size(), 6u);
    std::vector<std::size_t> loads;
    std::set<std::string> seen;
    for (const auto& a : plan) {
        loads.push_back(a.agent_ids.size());
        for (const auto& id : a.agent_ids) EXPECT_TRUE(seen.insert(id).second);
    }
    EXPECT_EQ(loads, (std::vector<std::size_t>{30, 29, 29, 29, 29, 29}));
    EXPECT_EQ(seen.size(), 175u);
}

TEST(Calls, EdgeCases) {
    EXPECT_TRUE(assign_calls(std::vector<std::string>{}, 6).empty());
    const auto even = assign_calls(ids(6), 6);
    for (const auto& a : even) EXPECT_EQ(a.agent_ids.size(), 1u);
    EXPECT_THROW(assign_calls(ids(3), 0), Error);
    const auto dup = assign_calls(std::vector<std::string>{"b", "a", "b"}, 1);
    EXPECT_EQ(dup.front().agent_ids, (std::vector<std::string>{"a", "b"}));
}

TEST(Calls, FromRegistryUsesSelectedOnly) {
    auto reg = testing_support::active_registry(12);
    reg.withdraw_and_promote("A003");
    std::size_t total = 0;
    for (const auto& a : assign_calls(reg, 5)) total += a.agent_ids.size();
    EXPECT_EQ(total, 11u);
    std::ostringstream out;
    write_call_assignments_csv(out, assign_calls(reg, 5));
    EXPECT_EQ(out.str().rfind("operator_id,agent_id\n1,A000\n", 0), 0u);
}

TEST(Issues, JsonLineRoundTrip) {
    const IssueLogEntry e{"A001", "2018-W20", IssueCategory::Network, "no signal, \"again\"", true};
    EXPECT_EQ(issue_from_json_line(issue_to_json_line(e)), e);
    EXPECT_EQ(parse_issue_category("phoneuse"), IssueCategory::PhoneUse);
    EXPECT_THROW(issue_from_json_line(R"({"agent_id":"a","week":"2018-W20","category":"Weather"})"), Error);
    EXPECT_THROW(issue_from_json_line(R"({"agent_id":"a","week":"May","category":"Other"})"), Error);
}

TEST(Issues, WeeklyReport) {
    std::vector<IssueLogEntry> log{
        {"A1", "2018-W20", IssueCategory::Technical, "app crash", true},
        {"A2", "2018-W20", IssueCategory::Technical, "screen", false},
        {"A3", "2018-W20", IssueCategory::Schedule, "planting", false},
        {"A4", "2018-W21", IssueCategory::Social, "spouse", true},
    };
    const auto r = weekly_issue_report(log, "2018-W20");
    EXPECT_EQ(r.total, 3);
    EXPECT_EQ(r.counts.size(), kIssueCategories.size());
    EXPECT_EQ(r.counts.at(IssueCategory::Technical), 2);
    EXPECT_EQ(r.counts.at(IssueCategory::Network), 0);
    ASSERT_EQ(r.open.size(), 1u);
    EXPECT_EQ(r.open[0].agent_id, "A1");
    std::ostringstream out;
    write_issue_report_csv(out, r);
    EXPECT_NE(out.str().find("open,Technical,1,A1,app crash"), std::string::npos);

    std::istringstream in(issue_to_json_line(log[0]) + "\n\n" + issue_to_json_line(log[3]) + "\n");
    EXPECT_EQ(read_issue_log(in).size(), 2u);
}
