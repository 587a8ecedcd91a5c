#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

using namespace cropsense;
using namespace cropsense::registry;

namespace {

CandidateProfile eligible(std::string id, Zardi region = Zardi::Lira, std::string district = "Lira") {
    CandidateProfile c;
    c.candidate_id = std::move(id);
    c.name = "Farmer " + c.candidate_id;
    c.region = region;
    c.district = std::move(district);
    c.gender = Gender::Female;
    c.age = 35;
    c.acreage = 1.0;
    c.in_farmers_group = true;
    c.education_primary_or_above = true;
    c.owns_functional_phone = true;
    c.has_mobile_money = true;
    c.literate = true;
    c.has_charging_access = true;
    c.spouse_informed = true;
    c.has_id_or_lc_letter = true;
    return c;
}

std::vector<CandidateProfile> fixture_candidates() {
    std::ifstream in(std::string(CROPSENSE_FIXTURE_DIR) + "/table1_candidates.csv");
    return read_candidates_csv(in);
}

std::vector<RegionQuota> fixture_quotas() {
    std::ifstream in(std::string(CROPSENSE_FIXTURE_DIR) + "/table1_quotas.json");
    return read_quotas_json(in);
}

}  // namespace

TEST(Eligibility, AllCriteriaMet) {
    const auto r = check_eligibility(eligible("c1"), true);
    EXPECT_TRUE(r.eligible);
    EXPECT_TRUE(r.failed_criteria.empty());
    EXPECT_FALSE(r.exception_applied);
}

TEST(Eligibility, AgeOutOfRange) {
    auto c = eligible("c1");
    c.age = 65;
    const auto r = check_eligibility(c, true);
    EXPECT_FALSE(r.eligible);
    EXPECT_EQ(r.failed_criteria, std::vector<Criterion>{Criterion::AgeRange});
}

TEST(Eligibility, AgeBoundsInclusive) {
    auto c = eligible("c1");
    c.age = 20;
    EXPECT_TRUE(check_eligibility(c, false).eligible);
    c.age = 60;
    EXPECT_TRUE(check_eligibility(c, false).eligible);
    c.age = 19;
    EXPECT_FALSE(check_eligibility(c, false).eligible);
}

TEST(Eligibility, MediumScaleException) {
    auto c = eligible("c1");
    c.acreage = 4.0;
    const auto with = check_eligibility(c, true);
    EXPECT_TRUE(with.eligible);
    EXPECT_EQ(with.exception_applied, ExceptionTag::MediumScaleProducer);
    const auto without = check_eligibility(c, false);
    EXPECT_FALSE(without.eligible);
    EXPECT_EQ(without.failed_criteria, std::vector<Criterion>{Criterion::Acreage});
}

TEST(Eligibility, MediumScaleWaivesOnlyAcreage) {
    auto c = eligible("c1");
    c.acreage = 4.0;
    c.literate = false;
    const auto r = check_eligibility(c, true);
    EXPECT_FALSE(r.eligible);
    EXPECT_EQ(r.failed_criteria, std::vector<Criterion>{Criterion::Literacy});
}

TEST(Eligibility, EveryFailureListedInOrder) {
    CandidateProfile c = eligible("c1");
    c.age = 70;
    c.acreage = 0.2;
    c.in_farmers_group = false;
    c.education_primary_or_above = false;
    c.owns_functional_phone = false;
    c.has_mobile_money = false;
    c.literate = false;
    c.has_charging_access = false;
    c.spouse_informed = false;
    c.has_id_or_lc_letter = false;
    const auto r = check_eligibility(c, true);
    EXPECT_EQ(r.failed_criteria.size(), 10u);
    EXPECT_TRUE(std::is_sorted(r.failed_criteria.begin(), r.failed_criteria.end()));
}

TEST(Eligibility, MissingFieldIsMalformed) {
    auto c = eligible("c1");
    c.spouse_informed.reset();
    try {
        check_eligibility(c, true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MalformedProfile);
    }
    auto d = eligible("c2");
    d.acreage = 0.0;
    EXPECT_THROW(check_eligibility(d, true), Error);
}

TEST(AgeGroups, TotalOverRange) {
    for (int age = kMinAge; age <= kMaxAge; ++age) EXPECT_TRUE(age_group_for(age)) << age;
    EXPECT_EQ(age_group_for(30), AgeGroup::A20_30);
    EXPECT_EQ(age_group_for(31), AgeGroup::A31_40);
    EXPECT_EQ(age_group_for(60), AgeGroup::A51_60);
    EXPECT_FALSE(age_group_for(61));
}

TEST(Zardis, LabelsMapBothWays) {
    const std::vector<std::string> labels{"West Nile", "Near West", "North", "Far West", "Far East", "Near East",
                                          "Central"};
    for (std::size_t i = 0; i < kZardis.size(); ++i) {
        EXPECT_EQ(region_label(kZardis[i]), labels[i]);
        EXPECT_EQ(parse_zardi(labels[i]), kZardis[i]);
        EXPECT_EQ(parse_zardi(zardi_name(kZardis[i])), kZardis[i]);
    }
    EXPECT_EQ(parse_zardi("tororo"), Zardi::Tororo);
    EXPECT_FALSE(parse_zardi("Kampala"));
}

TEST(VerifyRoster, Table1Fixture) {
    const auto roster = verify_roster(fixture_candidates(), fixture_quotas());
    EXPECT_EQ(roster.selected.size(), 175u);
    const std::array<int, 7> expected{23, 16, 43, 8, 32, 17, 36};
    int male = 0, female = 0;
    for (std::size_t i = 0; i < kZardis.size(); ++i) {
        const auto& counts = roster.per_region.at(kZardis[i]);
        EXPECT_EQ(counts.selected, expected[i]) << zardi_name(kZardis[i]);
        male += counts.male;
        female += counts.female;
    }
    EXPECT_EQ(male, 112);
    EXPECT_EQ(female, 63);
    EXPECT_EQ(roster.total_districts(), 48);
    EXPECT_EQ(roster.selected.size() + roster.waitlist.size() + roster.rejected.size(), 246u);
}

TEST(VerifyRoster, PartitionAndEligibility) {
    const auto candidates = fixture_candidates();
    const auto roster = verify_roster(candidates, fixture_quotas());
    std::set<std::string> seen;
    for (const auto* group : {&roster.selected, &roster.waitlist, &roster.rejected}) {
        for (const auto& a : *group) EXPECT_TRUE(seen.insert(a.agent_id).second) << a.agent_id;
    }
    EXPECT_EQ(seen.size(), candidates.size());
    for (const auto& a : roster.selected) EXPECT_TRUE(check_eligibility(a.profile, true).eligible);
    for (const auto& a : roster.waitlist) EXPECT_TRUE(check_eligibility(a.profile, true).eligible);
    for (const auto& a : roster.rejected) EXPECT_FALSE(check_eligibility(a.profile, true).eligible);
}

TEST(VerifyRoster, Deterministic) {
    const auto candidates = fixture_candidates();
    auto shuffled = candidates;
    std::reverse(shuffled.begin(), shuffled.end());
    const auto a = verify_roster(candidates, fixture_quotas());
    const auto b = verify_roster(shuffled, fixture_quotas());
    auto ids = [](const std::vector<FarmerAgent>& v) {
        std::vector<std::string> out;
        for (const auto& x : v) out.push_back(x.agent_id);
        std::sort(out.begin(), out.end());
        return out;
    };
    EXPECT_EQ(ids(a.selected), ids(b.selected));
    EXPECT_EQ(ids(a.waitlist), ids(b.waitlist));
    EXPECT_EQ(a.transfers, b.transfers);
}

TEST(VerifyRoster, EmptyInput) {
    const auto roster = verify_roster({}, default_quotas());
    EXPECT_TRUE(roster.selected.empty());
    EXPECT_TRUE(roster.waitlist.empty());
    EXPECT_TRUE(roster.rejected.empty());
    for (const auto& [_, c] : roster.per_region) EXPECT_EQ(c, RegionCounts{});
}

TEST(VerifyRoster, OverQuotaGoesToWaitlist) {
    std::vector<CandidateProfile> candidates;
    for (int i = 0; i < 10; ++i) candidates.push_back(eligible("c" + std::to_string(i)));
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, z == Zardi::Lira ? 5 : 0, {}});
    const auto roster = verify_roster(candidates, quotas);
    ASSERT_EQ(roster.selected.size(), 5u);
    EXPECT_EQ(roster.waitlist.size(), 5u);
    // Same district for all, so selection is by candidate id.
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(roster.selected[i].agent_id, "c" + std::to_string(i));
}

TEST(VerifyRoster, DuplicateQuotaConflicts) {
    auto quotas = default_quotas();
    quotas.push_back(quotas.front());
    try {
        verify_roster({}, quotas);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::QuotaConflict);
    }
}

TEST(VerifyRoster, SurplusMovesToStationWithWaitlist) {
    std::vector<CandidateProfile> candidates;
    for (int i = 0; i < 3; ++i) candidates.push_back(eligible("a" + std::to_string(i), Zardi::Arua, "Arua"));
    for (int i = 0; i < 8; ++i) candidates.push_back(eligible("l" + std::to_string(i), Zardi::Lira, "Lira"));
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, 0, {}});
    quotas[0].devices = 5;  // Arua: 2 spare
    quotas[2].devices = 4;  // Lira: 4 waitlisted
    const auto roster = verify_roster(candidates, quotas);
    EXPECT_EQ(roster.selected.size(), 9u);
    EXPECT_EQ(roster.waitlist.size(), 2u);
    ASSERT_EQ(roster.transfers.size(), 1u);
    EXPECT_EQ(roster.transfers[0], (QuotaTransfer{Zardi::Arua, Zardi::Lira, 2}));

    const auto alloc = allocate_devices(roster, quotas);
    EXPECT_EQ(alloc.assigned(), 9);
    EXPECT_EQ(alloc.unassigned_total(), 0);
}

TEST(VerifyRoster, GenderTargetsRelax) {
    // Only men in one district: the female target cannot be met, the
    // remaining seats still fill.
    std::vector<CandidateProfile> candidates;
    for (int i = 0; i < 6; ++i) {
        auto c = eligible("m" + std::to_string(i));
        c.gender = Gender::Male;
        candidates.push_back(c);
    }
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, z == Zardi::Lira ? 4 : 0, {}});
    const auto roster = verify_roster(candidates, quotas);
    EXPECT_EQ(roster.selected.size(), 4u);
    EXPECT_EQ(roster.per_region.at(Zardi::Lira).male, 4);
}

TEST(Devices, Table1Allocation) {
    auto roster = verify_roster(fixture_candidates(), fixture_quotas());
    const auto alloc = allocate_devices(roster, fixture_quotas());
    EXPECT_EQ(alloc.assigned(), 175);
    EXPECT_EQ(alloc.total_devices, 280);
    EXPECT_EQ(alloc.unassigned_total(), 280 - 175);
    std::set<std::string> devices;
    for (const auto& [_, d] : alloc.device_of) EXPECT_TRUE(devices.insert(d).second) << d;
    apply_allocation(roster, alloc);
    for (const auto& a : roster.selected) EXPECT_TRUE(a.device_id);
}

TEST(Devices, EmptyRoster) {
    const auto alloc = allocate_devices(VerifiedRoster{}, default_quotas());
    EXPECT_EQ(alloc.assigned(), 0);
}

TEST(Devices, OverCapacityThrows) {
    VerifiedRoster roster;
    for (int i = 0; i < 41; ++i) {
        FarmerAgent a;
        a.agent_id = "x" + std::to_string(i);
        a.profile = eligible(a.agent_id, Zardi::Wakiso, "Wakiso");
        a.status = AgentStatus::Selected;
        roster.selected.push_back(a);
    }
    try {
        allocate_devices(roster, default_quotas());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientDevices);
    }
}

TEST(Election, Plurality) {
    EXPECT_EQ(elect_district_leader("d", {{"a", "b"}, {"c", "b"}, {"b", "a"}}), "b");
    EXPECT_EQ(elect_district_leader("d", {{"a", "a"}}), "a");
}

TEST(Election, TieGoesToSmallestId) {
    // Exhaustive tally oracle over every two-candidate split.
    const std::vector<std::string> ids{"B7", "a1", "A2", "b0"};
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const std::map<std::string, std::string> votes{{"v1", ids[i]}, {"v2", ids[j]}};
            EXPECT_EQ(elect_district_leader("d", votes), std::min(ids[i], ids[j]));
        }
    }
}

TEST(Election, NoVotes) {
    try {
        elect_district_leader("d", {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoVotes);
    }
}

TEST(RegistryOps, ElectValidatesAndSetsSingleLeader) {
    const auto roster = verify_roster(fixture_candidates(), fixture_quotas());
    Registry reg(roster);
    std::vector<std::string> locals;
    for (const auto& a : roster.selected) {
        if (a.profile.district == roster.selected.front().profile.district) locals.push_back(a.agent_id);
    }
    ASSERT_GE(locals.size(), 2u);
    const std::string district = roster.selected.front().profile.district;
    EXPECT_EQ(reg.elect_leader(district, {{locals[0], locals[1]}, {locals[1], locals[1]}}), locals[1]);
    EXPECT_EQ(reg.elect_leader(district, {{locals[0], locals[0]}}), locals[0]);
    int leaders = 0;
    for (const auto& a : reg.agents()) leaders += a.profile.district == district && a.is_district_leader;
    EXPECT_EQ(leaders, 1);

    try {
        reg.elect_leader(district, {{locals[0], "nobody"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidVote);
    }
}

TEST(RegistryOps, WithdrawPromotesSameStation) {
    std::vector<CandidateProfile> candidates;
    for (int i = 0; i < 4; ++i) candidates.push_back(eligible("l" + std::to_string(i), Zardi::Lira, "Lira"));
    for (int i = 0; i < 3; ++i) candidates.push_back(eligible("w" + std::to_string(i), Zardi::Wakiso, "Wakiso"));
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, z == Zardi::Lira || z == Zardi::Wakiso ? 2 : 0, {}});
    auto roster = verify_roster(candidates, quotas);
    apply_allocation(roster, allocate_devices(roster, quotas));
    ASSERT_EQ(roster.waitlist.size(), 3u);
    Registry reg(roster);

    const auto device = reg.find("w0")->device_id;
    ASSERT_TRUE(device);
    const auto promoted = reg.withdraw_and_promote("w0");
    ASSERT_TRUE(promoted);
    EXPECT_EQ(*promoted, "w2");
    EXPECT_EQ(reg.find("w0")->status, AgentStatus::Withdrawn);
    EXPECT_FALSE(reg.find("w0")->device_id);
    EXPECT_EQ(reg.find("w2")->status, AgentStatus::Selected);
    EXPECT_EQ(reg.find("w2")->device_id, device);

    // Wakiso's list is empty now: the next promotion crosses stations.
    EXPECT_EQ(reg.withdraw_and_promote("w1"), "l2");
    EXPECT_EQ(reg.with_status(AgentStatus::Selected).size(), 4u);
    EXPECT_EQ(reg.withdraw_and_promote("w2"), "l3");
    EXPECT_FALSE(reg.withdraw_and_promote("l0"));
    try {
        reg.withdraw_and_promote("l0");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AgentNotActive);
    }
}

TEST(RegistryIo, JsonlRoundTrip) {
    auto roster = verify_roster(fixture_candidates(), fixture_quotas());
    apply_allocation(roster, allocate_devices(roster, fixture_quotas()));
    const Registry reg(roster);
    std::stringstream buf;
    reg.write_jsonl(buf);
    const Registry back = Registry::read_jsonl(buf);
    ASSERT_EQ(back.size(), reg.size());
    std::stringstream again;
    back.write_jsonl(again);
    std::stringstream first;
    reg.write_jsonl(first);
    EXPECT_EQ(first.str(), again.str());
}

TEST(RegistryIo, CandidatesCsvRoundTrip) {
    const auto candidates = fixture_candidates();
    std::stringstream buf;
    write_candidates_csv(buf, candidates);
    const auto back = read_candidates_csv(buf);
    ASSERT_EQ(back.size(), candidates.size());
    EXPECT_EQ(back[17].candidate_id, candidates[17].candidate_id);
    EXPECT_EQ(back[17].acreage, candidates[17].acreage);
    EXPECT_EQ(back[17].spouse_informed, candidates[17].spouse_informed);
}

TEST(RegistryIo, MalformedCsvCarriesLine) {
    std::istringstream in("candidate_id,name\nc1,Alice\n");
    try {
        read_candidates_csv(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(is_validation_error(e.code()));
    }
}

TEST(RegistryOps, ConcurrentReadersDuringWrites) {
    std::vector<CandidateProfile> candidates;
    for (int i = 0; i < 30; ++i) candidates.push_back(eligible("c" + std::to_string(100 + i)));
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, z == Zardi::Lira ? 10 : 0, {}});
    const auto roster = verify_roster(candidates, quotas);
    ASSERT_EQ(roster.waitlist.size(), 20u);
    Registry reg(roster);
    std::atomic<bool> stop{false};
    std::atomic<int> bad{0};
    std::thread reader([&] {
        while (!stop) {
            // Each promotion is one transaction, so Selected never dips.
            if (reg.with_status(AgentStatus::Selected).size() != 10) ++bad;
        }
    });
    for (const auto& a : roster.selected) reg.withdraw_and_promote(a.agent_id);
    for (int round = 0; round < 10; ++round) reg.withdraw_and_promote(reg.with_status(AgentStatus::Selected).front().agent_id);
    stop = true;
    reader.join();
    EXPECT_EQ(bad, 0);
    EXPECT_EQ(reg.with_status(AgentStatus::Selected).size(), 10u);
    EXPECT_EQ(reg.with_status(AgentStatus::Withdrawn).size(), 20u);
}
