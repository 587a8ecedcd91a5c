#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace cropsense::registry {

namespace {

std::size_t station_index(Zardi z) { return static_cast<std::size_t>(z); }

std::string device_prefix(Zardi z) {
    std::string prefix(zardi_name(z));
    for (char& ch : prefix) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return prefix;
}

std::string device_id(Zardi z, int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "-%03d", n);
    return device_prefix(z) + buf;
}

/// Target-filling candidates first (per district), then everyone else, both in
/// (district, candidate_id) order.
std::vector<FarmerAgent> selection_order(std::vector<FarmerAgent> eligible, const DistrictTargets& targets) {
    std::stable_sort(eligible.begin(), eligible.end(), [](const FarmerAgent& a, const FarmerAgent& b) {
        if (a.profile.district != b.profile.district) return a.profile.district < b.profile.district;
        return a.profile.candidate_id < b.profile.candidate_id;
    });

    std::vector<FarmerAgent> first;
    std::vector<FarmerAgent> rest;
    std::string district;
    int female = 0, male = 0, youth = 0;
    for (auto& agent : eligible) {
        if (agent.profile.district != district) {
            district = agent.profile.district;
            female = male = youth = 0;
        }
        const bool is_female = agent.profile.gender == Gender::Female;
        const bool fills_gender = is_female ? female < targets.female : male < targets.male;
        const bool fills_youth = is_youth(agent.profile.age) && youth < targets.youth;
        if (fills_gender || fills_youth) {
            if (is_female) {
                ++female;
            } else {
                ++male;
            }
            if (is_youth(agent.profile.age)) ++youth;
            first.push_back(std::move(agent));
        } else {
            rest.push_back(std::move(agent));
        }
    }
    first.insert(first.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
    return first;
}

}  // namespace

int VerifiedRoster::total_districts() const {
    int total = 0;
    for (const auto& [_, counts] : per_region) total += counts.districts;
    return total;
}

FarmerAgent make_agent(const CandidateProfile& candidate, const EligibilityResult& eligibility) {
    FarmerAgent agent;
    agent.agent_id = candidate.candidate_id;
    agent.profile = candidate;
    agent.mobile_money_account = "MM-" + candidate.candidate_id;
    agent.age_group = age_group_for(candidate.age);
    agent.exception_applied = eligibility.exception_applied;
    agent.failed_criteria = eligibility.failed_criteria;
    agent.status = eligibility.eligible ? AgentStatus::Waitlisted : AgentStatus::Rejected;
    return agent;
}

VerifiedRoster verify_roster(std::span<const CandidateProfile> candidates, std::span<const RegionQuota> quotas,
                             const VerifyOptions& options) {
    std::array<const RegionQuota*, kZardis.size()> quota_of{};
    for (const auto& q : quotas) {
        auto& slot = quota_of[station_index(q.region)];
        if (slot != nullptr) {
            throw Error(Errc::QuotaConflict, "two quotas name station " + std::string(zardi_name(q.region)));
        }
        if (q.devices < 0 || q.per_district_targets.female < 0 || q.per_district_targets.male < 0 ||
            q.per_district_targets.youth < 0) {
            throw Error(Errc::ConfigInvalid, "negative quota for station " + std::string(zardi_name(q.region)));
        }
        slot = &q;
    }

    VerifiedRoster roster;
    std::array<std::vector<FarmerAgent>, kZardis.size()> eligible;
    for (const auto& candidate : candidates) {
        if (quota_of[station_index(candidate.region)] == nullptr) {
            throw Error(Errc::ConfigInvalid, "no quota covers station " + std::string(zardi_name(candidate.region)) +
                                                 " (candidate " + candidate.candidate_id + ")");
        }
        const auto result = check_eligibility(candidate, options.allow_medium_scale);
        auto agent = make_agent(candidate, result);
        if (result.eligible) {
            eligible[station_index(candidate.region)].push_back(std::move(agent));
        } else {
            roster.rejected.push_back(std::move(agent));
        }
    }

    std::array<std::vector<FarmerAgent>, kZardis.size()> selected;
    std::array<std::vector<FarmerAgent>, kZardis.size()> waiting;
    std::array<int, kZardis.size()> spare{};
    for (Zardi z : kZardis) {
        const auto i = station_index(z);
        if (quota_of[i] == nullptr) continue;
        auto ordered = selection_order(std::move(eligible[i]), quota_of[i]->per_district_targets);
        const auto take = std::min<std::size_t>(ordered.size(), static_cast<std::size_t>(quota_of[i]->devices));
        selected[i].assign(std::make_move_iterator(ordered.begin()), std::make_move_iterator(ordered.begin() + take));
        waiting[i].assign(std::make_move_iterator(ordered.begin() + take), std::make_move_iterator(ordered.end()));
        spare[i] = quota_of[i]->devices - static_cast<int>(take);
    }

    // Hand spare capacity to the following stations that still have a queue.
    for (Zardi donor : kZardis) {
        const auto d = station_index(donor);
        for (std::size_t step = 1; step < kZardis.size() && spare[d] > 0; ++step) {
            const auto r = (d + step) % kZardis.size();
            if (waiting[r].empty()) continue;
            const int moved = std::min(spare[d], static_cast<int>(waiting[r].size()));
            selected[r].insert(selected[r].end(), std::make_move_iterator(waiting[r].begin()),
                               std::make_move_iterator(waiting[r].begin() + moved));
            waiting[r].erase(waiting[r].begin(), waiting[r].begin() + moved);
            spare[d] -= moved;
            roster.transfers.push_back(QuotaTransfer{donor, kZardis[r], moved});
        }
    }

    for (Zardi z : kZardis) {
        const auto i = station_index(z);
        if (quota_of[i] == nullptr) continue;
        auto& counts = roster.per_region[z];
        std::set<std::string> districts;
        for (auto& agent : selected[i]) {
            agent.status = AgentStatus::Selected;
            ++(agent.profile.gender == Gender::Female ? counts.female : counts.male);
            districts.insert(agent.profile.district);
            roster.selected.push_back(std::move(agent));
        }
        counts.selected = static_cast<int>(selected[i].size());
        counts.districts = static_cast<int>(districts.size());
        counts.waitlisted = static_cast<int>(waiting[i].size());
        for (auto& agent : waiting[i]) {
            agent.status = AgentStatus::Waitlisted;
            roster.waitlist.push_back(std::move(agent));
        }
    }
    for (const auto& agent : roster.rejected) ++roster.per_region[agent.profile.region].rejected;
    return roster;
}

DeviceAllocation allocate_devices(const VerifiedRoster& roster, std::span<const RegionQuota> quotas) {
    std::array<int, kZardis.size()> pool{};
    std::array<bool, kZardis.size()> has_quota{};
    for (const auto& q : quotas) {
        const auto i = station_index(q.region);
        if (has_quota[i]) {
            throw Error(Errc::QuotaConflict, "two quotas name station " + std::string(zardi_name(q.region)));
        }
        has_quota[i] = true;
        pool[i] = q.devices;
    }

    std::array<int, kZardis.size()> transferred_out{};
    std::array<std::vector<std::pair<Zardi, int>>, kZardis.size()> transferred_in;
    for (const auto& t : roster.transfers) {
        transferred_out[station_index(t.from)] += t.count;
        transferred_in[station_index(t.to)].emplace_back(t.from, t.count);
    }

    std::array<std::vector<const FarmerAgent*>, kZardis.size()> by_station;
    for (const auto& agent : roster.selected) by_station[station_index(agent.profile.region)].push_back(&agent);

    DeviceAllocation allocation;
    std::array<int, kZardis.size()> used{};
    for (Zardi z : kZardis) {
        const auto i = station_index(z);
        const auto& agents = by_station[i];
        int capacity = std::max(0, pool[i] - transferred_out[i]);
        for (const auto& [_, count] : transferred_in[i]) capacity += count;
        if (static_cast<int>(agents.size()) > capacity) {
            throw Error(Errc::InsufficientDevices, std::to_string(agents.size()) + " selected agents at " +
                                                       std::string(zardi_name(z)) + " but only " +
                                                       std::to_string(capacity) + " devices available");
        }

        std::size_t next = 0;
        const int own = std::min<int>(static_cast<int>(agents.size()), std::max(0, pool[i] - transferred_out[i]));
        for (int n = 0; n < own; ++n) {
            allocation.device_of.emplace(agents[next++]->agent_id, device_id(z, ++used[i]));
        }
        for (const auto& [donor, count] : transferred_in[i]) {
            const auto d = station_index(donor);
            for (int n = 0; n < count && next < agents.size(); ++n) {
                allocation.device_of.emplace(agents[next++]->agent_id, device_id(donor, ++used[d]));
            }
        }
    }

    for (Zardi z : kZardis) {
        const auto i = station_index(z);
        if (!has_quota[i]) continue;
        allocation.unassigned[z] = pool[i] - used[i];
        allocation.total_devices += pool[i];
    }
    return allocation;
}

void apply_allocation(VerifiedRoster& roster, const DeviceAllocation& allocation) {
    for (auto& agent : roster.selected) {
        if (auto it = allocation.device_of.find(agent.agent_id); it != allocation.device_of.end()) {
            agent.device_id = it->second;
        }
    }
}

std::string elect_district_leader(std::string_view district, const std::map<std::string, std::string>& votes) {
    if (votes.empty()) throw Error(Errc::NoVotes, "no ballots cast in district " + std::string(district));
    std::map<std::string, int> tally;
    for (const auto& [_, votee] : votes) ++tally[votee];
    // std::map iterates in byte order, so a strict comparison keeps the
    // smallest id among tied candidates.
    auto best = tally.begin();
    for (auto it = tally.begin(); it != tally.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

}  // namespace cropsense::registry
