#pragma once

#include "cropsense/registry.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace testing_support {

/// Registry of `n` Selected agents with devices, ids "A000".."Annn", spread
/// over the stations in order.
inline cropsense::registry::Registry active_registry(int n) {
    using namespace cropsense::registry;
    std::vector<FarmerAgent> agents;
    for (int i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "A%03d", i);
        FarmerAgent a;
        a.agent_id = id;
        a.profile.candidate_id = id;
        a.profile.name = std::string("Farmer ") + id;
        a.profile.region = kZardis[static_cast<std::size_t>(i) % kZardis.size()];
        a.profile.district = std::string(zardi_name(a.profile.region));
        a.profile.gender = i % 3 == 0 ? Gender::Female : Gender::Male;
        a.profile.age = 20 + (i * 7) % 41;
        a.profile.acreage = 1.0;
        a.age_group = age_group_for(a.profile.age);
        a.status = AgentStatus::Selected;
        a.device_id = std::string("DEV-") + id;
        a.mobile_money_account = std::string("2567") + id;
        agents.push_back(a);
    }
    return Registry(std::move(agents));
}

}  // namespace testing_support
