#pragma once

#include "cropsense/simulator.hpp"

namespace testing_support {

/// The default campaign, simulated once per test binary.
inline const cropsense::simulator::CampaignTrace& default_trace() {
    static const auto trace = cropsense::simulator::simulate_campaign(cropsense::simulator::CampaignConfig::reference_default());
    return trace;
}

}  // namespace testing_support
