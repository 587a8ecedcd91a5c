#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"

#include <istream>
#include <mutex>
#include <ostream>

namespace cropsense::registry {

Registry::Registry(std::vector<FarmerAgent> agents) : agents_(std::move(agents)) { rebuild_index(); }

Registry::Registry(const VerifiedRoster& roster) {
    agents_.reserve(roster.selected.size() + roster.waitlist.size() + roster.rejected.size());
    agents_.insert(agents_.end(), roster.selected.begin(), roster.selected.end());
    agents_.insert(agents_.end(), roster.waitlist.begin(), roster.waitlist.end());
    agents_.insert(agents_.end(), roster.rejected.begin(), roster.rejected.end());
    rebuild_index();
}

Registry::Registry(const Registry& other) {
    std::shared_lock lock(other.mutex_);
    agents_ = other.agents_;
    index_ = other.index_;
}

Registry& Registry::operator=(const Registry& other) {
    if (this == &other) return *this;
    std::scoped_lock lock(mutex_, other.mutex_);
    agents_ = other.agents_;
    index_ = other.index_;
    return *this;
}

void Registry::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (!index_.emplace(agents_[i].agent_id, i).second) {
            throw Error(Errc::ConfigInvalid, "duplicate agent id " + agents_[i].agent_id);
        }
    }
}

std::optional<FarmerAgent> Registry::find(std::string_view agent_id) const {
    std::shared_lock lock(mutex_);
    auto it = index_.find(agent_id);
    if (it == index_.end()) return std::nullopt;
    return agents_[it->second];
}

std::vector<FarmerAgent> Registry::agents() const {
    std::shared_lock lock(mutex_);
    return agents_;
}

std::vector<FarmerAgent> Registry::with_status(AgentStatus status) const {
    std::shared_lock lock(mutex_);
    std::vector<FarmerAgent> out;
    for (const auto& a : agents_) {
        if (a.status == status) out.push_back(a);
    }
    return out;
}

std::size_t Registry::size() const {
    std::shared_lock lock(mutex_);
    return agents_.size();
}

std::string Registry::elect_leader(std::string_view district, const std::map<std::string, std::string>& votes) {
    std::unique_lock lock(mutex_);
    auto check = [&](const std::string& id) {
        auto it = index_.find(id);
        if (it == index_.end()) throw Error(Errc::InvalidVote, "unknown agent " + id);
        const auto& a = agents_[it->second];
        if (a.status != AgentStatus::Selected || a.profile.district != district) {
            throw Error(Errc::InvalidVote,
                        "agent " + id + " is not a selected agent of district " + std::string(district));
        }
    };
    for (const auto& [voter, votee] : votes) {
        check(voter);
        check(votee);
    }
    auto winner = elect_district_leader(district, votes);
    for (auto& a : agents_) {
        if (a.profile.district == district) a.is_district_leader = (a.agent_id == winner);
    }
    return winner;
}

std::optional<std::string> Registry::withdraw_and_promote(std::string_view agent_id) {
    std::unique_lock lock(mutex_);
    auto it = index_.find(agent_id);
    if (it == index_.end()) throw Error(Errc::UnknownAgent, "unknown agent " + std::string(agent_id));
    auto& leaving = agents_[it->second];
    if (leaving.status != AgentStatus::Selected) {
        throw Error(Errc::AgentNotActive, "agent " + std::string(agent_id) + " is not selected");
    }
    leaving.status = AgentStatus::Withdrawn;
    leaving.is_district_leader = false;
    auto device = std::exchange(leaving.device_id, std::nullopt);
    const Zardi station = leaving.profile.region;

    FarmerAgent* next = nullptr;
    for (auto& a : agents_) {
        if (a.status == AgentStatus::Waitlisted && a.profile.region == station) {
            next = &a;
            break;
        }
    }
    if (next == nullptr) {
        for (auto& a : agents_) {
            if (a.status == AgentStatus::Waitlisted) {
                next = &a;
                break;
            }
        }
    }
    if (next == nullptr) return std::nullopt;
    next->status = AgentStatus::Selected;
    next->device_id = std::move(device);
    return next->agent_id;
}

void Registry::write_jsonl(std::ostream& out) const {
    std::shared_lock lock(mutex_);
    for (const auto& a : agents_) out << agent_to_json_line(a) << '\n';
}

Registry Registry::read_jsonl(std::istream& in) {
    std::vector<FarmerAgent> agents;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        agents.push_back(agent_from_json_line(line));
    }
    return Registry(std::move(agents));
}

}  // namespace cropsense::registry
