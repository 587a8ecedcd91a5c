#pragma once

#include "cropsense/diagnosis.hpp"
#include "cropsense/incentives.hpp"
#include "cropsense/ingestion.hpp"
#include "cropsense/registry.hpp"
#include "cropsense/time.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cropsense::simulator {

/// Multiplier applied to one station's agents over an inclusive week range.
struct RegionalEffect {
    registry::Zardi region = registry::Zardi::Arua;
    int from_week = 0;
    int to_week = 0;
    double multiplier = 1.0;
};

struct CampaignConfig {
    std::uint64_t seed = 20180416;
    Date start = std::chrono::sys_days{std::chrono::year{2018} / std::chrono::April / 16};
    int duration_days = 227;
    incentives::Ugx budget = 0;

    // Participation model. Weekly counts are gamma-Poisson draws around
    // base_rate x agent factor x season x region x gender x incentive x decay.
    double base_rate = 10.0;            // mean reports per agent-week
    double agent_heterogeneity = 0.0;   // gamma shape of per-agent factors; <= 0 means identical agents
    double weekly_dispersion = 0.0;     // gamma shape of weekly noise; <= 0 means Poisson
    double price_sensitivity = 0.2;
    double sensitivity_spread = 0.0;    // uniform +/- around price_sensitivity
    double dropout_probability = 0.0;
    std::vector<double> season_modifiers;  // per week; missing weeks are 1
    std::map<registry::Zardi, double> region_modifiers;
    std::map<registry::Gender, double> gender_modifiers;
    std::vector<RegionalEffect> regional_effects;

    // Geography, in decimal degrees.
    double home_radius = 0.3;  // agent home around the station
    double roam_radius = 0.08; // reports around the agent home

    // Content.
    std::array<double, 4> label_mix{0.55, 0.2, 0.1, 0.15};  // ingestion::kLabels order
    std::array<double, 4> disease_mix{0.2, 0.15, 0.1, 0.55};  // CBB, CBSD, CGM, CMD
    double comment_rate = 0.5;
    double farmer_accuracy = 0.6;
    double expert_annotation_rate = 0.18;

    // Payments.
    std::optional<incentives::SchemeBook> schemes;  // SchemeBook::reference_default() when unset
    double provider_failure_rate = 0.0;

    // Agents reporting well above the S2 threshold.
    int high_performers = 0;
    double high_performer_rate = 500.0;

    int weeks() const noexcept { return (duration_days + 6) / 7; }
    Date end() const noexcept { return start + std::chrono::days{duration_days - 1}; }
    const incentives::SchemeBook& scheme_book() const;

    /// Throws ConfigInvalid.
    void validate() const;

    /// The 175-agent, 227-day preset calibrated to the published campaign.
    static CampaignConfig reference_default();
};

CampaignConfig read_campaign_config_json(std::istream& in);
void write_campaign_config_json(std::ostream& out, const CampaignConfig& config);

struct AgentBehavior {
    std::string agent_id;
    registry::Zardi region = registry::Zardi::Arua;
    double base_rate = 0.0;
    double price_sensitivity = 0.0;
    std::optional<int> dropout_week;
    double home_lat = 0.0;
    double home_lon = 0.0;
    double roam_radius = 0.0;
    bool high_performer = false;
};

struct WeekSummary {
    Date week_start;
    incentives::SchemeId scheme = incentives::SchemeId::S1;
    std::uint64_t reports = 0;
    double expected_reports = 0.0;  // sum of agent rates before noise
    int decay_weeks = 0;            // weeks since the budget ran out
    std::size_t statements = 0;
    std::size_t paid = 0;
    std::size_t failed = 0;
    incentives::Ugx paid_amount = 0;
    incentives::Ugx fees = 0;
    incentives::Ugx float_remaining = 0;
};

struct CampaignTrace {
    std::shared_ptr<registry::Registry> registry;
    std::shared_ptr<ingestion::ReportStore> store;
    std::vector<AgentBehavior> agents;
    std::vector<incentives::PayoutStatement> statements;  // with receipts
    std::vector<WeekSummary> weeks;
    std::optional<int> budget_exhausted_week;

    std::uint64_t total_reports() const;
    incentives::Ugx total_paid() const;
    incentives::Ugx total_fees() const;
};

/// Builds the verified 175-agent roster, then runs the campaign week by week:
/// reports go through ReportStore with a simulated clock, and each week's
/// statements are computed and disbursed through a PayoutLedger backed by a
/// SimulatedPayoutClient whose float is the budget. Once the float cannot
/// cover a transfer, every agent's rate decays by (1 - sensitivity) per week.
/// Deterministic for a given config.
CampaignTrace simulate_campaign(const CampaignConfig& config);

/// Same campaign with `n` designated agents (lowest agent ids) drawing more
/// than 400 reports every week around high_performer_rate.
CampaignTrace high_performer_scenario(CampaignConfig config, int n);

/// reports.jsonl, registry.jsonl, ledger.csv, weekly_spend.csv and
/// weekly_series.csv under `dir`.
void write_trace(const CampaignTrace& trace, const CampaignConfig& config, const std::filesystem::path& dir);

}  // namespace cropsense::simulator
