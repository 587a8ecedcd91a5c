#include "cropsense/analytics.hpp"
#include "cropsense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

namespace cropsense::simulator {

using incentives::Ugx;

namespace {

constexpr std::int64_t kSecondsPerWeek = 7 * 24 * 3600;

// Farmer wording per diagnosis, in Diagnosis enum order.
const std::array<std::vector<const char*>, 5> kComments{{
    {"cbb", "bacterial blight on leaves", "leaves wilting with lesions", "blight and wilting", "lesions on stem"},
    {"cbsd", "brown streak on stem", "rotten roots", "brown streak disease", "tuber rot", "candle stick shape"},
    {"cgm", "green mites under leaf", "pale stunted leaves", "mites on leaves"},
    {"cmd", "cassava mosaic", "yellow curling leaves", "mosaic disease", "twisted leaves", "leaves yellowing and curly"},
    {"healthy plant", "not sure", "white fly under leaf", "others", "good variety", "dry leaves"},
}};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    bool chance(double p) { return p > 0.0 && uniform() < p; }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    double gamma_factor(double shape) {
        if (shape <= 0.0) return 1.0;
        return std::gamma_distribution<double>(shape, 1.0 / shape)(engine_);
    }
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }
    std::uint64_t count(double mean, double dispersion) { return poisson(mean * gamma_factor(dispersion)); }
    template <std::size_t N>
    std::size_t pick(const std::array<double, N>& weights) {
        return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(engine_);
    }
    std::pair<double, double> in_disc(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double a = uniform(0.0, 2.0 * std::numbers::pi);
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    std::mt19937_64 engine_;
};

std::shared_ptr<registry::Registry> build_registry() {
    const auto candidates = registry::table1_candidates();
    const auto quotas = registry::default_quotas();
    auto roster = registry::verify_roster(candidates, quotas);
    registry::apply_allocation(roster, registry::allocate_devices(roster, quotas));
    return std::make_shared<registry::Registry>(roster);
}

std::vector<AgentBehavior> build_agents(const CampaignConfig& config, const registry::Registry& reg, Rng& rng,
                                        int high_performers) {
    auto active = reg.with_status(registry::AgentStatus::Selected);
    std::erase_if(active, [](const registry::FarmerAgent& a) { return !a.device_id; });
    std::sort(active.begin(), active.end(),
              [](const auto& a, const auto& b) { return a.agent_id < b.agent_id; });
    std::vector<AgentBehavior> agents;
    agents.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        const auto& a = active[i];
        AgentBehavior b;
        b.agent_id = a.agent_id;
        b.region = a.profile.region;
        const auto region_it = config.region_modifiers.find(b.region);
        const auto gender_it = config.gender_modifiers.find(a.profile.gender);
        b.base_rate = config.base_rate * rng.gamma_factor(config.agent_heterogeneity) *
                      (region_it == config.region_modifiers.end() ? 1.0 : region_it->second) *
                      (gender_it == config.gender_modifiers.end() ? 1.0 : gender_it->second);
        b.price_sensitivity = std::clamp(
            config.price_sensitivity + (config.sensitivity_spread > 0.0
                                            ? rng.uniform(-config.sensitivity_spread, config.sensitivity_spread)
                                            : 0.0),
            0.0, 1.0);
        if (rng.chance(config.dropout_probability)) {
            b.dropout_week = static_cast<int>(rng.integer(4, std::max(4, config.weeks() - 1)));
        }
        const auto [slat, slon] = registry::station_location(b.region);
        const auto [dlat, dlon] = rng.in_disc(config.home_radius);
        b.home_lat = slat + dlat;
        b.home_lon = slon + dlon;
        b.roam_radius = config.roam_radius;
        b.high_performer = static_cast<int>(i) < high_performers;
        agents.push_back(std::move(b));
    }
    return agents;
}

double week_modifier(const CampaignConfig& config, const AgentBehavior& agent, int week) {
    double m = static_cast<std::size_t>(week) < config.season_modifiers.size()
                   ? config.season_modifiers[static_cast<std::size_t>(week)]
                   : 1.0;
    for (const auto& e : config.regional_effects) {
        if (e.region == agent.region && week >= e.from_week && week <= e.to_week) m *= e.multiplier;
    }
    return m;
}

struct Event {
    Timestamp at;
    std::size_t agent;
    std::uint32_t seq;
};

CampaignTrace run(const CampaignConfig& config, int high_performers) {
    config.validate();
    const auto& book = config.scheme_book();

    Rng rng(config.seed);
    CampaignTrace trace;
    trace.registry = build_registry();
    trace.agents = build_agents(config, *trace.registry, rng, high_performers);
    if (trace.agents.empty()) throw Error(Errc::ConfigInvalid, "roster has no active agents");
    if (high_performers > static_cast<int>(trace.agents.size())) {
        throw Error(Errc::ConfigInvalid, "more high performers than agents");
    }

    auto now = std::make_shared<Timestamp>(Timestamp{config.start.time_since_epoch()});
    trace.store = std::make_shared<ingestion::ReportStore>(trace.registry.get(), [now] { return *now; });

    incentives::PayoutLedger ledger(book.transfer_fee());
    incentives::SimulatedPayoutClient::Options client_options;
    client_options.float_balance = config.budget;
    client_options.failure_rate = config.provider_failure_rate;
    client_options.seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
    incentives::SimulatedPayoutClient client(client_options);

    std::map<std::string, std::string> accounts;
    for (const auto& a : trace.registry->agents()) accounts.emplace(a.agent_id, a.mobile_money_account);

    std::vector<std::vector<incentives::PricedReport>> history(trace.agents.size());
    std::vector<std::uint32_t> attempts(trace.agents.size(), 0);
    std::optional<int> exhausted_since;
    bool float_failure = false;
    const Timestamp campaign_end{(config.end() + std::chrono::days{1}).time_since_epoch()};

    for (int w = 0; w < config.weeks(); ++w) {
        const Date monday = config.start + std::chrono::days{7 * w};
        const Timestamp week_begin{monday.time_since_epoch()};
        const Timestamp week_stop = std::min(Timestamp{week_begin + std::chrono::seconds{kSecondsPerWeek}}, campaign_end);
        const double fraction =
            static_cast<double>((week_stop - week_begin).count()) / static_cast<double>(kSecondsPerWeek);
        const auto& scheme = book.scheme_on(monday);

        if (!exhausted_since && (float_failure || client.remaining_float() <= book.transfer_fee())) {
            exhausted_since = w;
            trace.budget_exhausted_week = w;
        }
        WeekSummary summary;
        summary.week_start = monday;
        summary.scheme = scheme.id;
        summary.decay_weeks = exhausted_since ? w - *exhausted_since : 0;

        // Draw counts, then spread reports over the week in receipt order.
        std::vector<Event> events;
        for (std::size_t i = 0; i < trace.agents.size(); ++i) {
            const auto& agent = trace.agents[i];
            std::uint64_t n = 0;
            if (agent.high_performer) {
                const double rate = config.high_performer_rate * fraction;
                summary.expected_reports += rate;
                n = std::max<std::uint64_t>(rng.count(rate, config.weekly_dispersion), 401);
            } else if (!agent.dropout_week || w < *agent.dropout_week) {
                const auto next = static_cast<incentives::Ordinal>(history[i].size() + 1);
                const double marginal = static_cast<double>(incentives::report_price(next, scheme));
                const double incentive = std::clamp(
                    1.0 + agent.price_sensitivity * (marginal / static_cast<double>(scheme.base_price) - 1.0), 0.25, 4.0);
                const double decay = std::pow(1.0 - agent.price_sensitivity, summary.decay_weeks);
                const double rate = agent.base_rate * week_modifier(config, agent, w) * incentive * decay * fraction;
                summary.expected_reports += rate;
                n = rng.count(rate, config.weekly_dispersion);
            }
            const auto span = (week_stop - week_begin).count();
            for (std::uint64_t k = 0; k < n; ++k) {
                events.push_back(Event{week_begin + std::chrono::seconds{rng.integer(0, span - 1)}, i, attempts[i]++});
            }
        }
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            return std::tie(a.at, a.agent, a.seq) < std::tie(b.at, b.agent, b.seq);
        });

        for (const auto& e : events) {
            const auto& agent = trace.agents[e.agent];
            ingestion::Capture capture;
            const auto [dlat, dlon] = rng.in_disc(agent.roam_radius);
            capture.latitude = agent.home_lat + dlat;
            capture.longitude = agent.home_lon + dlon;
            capture.captured_at = e.at - std::chrono::seconds{rng.integer(0, 3600)};
            const auto label = ingestion::kLabels[rng.pick(config.label_mix)];
            capture.label = ingestion::to_string(label);

            Diagnosis truth = Diagnosis::None;
            if (label == ingestion::Label::Disease || (label == ingestion::Label::Anomaly && rng.chance(0.5))) {
                static constexpr std::array<Diagnosis, 4> kDiseases{Diagnosis::CBB, Diagnosis::CBSD, Diagnosis::CGM,
                                                                    Diagnosis::CMD};
                truth = kDiseases[rng.pick(config.disease_mix)];
            }
            if (rng.chance(config.comment_rate)) {
                Diagnosis said = truth;
                if (!rng.chance(config.farmer_accuracy)) said = kDiagnoses[static_cast<std::size_t>(rng.integer(0, 4))];
                const auto& phrases = kComments[static_cast<std::size_t>(said)];
                capture.comment = phrases[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(phrases.size()) - 1))];
            }
            char ref[96];
            std::snprintf(ref, sizeof ref, "sim:%016llx/%s/%u", static_cast<unsigned long long>(config.seed),
                          agent.agent_id.c_str(), e.seq);
            capture.image_ref = ref;

            *now = e.at;
            const auto accepted = trace.store->submit(agent.agent_id, capture);
            history[e.agent].push_back(incentives::PricedReport{accepted.ordinal, e.at});
            ++summary.reports;
            if (rng.chance(config.expert_annotation_rate)) trace.store->attach_expert_diagnosis(accepted.report_id, truth);
        }

        // End-of-week statements.
        const auto period = incentives::week_period(monday);
        for (std::size_t i = 0; i < trace.agents.size(); ++i) {
            if (history[i].empty()) continue;
            const auto statement = incentives::compute_payout(trace.agents[i].agent_id, history[i], period, book);
            if (statement.amount <= 0) continue;
            ++summary.statements;
            const auto receipt = ledger.disburse(statement, accounts.at(trace.agents[i].agent_id), client);
            if (receipt.status == incentives::ReceiptStatus::Paid) {
                ++summary.paid;
                summary.paid_amount += receipt.amount;
                summary.fees += receipt.fee;
            } else {
                ++summary.failed;
                if (receipt.failure == Errc::InsufficientFloat) float_failure = true;
            }
        }
        summary.float_remaining = client.remaining_float();
        trace.weeks.push_back(summary);
    }
    trace.statements = ledger.statements();
    return trace;
}

}  // namespace

std::uint64_t CampaignTrace::total_reports() const {
    std::uint64_t n = 0;
    for (const auto& w : weeks) n += w.reports;
    return n;
}

Ugx CampaignTrace::total_paid() const {
    Ugx n = 0;
    for (const auto& w : weeks) n += w.paid_amount;
    return n;
}

Ugx CampaignTrace::total_fees() const {
    Ugx n = 0;
    for (const auto& w : weeks) n += w.fees;
    return n;
}

CampaignTrace simulate_campaign(const CampaignConfig& config) { return run(config, config.high_performers); }

CampaignTrace high_performer_scenario(CampaignConfig config, int n) {
    if (n < 0) throw Error(Errc::ConfigInvalid, "negative high performer count");
    config.high_performers = n;
    return run(config, n);
}

void write_trace(const CampaignTrace& trace, const CampaignConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(Errc::IoError, "cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("reports.jsonl");
        trace.store->write_jsonl(out);
    }
    {
        auto out = open("registry.jsonl");
        trace.registry->write_jsonl(out);
    }
    {
        auto out = open("ledger.csv");
        incentives::write_ledger_csv(out, trace.statements);
    }
    {
        auto out = open("weekly_spend.csv");
        out << "week,week_start,scheme,reports,expected_reports,statements,paid,failed,paid_amount,fees,float_remaining\n";
        char buf[32];
        for (const auto& w : trace.weeks) {
            std::snprintf(buf, sizeof buf, "%.3f", w.expected_reports);
            out << format_iso_week(w.week_start) << ',' << format_date(w.week_start) << ','
                << incentives::to_string(w.scheme) << ',' << w.reports << ',' << buf << ',' << w.statements << ','
                << w.paid << ',' << w.failed << ',' << w.paid_amount << ',' << w.fees << ',' << w.float_remaining
                << '\n';
        }
    }
    {
        auto out = open("weekly_series.csv");
        const auto series = analytics::weekly_series(*trace.store, DateRange{config.start, config.end()});
        analytics::write_weekly_csv(out, series);
    }
}

}  // namespace cropsense::simulator
