#include "cropsense/simulator.hpp"

#include "json.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cropsense::simulator {

using json = nlohmann::ordered_json;

const incentives::SchemeBook& CampaignConfig::scheme_book() const {
    static const incentives::SchemeBook kDefault = incentives::SchemeBook::reference_default();
    return schemes ? *schemes : kDefault;
}

void CampaignConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::ConfigInvalid, what); };
    if (duration_days <= 0) fail("duration_days must be positive");
    if (budget < 0) fail("budget must be non-negative");
    if (!(base_rate >= 0.0)) fail("base_rate must be non-negative");
    if (!(price_sensitivity >= 0.0 && price_sensitivity <= 1.0)) fail("price_sensitivity must be in [0, 1]");
    if (!(sensitivity_spread >= 0.0)) fail("sensitivity_spread must be non-negative");
    if (!(dropout_probability >= 0.0 && dropout_probability <= 1.0)) fail("dropout_probability must be in [0, 1]");
    if (!(home_radius >= 0.0) || !(roam_radius >= 0.0)) fail("radii must be non-negative");
    for (double m : season_modifiers) {
        if (!(m >= 0.0)) fail("season modifiers must be non-negative");
    }
    for (const auto& [_, m] : region_modifiers) {
        if (!(m >= 0.0)) fail("region modifiers must be non-negative");
    }
    for (const auto& [_, m] : gender_modifiers) {
        if (!(m >= 0.0)) fail("gender modifiers must be non-negative");
    }
    for (const auto& e : regional_effects) {
        if (!(e.multiplier >= 0.0) || e.to_week < e.from_week) fail("invalid regional effect");
    }
    auto check_mix = [&](const std::array<double, 4>& mix, const char* name) {
        for (double p : mix) {
            if (!(p >= 0.0)) fail(std::string(name) + " has a negative weight");
        }
        if (std::abs(std::accumulate(mix.begin(), mix.end(), 0.0) - 1.0) > 1e-9) {
            fail(std::string(name) + " must sum to 1");
        }
    };
    check_mix(label_mix, "label_mix");
    check_mix(disease_mix, "disease_mix");
    for (double p : {comment_rate, farmer_accuracy, expert_annotation_rate, provider_failure_rate}) {
        if (!(p >= 0.0 && p <= 1.0)) fail("rates must be in [0, 1]");
    }
    if (high_performers < 0) fail("high_performers must be non-negative");
    if (!(high_performer_rate > 400.0)) fail("high_performer_rate must exceed 400");
    const auto& book = scheme_book();
    if (!book.covers(start)) fail("scheme schedule does not cover the campaign start");
}

CampaignConfig CampaignConfig::reference_default() {
    using registry::Zardi;
    CampaignConfig c;
    c.seed = 20180416;
    c.duration_days = 227;
    c.budget = 34'000'000;
    c.base_rate = 17.0;
    c.agent_heterogeneity = 4.0;
    c.weekly_dispersion = 5.0;
    c.price_sensitivity = 0.15;
    c.sensitivity_spread = 0.1;
    c.dropout_probability = 0.05;
    c.season_modifiers = {0.45, 0.6, 0.7, 0.8, 0.9,  0.95, 1.0,  1.1,  1.2,  1.25, 1.3,
                          1.3,  1.25, 1.2, 1.15, 1.1, 1.0,  0.95, 0.9,  0.85, 0.8,  0.75,
                          0.7,  0.65, 0.6, 0.55, 0.5, 0.5,  0.45, 0.45, 0.4,  0.4,  0.4};
    c.region_modifiers = {
        {Zardi::Arua, 0.4},   {Zardi::Bulindi, 1.05}, {Zardi::Lira, 0.85},   {Zardi::Rwebitaba, 1.6},
        {Zardi::Soroti, 0.85}, {Zardi::Tororo, 3.2},   {Zardi::Wakiso, 1.0},
    };
    c.gender_modifiers = {{registry::Gender::Male, 1.15}, {registry::Gender::Female, 1.0}};
    c.regional_effects = {RegionalEffect{Zardi::Lira, 6, 32, 0.6}};
    return c;
}

namespace {

std::array<double, 4> read_mix(const json& j, const std::array<std::string_view, 4>& keys,
                               const std::array<double, 4>& fallback) {
    if (j.is_null()) return fallback;
    std::array<double, 4> mix{};
    for (std::size_t i = 0; i < keys.size(); ++i) mix[i] = j.value(std::string(keys[i]), 0.0);
    return mix;
}

constexpr std::array<std::string_view, 4> kLabelKeys{"Disease", "Whitefly", "Anomaly", "Other"};
constexpr std::array<std::string_view, 4> kDiseaseKeys{"CBB", "CBSD", "CGM", "CMD"};

registry::Zardi zardi_from(const std::string& text) {
    auto z = registry::parse_zardi(text);
    if (!z) throw Error(Errc::ConfigInvalid, "unknown region '" + text + "'");
    return *z;
}

}  // namespace

CampaignConfig read_campaign_config_json(std::istream& in) {
    try {
        const json doc = json::parse(in);
        CampaignConfig c = doc.value("preset", std::string("reference")) == "reference" ? CampaignConfig::reference_default()
                                                                                 : CampaignConfig{};
        c.seed = doc.value("seed", c.seed);
        if (doc.contains("start")) c.start = parse_date(doc["start"].get<std::string>());
        c.duration_days = doc.value("duration_days", c.duration_days);
        c.budget = doc.value("budget", c.budget);
        c.base_rate = doc.value("base_rate", c.base_rate);
        c.agent_heterogeneity = doc.value("agent_heterogeneity", c.agent_heterogeneity);
        c.weekly_dispersion = doc.value("weekly_dispersion", c.weekly_dispersion);
        c.price_sensitivity = doc.value("price_sensitivity", c.price_sensitivity);
        c.sensitivity_spread = doc.value("sensitivity_spread", c.sensitivity_spread);
        c.dropout_probability = doc.value("dropout_probability", c.dropout_probability);
        if (doc.contains("season_modifiers")) c.season_modifiers = doc["season_modifiers"].get<std::vector<double>>();
        if (doc.contains("region_modifiers")) {
            c.region_modifiers.clear();
            for (const auto& [k, v] : doc["region_modifiers"].items()) c.region_modifiers[zardi_from(k)] = v.get<double>();
        }
        if (doc.contains("gender_modifiers")) {
            c.gender_modifiers.clear();
            for (const auto& [k, v] : doc["gender_modifiers"].items()) {
                auto g = registry::parse_gender(k);
                if (!g) throw Error(Errc::ConfigInvalid, "unknown gender '" + k + "'");
                c.gender_modifiers[*g] = v.get<double>();
            }
        }
        if (doc.contains("regional_effects")) {
            c.regional_effects.clear();
            for (const auto& e : doc["regional_effects"]) {
                c.regional_effects.push_back(RegionalEffect{zardi_from(e.at("region").get<std::string>()),
                                                            e.at("from_week").get<int>(), e.at("to_week").get<int>(),
                                                            e.at("multiplier").get<double>()});
            }
        }
        c.home_radius = doc.value("home_radius", c.home_radius);
        c.roam_radius = doc.value("roam_radius", c.roam_radius);
        if (doc.contains("label_mix")) c.label_mix = read_mix(doc["label_mix"], kLabelKeys, c.label_mix);
        if (doc.contains("disease_mix")) c.disease_mix = read_mix(doc["disease_mix"], kDiseaseKeys, c.disease_mix);
        c.comment_rate = doc.value("comment_rate", c.comment_rate);
        c.farmer_accuracy = doc.value("farmer_accuracy", c.farmer_accuracy);
        c.expert_annotation_rate = doc.value("expert_annotation_rate", c.expert_annotation_rate);
        c.provider_failure_rate = doc.value("provider_failure_rate", c.provider_failure_rate);
        c.high_performers = doc.value("high_performers", c.high_performers);
        c.high_performer_rate = doc.value("high_performer_rate", c.high_performer_rate);
        if (doc.contains("schemes") && !doc["schemes"].is_null()) {
            std::istringstream book(doc["schemes"].dump());
            c.schemes = incentives::read_scheme_book_json(book);
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("campaign config: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::ParseError) throw Error(Errc::ConfigInvalid, e.what());
        throw;
    }
}

void write_campaign_config_json(std::ostream& out, const CampaignConfig& c) {
    json regions = json::object();
    for (const auto& [z, m] : c.region_modifiers) regions[std::string(registry::zardi_name(z))] = m;
    json genders = json::object();
    for (const auto& [g, m] : c.gender_modifiers) genders[std::string(registry::to_string(g))] = m;
    json effects = json::array();
    for (const auto& e : c.regional_effects) {
        effects.push_back({{"region", registry::zardi_name(e.region)},
                           {"from_week", e.from_week},
                           {"to_week", e.to_week},
                           {"multiplier", e.multiplier}});
    }
    json labels = json::object();
    for (std::size_t i = 0; i < kLabelKeys.size(); ++i) labels[std::string(kLabelKeys[i])] = c.label_mix[i];
    json diseases = json::object();
    for (std::size_t i = 0; i < kDiseaseKeys.size(); ++i) diseases[std::string(kDiseaseKeys[i])] = c.disease_mix[i];
    json doc{
        {"preset", "none"},
        {"seed", c.seed},
        {"start", format_date(c.start)},
        {"duration_days", c.duration_days},
        {"budget", c.budget},
        {"base_rate", c.base_rate},
        {"agent_heterogeneity", c.agent_heterogeneity},
        {"weekly_dispersion", c.weekly_dispersion},
        {"price_sensitivity", c.price_sensitivity},
        {"sensitivity_spread", c.sensitivity_spread},
        {"dropout_probability", c.dropout_probability},
        {"season_modifiers", c.season_modifiers},
        {"region_modifiers", regions},
        {"gender_modifiers", genders},
        {"regional_effects", effects},
        {"home_radius", c.home_radius},
        {"roam_radius", c.roam_radius},
        {"label_mix", labels},
        {"disease_mix", diseases},
        {"comment_rate", c.comment_rate},
        {"farmer_accuracy", c.farmer_accuracy},
        {"expert_annotation_rate", c.expert_annotation_rate},
        {"provider_failure_rate", c.provider_failure_rate},
        {"high_performers", c.high_performers},
        {"high_performer_rate", c.high_performer_rate},
    };
    if (c.schemes) {
        std::ostringstream book;
        incentives::write_scheme_book_json(book, *c.schemes);
        doc["schemes"] = json::parse(book.str());
    }
    out << doc.dump(2) << '\n';
}

}  // namespace cropsense::simulator
