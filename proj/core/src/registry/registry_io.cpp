#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"

#include "json.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace cropsense::registry {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kCandidateColumns[] = {
    "candidate_id",     "name",           "region",          "district",           "gender",
    "age",              "acreage",        "in_farmers_group", "education_primary_or_above",
    "owns_functional_phone", "has_mobile_money", "literate", "has_charging_access",
    "spouse_informed",  "has_id_or_lc_letter", "producer_scale",
};

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string yes_no(const std::optional<bool>& v) {
    if (!v) return "";
    return *v ? "yes" : "no";
}

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
    throw Error(Errc::MalformedProfile, "row at line " + std::to_string(line) + ": " + what);
}

std::optional<bool> parse_yes_no(std::string_view text) {
    if (text == "yes" || text == "Yes" || text == "YES") return true;
    if (text == "no" || text == "No" || text == "NO") return false;
    return std::nullopt;
}

std::optional<ProducerScale> parse_scale(std::string_view text) {
    if (text == "Smallholder" || text == "smallholder") return ProducerScale::Smallholder;
    if (text == "MediumScale" || text == "medium_scale" || text == "medium") return ProducerScale::MediumScale;
    return std::nullopt;
}

std::optional<Criterion> parse_criterion(std::string_view text) {
    for (int i = 0; i <= static_cast<int>(Criterion::IdOrLcLetter); ++i) {
        if (to_string(static_cast<Criterion>(i)) == text) return static_cast<Criterion>(i);
    }
    return std::nullopt;
}

}  // namespace

std::vector<CandidateProfile> read_candidates_csv(std::istream& in) {
    csv::Table table;
    try {
        table = csv::read(in);
    } catch (const Error& e) {
        throw Error(Errc::MalformedProfile, e.what());
    }
    std::vector<std::size_t> col;
    for (const char* name : kCandidateColumns) {
        auto c = table.column(name);
        if (!c) throw Error(Errc::MalformedProfile, std::string("missing column '") + name + "'");
        col.push_back(*c);
    }

    std::vector<CandidateProfile> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        auto field = [&](std::size_t i) -> const std::string& { return f[col[i]]; };
        CandidateProfile c;
        c.candidate_id = field(0);
        c.name = field(1);
        if (c.candidate_id.empty()) bad_row(row.line, "empty candidate_id");
        auto region = parse_zardi(field(2));
        if (!region) bad_row(row.line, "unknown region '" + field(2) + "'");
        c.region = *region;
        c.district = field(3);
        if (c.district.empty()) bad_row(row.line, "empty district");
        auto gender = parse_gender(field(4));
        if (!gender) bad_row(row.line, "unknown gender '" + field(4) + "'");
        c.gender = *gender;

        const auto& age = field(5);
        auto [p1, e1] = std::from_chars(age.data(), age.data() + age.size(), c.age);
        if (e1 != std::errc{} || p1 != age.data() + age.size() || c.age <= 0) {
            bad_row(row.line, "invalid age '" + age + "'");
        }
        const auto& acreage = field(6);
        auto [p2, e2] = std::from_chars(acreage.data(), acreage.data() + acreage.size(), c.acreage);
        if (e2 != std::errc{} || p2 != acreage.data() + acreage.size() || !(c.acreage > 0.0)) {
            bad_row(row.line, "invalid acreage '" + acreage + "'");
        }

        std::optional<bool>* flags[] = {&c.in_farmers_group, &c.education_primary_or_above,
                                        &c.owns_functional_phone, &c.has_mobile_money,
                                        &c.literate, &c.has_charging_access,
                                        &c.spouse_informed, &c.has_id_or_lc_letter};
        for (std::size_t k = 0; k < std::size(flags); ++k) {
            auto v = parse_yes_no(field(7 + k));
            if (!v) {
                bad_row(row.line, std::string("column '") + kCandidateColumns[7 + k] + "' must be yes/no, got '" +
                                      field(7 + k) + "'");
            }
            *flags[k] = *v;
        }
        auto scale = parse_scale(field(15));
        if (!scale) bad_row(row.line, "unknown producer_scale '" + field(15) + "'");
        c.producer_scale = *scale;
        out.push_back(std::move(c));
    }
    return out;
}

void write_candidates_csv(std::ostream& out, std::span<const CandidateProfile> candidates) {
    out << csv::join(std::vector<std::string>(std::begin(kCandidateColumns), std::end(kCandidateColumns))) << '\n';
    for (const auto& c : candidates) {
        out << csv::join({c.candidate_id, c.name, std::string(zardi_name(c.region)), c.district,
                          std::string(to_string(c.gender)), std::to_string(c.age), shortest(c.acreage),
                          yes_no(c.in_farmers_group), yes_no(c.education_primary_or_above),
                          yes_no(c.owns_functional_phone), yes_no(c.has_mobile_money), yes_no(c.literate),
                          yes_no(c.has_charging_access), yes_no(c.spouse_informed), yes_no(c.has_id_or_lc_letter),
                          std::string(to_string(c.producer_scale))})
            << '\n';
    }
}

std::vector<RegionQuota> read_quotas_json(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("quota file: ") + e.what());
    }
    if (!doc.contains("quotas") || !doc["quotas"].is_array()) {
        throw Error(Errc::ConfigInvalid, "quota file must contain a \"quotas\" array");
    }
    std::vector<RegionQuota> quotas;
    try {
        for (const auto& q : doc["quotas"]) {
            RegionQuota quota;
            auto region = parse_zardi(q.at("region").get<std::string>());
            if (!region) throw Error(Errc::ConfigInvalid, "unknown region " + q.at("region").dump());
            quota.region = *region;
            quota.devices = q.value("devices", 40);
            if (q.contains("targets")) {
                const auto& t = q["targets"];
                quota.per_district_targets.female = t.value("female", 2);
                quota.per_district_targets.male = t.value("male", 2);
                quota.per_district_targets.youth = t.value("youth", 2);
            }
            quotas.push_back(quota);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("quota file: ") + e.what());
    }
    return quotas;
}

void write_quotas_json(std::ostream& out, std::span<const RegionQuota> quotas) {
    json arr = json::array();
    for (const auto& q : quotas) {
        arr.push_back({{"region", zardi_name(q.region)},
                       {"devices", q.devices},
                       {"targets",
                        {{"female", q.per_district_targets.female},
                         {"male", q.per_district_targets.male},
                         {"youth", q.per_district_targets.youth}}}});
    }
    out << json{{"quotas", arr}}.dump(2) << '\n';
}

std::string agent_to_json_line(const FarmerAgent& a) {
    const auto& p = a.profile;
    auto flag = [](const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); };
    json failed = json::array();
    for (auto c : a.failed_criteria) failed.push_back(to_string(c));
    json j{
        {"agent_id", a.agent_id},
        {"candidate_id", p.candidate_id},
        {"name", p.name},
        {"region", zardi_name(p.region)},
        {"region_label", region_label(p.region)},
        {"district", p.district},
        {"gender", to_string(p.gender)},
        {"age", p.age},
        {"acreage", p.acreage},
        {"in_farmers_group", flag(p.in_farmers_group)},
        {"education_primary_or_above", flag(p.education_primary_or_above)},
        {"owns_functional_phone", flag(p.owns_functional_phone)},
        {"has_mobile_money", flag(p.has_mobile_money)},
        {"literate", flag(p.literate)},
        {"has_charging_access", flag(p.has_charging_access)},
        {"spouse_informed", flag(p.spouse_informed)},
        {"has_id_or_lc_letter", flag(p.has_id_or_lc_letter)},
        {"producer_scale", to_string(p.producer_scale)},
        {"status", to_string(a.status)},
        {"device_id", a.device_id ? json(*a.device_id) : json(nullptr)},
        {"mobile_money_account", a.mobile_money_account},
        {"age_group", a.age_group ? json(to_string(*a.age_group)) : json(nullptr)},
        {"is_district_leader", a.is_district_leader},
        {"exception", a.exception_applied ? json(to_string(*a.exception_applied)) : json(nullptr)},
        {"failed_criteria", failed},
    };
    return j.dump();
}

FarmerAgent agent_from_json_line(std::string_view line) {
    try {
        const json j = json::parse(line);
        FarmerAgent a;
        auto& p = a.profile;
        a.agent_id = j.at("agent_id").get<std::string>();
        p.candidate_id = j.at("candidate_id").get<std::string>();
        p.name = j.at("name").get<std::string>();
        auto region = parse_zardi(j.at("region").get<std::string>());
        if (!region) throw Error(Errc::ParseError, "unknown region in agent " + a.agent_id);
        p.region = *region;
        p.district = j.at("district").get<std::string>();
        auto gender = parse_gender(j.at("gender").get<std::string>());
        if (!gender) throw Error(Errc::ParseError, "unknown gender in agent " + a.agent_id);
        p.gender = *gender;
        p.age = j.at("age").get<int>();
        p.acreage = j.at("acreage").get<double>();
        auto flag = [&](const char* key) -> std::optional<bool> {
            const auto& v = j.at(key);
            if (v.is_null()) return std::nullopt;
            return v.get<bool>();
        };
        p.in_farmers_group = flag("in_farmers_group");
        p.education_primary_or_above = flag("education_primary_or_above");
        p.owns_functional_phone = flag("owns_functional_phone");
        p.has_mobile_money = flag("has_mobile_money");
        p.literate = flag("literate");
        p.has_charging_access = flag("has_charging_access");
        p.spouse_informed = flag("spouse_informed");
        p.has_id_or_lc_letter = flag("has_id_or_lc_letter");
        auto scale = parse_scale(j.at("producer_scale").get<std::string>());
        if (!scale) throw Error(Errc::ParseError, "unknown producer_scale in agent " + a.agent_id);
        p.producer_scale = *scale;
        auto status = parse_status(j.at("status").get<std::string>());
        if (!status) throw Error(Errc::ParseError, "unknown status in agent " + a.agent_id);
        a.status = *status;
        if (!j.at("device_id").is_null()) a.device_id = j["device_id"].get<std::string>();
        a.mobile_money_account = j.at("mobile_money_account").get<std::string>();
        a.age_group = age_group_for(p.age);
        a.is_district_leader = j.value("is_district_leader", false);
        if (j.contains("exception") && !j["exception"].is_null()) a.exception_applied = ExceptionTag::MediumScaleProducer;
        if (j.contains("failed_criteria")) {
            for (const auto& c : j["failed_criteria"]) {
                auto crit = parse_criterion(c.get<std::string>());
                if (!crit) throw Error(Errc::ParseError, "unknown criterion in agent " + a.agent_id);
                a.failed_criteria.push_back(*crit);
            }
        }
        return a;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("agent record: ") + e.what());
    }
}

}  // namespace cropsense::registry
