#include "cropsense/error.hpp"
#include "cropsense/registry.hpp"

#include <algorithm>
#include <cctype>

namespace cropsense::registry {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::string_view zardi_name(Zardi z) noexcept {
    switch (z) {
    case Zardi::Arua: return "Arua";
    case Zardi::Bulindi: return "Bulindi";
    case Zardi::Lira: return "Lira";
    case Zardi::Rwebitaba: return "Rwebitaba";
    case Zardi::Soroti: return "Soroti";
    case Zardi::Tororo: return "Tororo";
    case Zardi::Wakiso: return "Wakiso";
    }
    return "";
}

std::string_view region_label(Zardi z) noexcept {
    switch (z) {
    case Zardi::Arua: return "West Nile";
    case Zardi::Bulindi: return "Near West";
    case Zardi::Lira: return "North";
    case Zardi::Rwebitaba: return "Far West";
    case Zardi::Soroti: return "Far East";
    case Zardi::Tororo: return "Near East";
    case Zardi::Wakiso: return "Central";
    }
    return "";
}

std::optional<Zardi> parse_zardi(std::string_view text) {
    for (Zardi z : kZardis) {
        if (iequals(text, zardi_name(z)) || iequals(text, region_label(z))) return z;
    }
    return std::nullopt;
}

std::string_view to_string(Gender g) noexcept { return g == Gender::Male ? "Male" : "Female"; }

std::string_view to_string(ProducerScale s) noexcept {
    return s == ProducerScale::Smallholder ? "Smallholder" : "MediumScale";
}

std::string_view to_string(AgeGroup g) noexcept {
    switch (g) {
    case AgeGroup::A20_30: return "20-30";
    case AgeGroup::A31_40: return "31-40";
    case AgeGroup::A41_50: return "41-50";
    case AgeGroup::A51_60: return "51-60";
    }
    return "";
}

std::string_view to_string(AgentStatus s) noexcept {
    switch (s) {
    case AgentStatus::Selected: return "Selected";
    case AgentStatus::Waitlisted: return "Waitlisted";
    case AgentStatus::Rejected: return "Rejected";
    case AgentStatus::Withdrawn: return "Withdrawn";
    }
    return "";
}

std::optional<Gender> parse_gender(std::string_view text) {
    if (iequals(text, "male") || iequals(text, "m")) return Gender::Male;
    if (iequals(text, "female") || iequals(text, "f")) return Gender::Female;
    return std::nullopt;
}

std::optional<AgentStatus> parse_status(std::string_view text) {
    for (auto s : {AgentStatus::Selected, AgentStatus::Waitlisted, AgentStatus::Rejected, AgentStatus::Withdrawn}) {
        if (iequals(text, to_string(s))) return s;
    }
    return std::nullopt;
}

std::optional<AgeGroup> age_group_for(int age) noexcept {
    if (age < kMinAge || age > kMaxAge) return std::nullopt;
    if (age <= 30) return AgeGroup::A20_30;
    if (age <= 40) return AgeGroup::A31_40;
    if (age <= 50) return AgeGroup::A41_50;
    return AgeGroup::A51_60;
}

std::string_view to_string(Criterion c) noexcept {
    switch (c) {
    case Criterion::AgeRange: return "AgeRange";
    case Criterion::GroupMembership: return "GroupMembership";
    case Criterion::Education: return "Education";
    case Criterion::FunctionalPhone: return "FunctionalPhone";
    case Criterion::MobileMoney: return "MobileMoney";
    case Criterion::Acreage: return "Acreage";
    case Criterion::Literacy: return "Literacy";
    case Criterion::ChargingAccess: return "ChargingAccess";
    case Criterion::SpouseInformed: return "SpouseInformed";
    case Criterion::IdOrLcLetter: return "IdOrLcLetter";
    }
    return "";
}

std::string_view to_string(ExceptionTag) noexcept { return "MediumScaleProducer"; }

EligibilityResult check_eligibility(const CandidateProfile& c, bool allow_medium_scale) {
    auto malformed = [&](std::string_view what) {
        throw Error(Errc::MalformedProfile,
                    "candidate '" + c.candidate_id + "': " + std::string(what));
    };
    if (c.candidate_id.empty()) malformed("missing candidate_id");
    if (c.district.empty()) malformed("missing district");
    if (c.age <= 0) malformed("age must be positive");
    if (!(c.acreage > 0.0)) malformed("acreage must be positive");

    const std::pair<const std::optional<bool>*, Criterion> flags[] = {
        {&c.in_farmers_group, Criterion::GroupMembership},
        {&c.education_primary_or_above, Criterion::Education},
        {&c.owns_functional_phone, Criterion::FunctionalPhone},
        {&c.has_mobile_money, Criterion::MobileMoney},
        {&c.literate, Criterion::Literacy},
        {&c.has_charging_access, Criterion::ChargingAccess},
        {&c.spouse_informed, Criterion::SpouseInformed},
        {&c.has_id_or_lc_letter, Criterion::IdOrLcLetter},
    };
    for (const auto& [flag, criterion] : flags) {
        if (!flag->has_value()) malformed(std::string("flag not set for ") + std::string(to_string(criterion)));
    }

    EligibilityResult result;
    if (c.age < kMinAge || c.age > kMaxAge) result.failed_criteria.push_back(Criterion::AgeRange);
    for (const auto& [flag, criterion] : flags) {
        if (!**flag) result.failed_criteria.push_back(criterion);
    }
    if (c.acreage < kMinAcreage) {
        result.failed_criteria.push_back(Criterion::Acreage);
    } else if (c.acreage > kMaxSmallholderAcreage) {
        if (allow_medium_scale) {
            result.exception_applied = ExceptionTag::MediumScaleProducer;
        } else {
            result.failed_criteria.push_back(Criterion::Acreage);
        }
    }
    std::sort(result.failed_criteria.begin(), result.failed_criteria.end());
    result.eligible = result.failed_criteria.empty();
    return result;
}

std::vector<RegionQuota> default_quotas() {
    std::vector<RegionQuota> quotas;
    for (Zardi z : kZardis) quotas.push_back(RegionQuota{z, 40, {}});
    return quotas;
}

}  // namespace cropsense::registry
