#include "cropsense/registry.hpp"

#include <cstdio>

namespace cropsense::registry {

namespace {

struct StationDistricts {
    const char* prefix;
    std::vector<const char*> districts;
    int rejected;
};

// Districts per station, matching the published district counts.
const std::array<StationDistricts, 7>& station_districts() {
    static const std::array<StationDistricts, 7> table{{
        {"ARU", {"Adjumani", "Arua", "Koboko", "Maracha", "Moyo", "Nebbi", "Yumbe", "Zombo"}, 9},
        {"BUL", {"Buliisa", "Hoima", "Kibaale", "Kiryandongo", "Masindi"}, 8},
        {"LIR",
         {"Alebtong", "Amolatar", "Apac", "Dokolo", "Gulu", "Kitgum", "Kole", "Lira", "Otuke", "Oyam", "Pader"},
         14},
        {"RWE", {"Kabarole", "Kamwenge", "Kasese", "Kyenjojo"}, 7},
        {"SOR",
         {"Amuria", "Bukedea", "Kaberamaido", "Katakwi", "Kumi", "Ngora", "Pallisa", "Serere", "Soroti", "Kapelebyong"},
         12},
        {"TOR", {"Busia", "Mbale", "Tororo"}, 9},
        {"WAK", {"Kayunga", "Luwero", "Mityana", "Mpigi", "Mukono", "Nakaseke", "Wakiso"}, 12},
    }};
    return table;
}

std::string numbered(const char* prefix, int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s-%03d", prefix, n);
    return buf;
}

CandidateProfile base_profile(Zardi station, const StationDistricts& sd, int n, std::size_t district) {
    CandidateProfile c;
    c.candidate_id = numbered(sd.prefix, n);
    c.name = "Farmer " + c.candidate_id;
    c.region = station;
    c.district = sd.districts[district % sd.districts.size()];
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

}  // namespace

const std::array<StationStatistics, 7>& table1_statistics() {
    static const std::array<StationStatistics, 7> stats{{
        {Zardi::Arua, 8, 23, 18, 5},
        {Zardi::Bulindi, 5, 16, 8, 8},
        {Zardi::Lira, 11, 43, 29, 14},
        {Zardi::Rwebitaba, 4, 8, 5, 3},
        {Zardi::Soroti, 10, 32, 20, 12},
        {Zardi::Tororo, 3, 17, 9, 8},
        {Zardi::Wakiso, 7, 36, 23, 13},
    }};
    return stats;
}

std::vector<CandidateProfile> table1_candidates() {
    std::vector<CandidateProfile> out;
    const auto& stats = table1_statistics();
    const auto& districts = station_districts();
    for (std::size_t s = 0; s < stats.size(); ++s) {
        const auto& st = stats[s];
        const auto& sd = districts[s];
        const int station_seed = static_cast<int>(s);

        for (int i = 0; i < st.selected; ++i) {
            auto c = base_profile(st.station, sd, i + 1, static_cast<std::size_t>(i));
            // Spread the women evenly through the station's list.
            const bool female = (i + 1) * st.female / st.selected > i * st.female / st.selected;
            c.gender = female ? Gender::Female : Gender::Male;
            c.age = 20 + (i * 11 + station_seed * 5) % 41;
            if (i % 13 == 5) {
                c.acreage = 3.5;
                c.producer_scale = ProducerScale::MediumScale;
            } else {
                c.acreage = (5 + (i * 7) % 16) / 10.0;
            }
            out.push_back(std::move(c));
        }

        for (int j = 0; j < sd.rejected; ++j) {
            auto c = base_profile(st.station, sd, st.selected + j + 1, static_cast<std::size_t>(j));
            c.gender = j % 3 == 0 ? Gender::Female : Gender::Male;
            c.age = 25 + (j * 7) % 30;
            c.acreage = 1.0;
            switch ((j + station_seed) % 10) {
            case 0: c.age = j % 2 ? 65 : 18; break;
            case 1: c.in_farmers_group = false; break;
            case 2: c.education_primary_or_above = false; break;
            case 3: c.owns_functional_phone = false; break;
            case 4: c.has_mobile_money = false; break;
            case 5: c.acreage = 0.3; break;
            case 6: c.literate = false; break;
            case 7: c.has_charging_access = false; break;
            case 8: c.spouse_informed = false; break;
            default: c.has_id_or_lc_letter = false; break;
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::pair<double, double> station_location(Zardi z) noexcept {
    switch (z) {
    case Zardi::Arua: return {3.02, 30.91};
    case Zardi::Bulindi: return {1.48, 31.35};
    case Zardi::Lira: return {2.28, 32.92};
    case Zardi::Rwebitaba: return {0.65, 30.27};
    case Zardi::Soroti: return {1.72, 33.61};
    case Zardi::Tororo: return {0.69, 34.18};
    case Zardi::Wakiso: return {0.53, 32.62};
    }
    return {0.0, 0.0};
}

}  // namespace cropsense::registry
