#include "cropsense/incentives.hpp"

#include "json.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace cropsense::incentives {

using json = nlohmann::ordered_json;

SchemeBook::SchemeBook(std::vector<SchemeConfig> schemes, std::vector<ScheduleEntry> schedule, Ugx transfer_fee)
    : schemes_(std::move(schemes)), schedule_(std::move(schedule)), transfer_fee_(transfer_fee) {
    if (schedule_.empty()) throw Error(Errc::ConfigInvalid, "empty scheme schedule");
    if (transfer_fee_ < 0) throw Error(Errc::ConfigInvalid, "negative transfer fee");
    for (std::size_t i = 0; i < schemes_.size(); ++i) {
        schemes_[i].validate();
        for (std::size_t j = 0; j < i; ++j) {
            if (schemes_[j].id == schemes_[i].id) {
                throw Error(Errc::ConfigInvalid, "scheme " + std::string(to_string(schemes_[i].id)) + " defined twice");
            }
        }
    }
    for (std::size_t i = 0; i < schedule_.size(); ++i) {
        if (i > 0 && schedule_[i].effective <= schedule_[i - 1].effective) {
            throw Error(Errc::ConfigInvalid, "schedule dates must be strictly increasing");
        }
        config(schedule_[i].scheme);
    }
}

SchemeBook SchemeBook::reference_default() {
    using namespace std::chrono;
    std::vector<SchemeConfig> schemes;
    for (SchemeId id : kSchemes) schemes.push_back(preset(id));
    std::vector<ScheduleEntry> schedule{
        {sys_days{2018y / April / 16}, SchemeId::S1},
        {sys_days{2018y / June / 1}, SchemeId::S2},
        {sys_days{2018y / August / 1}, SchemeId::S3},
        {sys_days{2018y / September / 1}, SchemeId::S4},
        {sys_days{2018y / November / 16}, SchemeId::S5},
    };
    return SchemeBook(std::move(schemes), std::move(schedule), 500);
}

SchemeBook SchemeBook::single(SchemeConfig scheme, Date start) {
    const auto id = scheme.id;
    return SchemeBook({std::move(scheme)}, {{start, id}}, 500);
}

const SchemeConfig& SchemeBook::scheme_on(Date d) const {
    auto it = std::upper_bound(schedule_.begin(), schedule_.end(), d,
                               [](Date value, const ScheduleEntry& e) { return value < e.effective; });
    if (it == schedule_.begin()) {
        throw Error(Errc::InvalidPeriod, "no payment scheme in force on " + format_date(d));
    }
    return config(std::prev(it)->scheme);
}

const SchemeConfig& SchemeBook::config(SchemeId id) const {
    for (const auto& s : schemes_) {
        if (s.id == id) return s;
    }
    throw Error(Errc::ConfigInvalid, "no config for scheme " + std::string(to_string(id)));
}

namespace {

json opt(const std::optional<Ordinal>& v) { return v ? json(*v) : json(nullptr); }

SchemeConfig scheme_from_json(const json& j) {
    SchemeConfig s;
    auto id = parse_scheme(j.at("id").get<std::string>());
    if (!id) throw Error(Errc::ConfigInvalid, "unknown scheme id " + j.at("id").dump());
    s = preset(*id);
    s.base_price = j.value("base_price", s.base_price);
    s.first_batch_size = j.value("first_batch_size", s.first_batch_size);
    s.first_batch_lump = j.value("first_batch_lump", s.first_batch_lump);
    s.increment = j.value("increment", s.increment);
    if (j.contains("batch_stages")) {
        s.stages.clear();
        for (const auto& st : j["batch_stages"]) {
            s.stages.push_back(BatchStage{st.at("from").get<Ordinal>(), st.at("size").get<Ordinal>()});
        }
    }
    auto read_opt = [&](const char* key, std::optional<Ordinal>& out) {
        if (!j.contains(key)) return;
        out = j[key].is_null() ? std::nullopt : std::optional<Ordinal>(j[key].get<Ordinal>());
    };
    read_opt("price_cap_ordinal", s.price_cap_ordinal);
    read_opt("payment_cap_ordinal", s.payment_cap_ordinal);
    s.capped_price = j.value("capped_price", s.capped_price);
    if (j.contains("flat_settlement")) {
        const auto& f = j["flat_settlement"];
        if (f.is_null()) {
            s.flat_settlement.reset();
        } else {
            s.flat_settlement = FlatSettlement{f.at("threshold").get<Ordinal>(), f.at("amount").get<Ugx>()};
        }
    }
    return s;
}

}  // namespace

SchemeBook read_scheme_book_json(std::istream& in) {
    try {
        const json doc = json::parse(in);
        std::vector<SchemeConfig> schemes;
        if (doc.contains("schemes")) {
            for (const auto& s : doc["schemes"]) schemes.push_back(scheme_from_json(s));
        } else {
            for (SchemeId id : kSchemes) schemes.push_back(preset(id));
        }
        std::vector<ScheduleEntry> schedule;
        for (const auto& e : doc.at("schedule")) {
            auto id = parse_scheme(e.at("scheme").get<std::string>());
            if (!id) throw Error(Errc::ConfigInvalid, "unknown scheme id " + e.at("scheme").dump());
            schedule.push_back(ScheduleEntry{parse_date(e.at("effective").get<std::string>()), *id});
        }
        return SchemeBook(std::move(schemes), std::move(schedule), doc.value("transfer_fee", Ugx{500}));
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("scheme file: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::ParseError) throw Error(Errc::ConfigInvalid, e.what());
        throw;
    }
}

void write_scheme_book_json(std::ostream& out, const SchemeBook& book) {
    json schemes = json::array();
    for (const auto& s : book.schemes()) {
        json stages = json::array();
        for (const auto& st : s.stages) stages.push_back({{"from", st.from_ordinal}, {"size", st.batch_size}});
        schemes.push_back({
            {"id", to_string(s.id)},
            {"base_price", s.base_price},
            {"first_batch_size", s.first_batch_size},
            {"first_batch_lump", s.first_batch_lump},
            {"increment", s.increment},
            {"batch_stages", stages},
            {"price_cap_ordinal", opt(s.price_cap_ordinal)},
            {"capped_price", s.capped_price},
            {"payment_cap_ordinal", opt(s.payment_cap_ordinal)},
            {"flat_settlement", s.flat_settlement ? json{{"threshold", s.flat_settlement->threshold},
                                                          {"amount", s.flat_settlement->amount}}
                                                    : json(nullptr)},
        });
    }
    json schedule = json::array();
    for (const auto& e : book.schedule()) {
        schedule.push_back({{"effective", format_date(e.effective)}, {"scheme", to_string(e.scheme)}});
    }
    out << json{{"schemes", schemes}, {"schedule", schedule}, {"transfer_fee", book.transfer_fee()}}.dump(2) << '\n';
}

}  // namespace cropsense::incentives
