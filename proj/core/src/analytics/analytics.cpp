#include "cropsense/analytics.hpp"

#include "cropsense/csv.hpp"
#include "cropsense/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

namespace cropsense::analytics {

using json = nlohmann::ordered_json;

std::string_view to_string(Dimension d) noexcept {
    switch (d) {
    case Dimension::Region: return "region";
    case Dimension::Gender: return "gender";
    case Dimension::AgeGroup: return "age_group";
    case Dimension::Label: return "label";
    case Dimension::Week: return "week";
    }
    return "";
}

std::optional<Dimension> parse_dimension(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "region") return Dimension::Region;
    if (lower == "gender") return Dimension::Gender;
    if (lower == "age_group" || lower == "agegroup" || lower == "age") return Dimension::AgeGroup;
    if (lower == "label") return Dimension::Label;
    if (lower == "week") return Dimension::Week;
    return std::nullopt;
}

const Bucket* AggregationResult::find(std::string_view key) const {
    for (const auto& b : buckets) {
        if (b.key == key) return &b;
    }
    return nullptr;
}

namespace {

std::vector<std::string> enum_keys(Dimension d) {
    std::vector<std::string> keys;
    switch (d) {
    case Dimension::Region:
        for (auto z : registry::kZardis) keys.emplace_back(registry::zardi_name(z));
        break;
    case Dimension::Gender:
        for (auto g : registry::kGenders) keys.emplace_back(registry::to_string(g));
        break;
    case Dimension::AgeGroup:
        for (auto a : registry::kAgeGroups) keys.emplace_back(registry::to_string(a));
        break;
    case Dimension::Label:
        for (auto l : ingestion::kLabels) keys.emplace_back(ingestion::to_string(l));
        break;
    case Dimension::Week: break;
    }
    return keys;
}

}  // namespace

AggregationResult aggregate(std::span<const ingestion::Report> reports, Dimension dimension,
                            const registry::Registry* directory) {
    AggregationResult result;
    result.dimension = dimension;
    if (reports.empty()) return result;

    std::unordered_map<std::string, registry::CandidateProfile> profiles;
    auto profile_of = [&](const std::string& agent_id) -> const registry::CandidateProfile& {
        if (auto it = profiles.find(agent_id); it != profiles.end()) return it->second;
        std::optional<registry::FarmerAgent> agent;
        if (directory != nullptr) agent = directory->find(agent_id);
        if (!agent) throw Error(Errc::UnresolvableAgent, "agent " + agent_id + " is not in the registry");
        return profiles.emplace(agent_id, agent->profile).first->second;
    };

    std::map<std::string, std::uint64_t> counts;
    for (const auto& r : reports) {
        std::string key;
        switch (dimension) {
        case Dimension::Region: key = registry::zardi_name(profile_of(r.agent_id).region); break;
        case Dimension::Gender: key = registry::to_string(profile_of(r.agent_id).gender); break;
        case Dimension::AgeGroup: {
            auto group = registry::age_group_for(profile_of(r.agent_id).age);
            key = group ? std::string(registry::to_string(*group)) : std::string("unknown");
            break;
        }
        case Dimension::Label: key = ingestion::to_string(r.label); break;
        case Dimension::Week: key = format_iso_week(day_of(r.received_at)); break;
        }
        ++counts[key];
    }

    std::vector<std::string> order = enum_keys(dimension);
    for (const auto& [key, _] : counts) {
        if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
    }
    // ISO week labels sort chronologically as strings.
    for (const auto& key : order) {
        const auto it = counts.find(key);
        result.buckets.push_back(Bucket{key, it == counts.end() ? 0 : it->second, 0.0});
        result.total += result.buckets.back().count;
    }
    for (auto& b : result.buckets) b.share = static_cast<double>(b.count) / static_cast<double>(result.total);
    return result;
}

AggregationResult aggregate(const ingestion::ReportStore& store, Dimension dimension,
                            const ingestion::ReportFilter& filter) {
    const auto reports = store.query(filter);
    return aggregate(reports, dimension, store.directory());
}

std::vector<WeekCount> weekly_series(std::span<const ingestion::Report> reports, const DateRange& range) {
    std::vector<WeekCount> series;
    if (range.empty()) return series;
    const Date first_week = iso_week_start(range.first);
    for (Date w = first_week; w <= range.last; w += std::chrono::days{7}) series.push_back(WeekCount{w, 0});
    for (const auto& r : reports) {
        const Date d = day_of(r.received_at);
        if (!range.contains(d)) continue;
        const auto index = (iso_week_start(d) - first_week).count() / 7;
        ++series[static_cast<std::size_t>(index)].count;
    }
    return series;
}

std::vector<WeekCount> weekly_series(const ingestion::ReportStore& store, const DateRange& range) {
    ingestion::ReportFilter filter;
    filter.received = range;
    const auto reports = store.query(filter);
    return weekly_series(reports, range);
}

// ---------------------------------------------------------------------------

Bounds uganda_bounds() noexcept { return Bounds{-1.5, 29.5, 4.3, 35.1}; }

std::uint64_t DensityGrid::total() const {
    std::uint64_t sum = 0;
    for (const auto& [_, n] : cells) sum += n;
    return sum;
}

std::int64_t cell_index(double offset, double cell_size) noexcept {
    const double q = offset / cell_size;
    const double nearest = std::round(q);
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q))) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::floor(q));
}

DensityGrid spatial_density(std::span<const ingestion::Report> reports, const DensityOptions& options) {
    if (!std::isfinite(options.cell_size) || options.cell_size <= 0.0) {
        throw Error(Errc::InvalidCellSize, "cell size must be a positive number of degrees");
    }
    const Bounds bounds = options.bounds.value_or(uganda_bounds());
    if (!(bounds.max_lat > bounds.min_lat) || !(bounds.max_lon > bounds.min_lon)) {
        throw Error(Errc::OutOfBounds, "density bounds are empty");
    }
    DensityGrid grid;
    grid.origin_lat = bounds.min_lat;
    grid.origin_lon = bounds.min_lon;
    grid.cell_size = options.cell_size;
    for (const auto& r : reports) {
        if (!bounds.contains(r.latitude, r.longitude)) {
            if (!options.clip) {
                char buf[96];
                std::snprintf(buf, sizeof buf, " at (%.6f, %.6f) is outside the grid bounds", r.latitude, r.longitude);
                throw Error(Errc::OutOfBounds, "report " + r.report_id + buf);
            }
            ++grid.overflow;
            continue;
        }
        const Cell cell{cell_index(r.latitude - grid.origin_lat, grid.cell_size),
                        cell_index(r.longitude - grid.origin_lon, grid.cell_size)};
        ++grid.cells[cell];
    }
    return grid;
}

DensityGrid spatial_density(const ingestion::ReportStore& store, const DensityOptions& options,
                            const ingestion::ReportFilter& filter) {
    const auto reports = store.query(filter);
    return spatial_density(reports, options);
}

void write_geojson(std::ostream& out, const DensityGrid& grid) {
    json features = json::array();
    for (const auto& [cell, count] : grid.cells) {
        const double s = grid.cell_lat(cell.row);
        const double n = grid.cell_lat(cell.row + 1);
        const double w = grid.cell_lon(cell.col);
        const double e = grid.cell_lon(cell.col + 1);
        json ring = json::array({json::array({w, s}), json::array({e, s}), json::array({e, n}), json::array({w, n}),
                                 json::array({w, s})});
        features.push_back({
            {"type", "Feature"},
            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
            {"properties", {{"count", count}, {"row", cell.row}, {"col", cell.col}}},
        });
    }
    out << json{{"type", "FeatureCollection"}, {"features", features}}.dump() << '\n';
}

void write_aggregation_csv(std::ostream& out, const AggregationResult& result) {
    out << "key,count,share\n";
    char buf[32];
    for (const auto& b : result.buckets) {
        std::snprintf(buf, sizeof buf, "%.6f", b.share);
        out << csv::escape(b.key) << ',' << b.count << ',' << buf << '\n';
    }
}

void write_weekly_csv(std::ostream& out, std::span<const WeekCount> series) {
    out << "week,week_start,count\n";
    for (const auto& w : series) out << format_iso_week(w.week_start) << ',' << format_date(w.week_start) << ',' << w.count << '\n';
}

void write_density_csv(std::ostream& out, const DensityGrid& grid) {
    out << "row,col,lat,lon,count\n";
    char buf[64];
    for (const auto& [cell, count] : grid.cells) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", grid.cell_lat(cell.row), grid.cell_lon(cell.col));
        out << cell.row << ',' << cell.col << ',' << buf << ',' << count << '\n';
    }
}

}  // namespace cropsense::analytics
