#include "cropsense/analytics.hpp"
#include "cropsense/error.hpp"

#include "json.hpp"
#include "shared_trace.hpp"
#include "test_registry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace cropsense;
using namespace cropsense::analytics;
using ingestion::Report;

namespace {

Report at(double lat, double lon, std::string agent = "A000", std::string day = "2018-05-02") {
    Report r;
    r.agent_id = std::move(agent);
    r.latitude = lat;
    r.longitude = lon;
    r.received_at = std::chrono::sys_seconds{parse_date(day)} + std::chrono::hours{9};
    return r;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::IoError;
}

}  // namespace

TEST(Aggregate, PartitionOnSimulatedData) {
    const auto& trace = testing_support::default_trace();
    const auto total = trace.store->size();
    for (Dimension d : {Dimension::Region, Dimension::Gender, Dimension::AgeGroup, Dimension::Label, Dimension::Week}) {
        const auto result = aggregate(*trace.store, d);
        std::uint64_t sum = 0;
        double share = 0.0;
        for (const auto& b : result.buckets) {
            sum += b.count;
            share += b.share;
        }
        EXPECT_EQ(sum, total) << to_string(d);
        EXPECT_EQ(result.total, total);
        EXPECT_NEAR(share, 1.0, 1e-9);
    }
    // Filtered scope.
    ingestion::ReportFilter whitefly{.label = ingestion::Label::Whitefly};
    const auto filtered = aggregate(*trace.store, Dimension::Region, whitefly);
    std::uint64_t sum = 0;
    for (const auto& b : filtered.buckets) sum += b.count;
    EXPECT_EQ(sum, trace.store->query(whitefly).size());
}

TEST(Aggregate, FixedBucketOrder) {
    const auto reg = testing_support::active_registry(3);
    std::vector<Report> reports{at(0, 32, "A002"), at(0, 32, "A000")};
    const auto regions = aggregate(reports, Dimension::Region, &reg);
    ASSERT_EQ(regions.buckets.size(), 7u);
    EXPECT_EQ(regions.buckets[0].key, "Arua");
    EXPECT_EQ(regions.buckets[6].key, "Wakiso");
    EXPECT_EQ(regions.find("Lira")->count, 1u);
    const auto labels = aggregate(reports, Dimension::Label, nullptr);
    EXPECT_EQ(labels.buckets.size(), 4u);
    EXPECT_EQ(labels.buckets[3].key, "Other");
}

TEST(Aggregate, EmptyAndUnresolvable) {
    const auto empty = aggregate(std::span<const Report>{}, Dimension::Gender, nullptr);
    EXPECT_TRUE(empty.buckets.empty());
    EXPECT_EQ(empty.total, 0u);
    std::vector<Report> reports{at(0, 32, "ghost")};
    const auto reg = testing_support::active_registry(1);
    EXPECT_EQ(code_of([&] { aggregate(reports, Dimension::Gender, &reg); }), Errc::UnresolvableAgent);
    EXPECT_EQ(code_of([&] { aggregate(reports, Dimension::Region, nullptr); }), Errc::UnresolvableAgent);
    EXPECT_NO_THROW(aggregate(reports, Dimension::Week, nullptr));
}

TEST(Aggregate, ParseDimension) {
    EXPECT_EQ(parse_dimension("age_group"), Dimension::AgeGroup);
    EXPECT_EQ(parse_dimension("Week"), Dimension::Week);
    EXPECT_FALSE(parse_dimension("colour"));
}

TEST(Weekly, CampaignHas33Buckets) {
    const auto& trace = testing_support::default_trace();
    const DateRange range{parse_date("2018-04-16"), parse_date("2018-11-28")};
    const auto series = weekly_series(*trace.store, range);
    ASSERT_EQ(series.size(), 33u);
    EXPECT_EQ(series.front().week_start, parse_date("2018-04-16"));
    for (std::size_t i = 1; i < series.size(); ++i) {
        EXPECT_EQ(series[i].week_start - series[i - 1].week_start, std::chrono::days{7});
    }
    std::uint64_t sum = 0;
    for (const auto& w : series) sum += w.count;
    EXPECT_EQ(sum, aggregate(*trace.store, Dimension::Week).total);
}

TEST(Weekly, SingleWeekAndEmptyRange) {
    std::vector<Report> reports{at(0, 32, "A", "2018-05-01"), at(0, 32, "A", "2018-05-06")};
    const DateRange range{parse_date("2018-04-16"), parse_date("2018-05-20")};
    const auto series = weekly_series(reports, range);
    ASSERT_EQ(series.size(), 5u);
    int nonzero = 0;
    for (const auto& w : series) nonzero += w.count > 0;
    EXPECT_EQ(nonzero, 1);
    EXPECT_EQ(series[2].count, 2u);
    EXPECT_TRUE(weekly_series(reports, DateRange{parse_date("2018-05-02"), parse_date("2018-05-01")}).empty());
}

TEST(Density, IdenticalCoordinatesShareACell) {
    std::vector<Report> reports{at(1.23, 32.45), at(1.23, 32.45)};
    const auto grid = spatial_density(reports);
    ASSERT_EQ(grid.cells.size(), 1u);
    EXPECT_EQ(grid.cells.begin()->second, 2u);
}

TEST(Density, BoundaryGoesToHigherCell) {
    const Bounds b{0.0, 30.0, 2.0, 34.0};
    std::vector<Report> reports{at(0.3, 30.7)};  // 0.3 / 0.1 is 2.9999... in binary
    const auto grid = spatial_density(reports, DensityOptions{0.1, b, false});
    ASSERT_EQ(grid.cells.size(), 1u);
    EXPECT_EQ(grid.cells.begin()->first, (Cell{3, 7}));
    EXPECT_EQ(cell_index(0.29999999, 0.1), 2);
    EXPECT_EQ(cell_index(0.7, 0.1), 7);
}

TEST(Density, ErrorsAndClipping) {
    std::vector<Report> reports{at(1.0, 32.0), at(10.0, 32.0)};
    EXPECT_EQ(code_of([&] { spatial_density(reports, DensityOptions{0.0}); }), Errc::InvalidCellSize);
    EXPECT_EQ(code_of([&] { spatial_density(reports, DensityOptions{NAN}); }), Errc::InvalidCellSize);
    EXPECT_EQ(code_of([&] { spatial_density(reports); }), Errc::OutOfBounds);
    const auto clipped = spatial_density(reports, DensityOptions{0.1, std::nullopt, true});
    EXPECT_EQ(clipped.overflow, 1u);
    EXPECT_EQ(clipped.total(), 1u);
}

TEST(Density, TranslationPreservesCountMultiset) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lat(0.0, 2.0), lon(31.0, 34.0);
    std::vector<Report> reports;
    for (int i = 0; i < 2000; ++i) reports.push_back(at(lat(rng), lon(rng)));
    const Bounds base{-1.0, 29.0, 4.0, 35.0};
    const auto g0 = spatial_density(reports, DensityOptions{0.1, base, false});
    for (int shift : {1, 3, 7}) {
        const Bounds moved{base.min_lat - 0.1 * shift, base.min_lon - 0.1 * shift, base.max_lat, base.max_lon};
        const auto g1 = spatial_density(reports, DensityOptions{0.1, moved, false});
        std::vector<std::uint64_t> a, b;
        for (const auto& [_, n] : g0.cells) a.push_back(n);
        for (const auto& [_, n] : g1.cells) b.push_back(n);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << shift;
        for (const auto& [cell, n] : g0.cells) {
            const auto it = g1.cells.find(Cell{cell.row + shift, cell.col + shift});
            ASSERT_NE(it, g1.cells.end());
            EXPECT_EQ(it->second, n);
        }
    }
}

TEST(Density, SumsToGeolocatedCountOnSimulatedData) {
    const auto& trace = testing_support::default_trace();
    const auto grid = spatial_density(*trace.store);
    EXPECT_EQ(grid.total(), trace.store->size());
    EXPECT_EQ(grid.overflow, 0u);
}

TEST(Density, AgentsClusterNearHome) {
    // >= 80% of each agent's reports within 2 cells (Chebyshev) of the modal cell.
    const auto& trace = testing_support::default_trace();
    std::map<std::string, std::map<Cell, std::uint64_t>> per_agent;
    const auto b = uganda_bounds();
    for (const auto& r : trace.store->query()) {
        ++per_agent[r.agent_id][Cell{cell_index(r.latitude - b.min_lat, 0.1), cell_index(r.longitude - b.min_lon, 0.1)}];
    }
    for (const auto& [agent, cells] : per_agent) {
        auto modal = cells.begin();
        std::uint64_t total = 0;
        for (auto it = cells.begin(); it != cells.end(); ++it) {
            total += it->second;
            if (it->second > modal->second) modal = it;
        }
        std::uint64_t near = 0;
        for (const auto& [c, n] : cells) {
            if (std::llabs(c.row - modal->first.row) <= 2 && std::llabs(c.col - modal->first.col) <= 2) near += n;
        }
        EXPECT_GE(static_cast<double>(near), 0.8 * static_cast<double>(total)) << agent;
    }
}

TEST(GeoJson, RoundTripAndGeometry) {
    const auto& trace = testing_support::default_trace();
    const auto grid = spatial_density(*trace.store);
    std::stringstream out;
    write_geojson(out, grid);
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["type"], "FeatureCollection");
    EXPECT_EQ(doc["features"].size(), grid.cells.size());
    std::uint64_t sum = 0;
    for (const auto& f : doc["features"]) {
        sum += f["properties"]["count"].get<std::uint64_t>();
        const auto ring = f["geometry"]["coordinates"][0];
        ASSERT_EQ(ring.size(), 5u);
        EXPECT_EQ(ring[0], ring[4]);
        // Counter-clockwise: positive shoelace area.
        double area = 0.0;
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            area += ring[i][0].get<double>() * ring[i + 1][1].get<double>() -
                    ring[i + 1][0].get<double>() * ring[i][1].get<double>();
        }
        EXPECT_GT(area, 0.0);
    }
    EXPECT_EQ(sum, grid.total());
}

TEST(GeoJson, EmptyAndSingleCell) {
    DensityGrid empty;
    std::stringstream a;
    write_geojson(a, empty);
    EXPECT_TRUE(nlohmann::json::parse(a.str())["features"].empty());

    DensityGrid one;
    one.cells[Cell{2, 3}] = 5;
    std::stringstream b;
    write_geojson(b, one);
    const auto doc = nlohmann::json::parse(b.str());
    ASSERT_EQ(doc["features"].size(), 1u);
    EXPECT_EQ(doc["features"][0]["properties"]["count"], 5);
    EXPECT_EQ(doc["features"][0]["geometry"]["type"], "Polygon");
}

TEST(Csv, Exports) {
    std::vector<Report> reports{at(0.5, 32.5), at(0.5, 32.5, "A000", "2018-05-10")};
    std::stringstream agg, weekly, dens;
    write_aggregation_csv(agg, aggregate(reports, Dimension::Label, nullptr));
    EXPECT_EQ(agg.str().substr(0, 16), "key,count,share\n");
    write_weekly_csv(weekly, weekly_series(reports, DateRange{parse_date("2018-04-30"), parse_date("2018-05-13")}));
    EXPECT_EQ(weekly.str(), "week,week_start,count\n2018-W18,2018-04-30,1\n2018-W19,2018-05-07,1\n");
    write_density_csv(dens, spatial_density(reports));
    EXPECT_EQ(dens.str().substr(0, 22), "row,col,lat,lon,count\n");
}
