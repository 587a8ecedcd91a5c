#pragma once

#include "cropsense/ingestion.hpp"
#include "cropsense/registry.hpp"
#include "cropsense/time.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cropsense::analytics {

enum class Dimension { Region, Gender, AgeGroup, Label, Week };

std::string_view to_string(Dimension d) noexcept;
std::optional<Dimension> parse_dimension(std::string_view text);

struct Bucket {
    std::string key;
    std::uint64_t count = 0;
    double share = 0.0;

    friend bool operator==(const Bucket&, const Bucket&) = default;
};

/// Buckets follow the dimension's enum order (weeks ascending). Every enum
/// value gets a bucket once there is at least one report; weeks only appear
/// when they hold reports.
struct AggregationResult {
    Dimension dimension = Dimension::Label;
    std::vector<Bucket> buckets;
    std::uint64_t total = 0;

    const Bucket* find(std::string_view key) const;
};

/// Region, Gender and AgeGroup come from the submitting agent's registry
/// entry; Week is the ISO week of the receipt date.
/// Throws UnresolvableAgent when an agent is not in `directory` (or
/// `directory` is null) for an agent-based dimension.
AggregationResult aggregate(std::span<const ingestion::Report> reports, Dimension dimension,
                            const registry::Registry* directory);

/// Runs the filter against the store and resolves agents through the
/// store's directory.
AggregationResult aggregate(const ingestion::ReportStore& store, Dimension dimension,
                            const ingestion::ReportFilter& filter = {});

struct WeekCount {
    Date week_start;
    std::uint64_t count = 0;

    friend bool operator==(const WeekCount&, const WeekCount&) = default;
};

/// One bucket per ISO week touching `range`, zero-filled. Only reports
/// received inside `range` are counted.
std::vector<WeekCount> weekly_series(std::span<const ingestion::Report> reports, const DateRange& range);
std::vector<WeekCount> weekly_series(const ingestion::ReportStore& store, const DateRange& range);

// ---------------------------------------------------------------------------
// Spatial density

/// Half-open box [min, max) in decimal degrees.
struct Bounds {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;

    bool contains(double lat, double lon) const noexcept {
        return lat >= min_lat && lat < max_lat && lon >= min_lon && lon < max_lon;
    }
};

/// Box around Uganda used when no bounds are given.
Bounds uganda_bounds() noexcept;

struct Cell {
    std::int64_t row = 0;  // latitude axis
    std::int64_t col = 0;  // longitude axis

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct DensityGrid {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double cell_size = 0.1;
    std::map<Cell, std::uint64_t> cells;  // nonzero cells only
    std::uint64_t overflow = 0;           // clipped reports

    std::uint64_t total() const;
    /// South-west corner of a cell.
    double cell_lat(std::int64_t row) const { return origin_lat + static_cast<double>(row) * cell_size; }
    double cell_lon(std::int64_t col) const { return origin_lon + static_cast<double>(col) * cell_size; }
};

struct DensityOptions {
    double cell_size = 0.1;
    std::optional<Bounds> bounds;  // uganda_bounds() when unset
    bool clip = false;             // count outside reports in `overflow` instead of throwing
};

/// floor(offset / cell_size), snapped to the nearest integer when the quotient
/// is within rounding error of it so that boundary points land in the
/// higher-index cell.
std::int64_t cell_index(double offset, double cell_size) noexcept;

/// Throws InvalidCellSize for non-positive or non-finite sizes and OutOfBounds
/// for a report outside the bounds when clipping is off.
DensityGrid spatial_density(std::span<const ingestion::Report> reports, const DensityOptions& options = {});
DensityGrid spatial_density(const ingestion::ReportStore& store, const DensityOptions& options = {},
                            const ingestion::ReportFilter& filter = {});

/// FeatureCollection with one closed counter-clockwise square per nonzero
/// cell; properties count, row, col.
void write_geojson(std::ostream& out, const DensityGrid& grid);

// ---------------------------------------------------------------------------
// CSV exports

void write_aggregation_csv(std::ostream& out, const AggregationResult& result);  // key,count,share
void write_weekly_csv(std::ostream& out, std::span<const WeekCount> series);     // week,week_start,count
void write_density_csv(std::ostream& out, const DensityGrid& grid);  // row,col,lat,lon,count

}  // namespace cropsense::analytics
