#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "growth/errors.hpp"

namespace growth {

/// One (year, GDP) reading. Years are real-valued calendar years CE;
/// GDP is in billions of 1990 Geary-Khamis dollars.
struct Observation {
    double year = 0.0;
    double gdp = 0.0;
};

/// Ordered observations for one region. Immutable after construction:
/// years strictly increasing, all gdp > 0. Gaps are represented by the
/// absence of observations, never by sentinel values. May be empty only
/// as the result of windowing; parsed series always have at least one row.
class TimeSeries {
public:
    TimeSeries() = default;

    /// Validates ordering and positivity; throws Error on violation.
    TimeSeries(std::string region, std::vector<Observation> observations);

    /// Sorts by year first, then validates (duplicate years still rejected).
    static TimeSeries from_unsorted(std::string region,
                                    std::vector<Observation> observations);

    const std::string& region() const noexcept { return region_; }
    const std::vector<Observation>& observations() const noexcept {
        return observations_;
    }

    std::size_t size() const noexcept { return observations_.size(); }
    bool empty() const noexcept { return observations_.empty(); }

    double first_year() const { return observations_.front().year; }
    double last_year() const { return observations_.back().year; }

    bool operator==(const TimeSeries&) const = default;

private:
    std::string region_;
    std::vector<Observation> observations_;
};

inline bool operator==(const Observation& a, const Observation& b) {
    return a.year == b.year && a.gdp == b.gdp;
}

/// Collection of per-region series. Region labels are unique and taken
/// verbatim (case-sensitive); insertion order is preserved everywhere.
class RegionDataset {
public:
    RegionDataset() = default;
    RegionDataset(std::vector<TimeSeries> series, std::string source);

    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    const std::string& source() const noexcept { return source_; }

    /// nullptr when absent.
    const TimeSeries* find(std::string_view region) const;

    /// Throws Error(unknown_region) listing the available labels.
    const TimeSeries& get(std::string_view region) const;

    std::vector<std::string> region_labels() const;

    bool operator==(const RegionDataset&) const = default;

private:
    std::vector<TimeSeries> series_;
    std::string source_;
};

/// Long layout: header `region,year,gdp`, one observation per line.
/// Rows are grouped by region (first-appearance order) and sorted by year.
RegionDataset parse_long_csv(std::string_view text, std::string source = "");

/// Maddison horizontal layout: header row holds year labels from column 2
/// on; each later row is a region label followed by values. Empty cells are
/// gaps; commas inside quoted cells are thousands separators.
RegionDataset parse_maddison_horizontal(std::string_view text,
                                        std::string source = "");

/// Long-CSV serialization (LF line endings, shortest round-trip numbers).
std::string write_long_csv(const RegionDataset& dataset);

/// Observations with from <= year <= to, order preserved; may be empty.
TimeSeries window(const TimeSeries& series, double from, double to);

} // namespace growth
