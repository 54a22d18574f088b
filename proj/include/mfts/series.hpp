#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfts/ingest.hpp"

namespace mfts {

enum class SeriesKind { log_return, volume, volatility, generic };

SeriesKind parse_series_kind(std::string_view name);
std::string_view to_string(SeriesKind k);

// Fixed-interval series. values[i] covers [start_ms + i*dt_ms, start_ms + (i+1)*dt_ms).
struct RegularSeries {
    std::string name;
    std::int64_t start_ms = 0;
    std::int64_t dt_ms = 1;
    std::vector<double> values;
    SeriesKind kind = SeriesKind::generic;
    bool normalized = false;

    std::size_t size() const { return values.size(); }

    // Throws ValidationError if dt_ms <= 0 or a volume/volatility value is negative.
    void validate() const;
};

struct AggregationReport {
    std::size_t n_bins = 0;
    double zero_return_fraction = 0.0;
    double mean_bin_volume = 0.0;
};

struct Aggregated {
    RegularSeries returns;  // n_bins - 1 values, starts one interval after the anchor
    RegularSeries volume;   // n_bins values, starts at the anchor
    AggregationReport report;
};

// Bins ticks on a grid anchored at floor(first_ts / dt) * dt. Bin price is
// the last trade price, carried forward over empty bins; bin volume is the
// summed USD notional.
Aggregated aggregate(const TickSeries& ticks, std::int64_t dt_ms);

std::vector<double> log_returns(std::span<const double> prices);

// z-score with the (n-1) sample standard deviation.
RegularSeries normalize(const RegularSeries& series);

RegularSeries absolute(const RegularSeries& series);

// Drops `count` leading values and shifts start_ms accordingly. Used to pair
// volume bins with the returns that end in them.
RegularSeries drop_front(const RegularSeries& series, std::size_t count);

// Throws ValidationError naming both series unless start, dt and length agree.
void require_aligned(const RegularSeries& x, const RegularSeries& y);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

// CSV "index,value" (metadata is not carried) and JSON with metadata.
void write_series_csv(const std::filesystem::path& path, const RegularSeries& s);
void write_series_json(const std::filesystem::path& path, const RegularSeries& s);
std::string series_json_text(const RegularSeries& s);

// .json files carry their metadata; .csv files take it from `defaults`.
RegularSeries read_series(const std::filesystem::path& path, const RegularSeries& defaults = {});

}  // namespace mfts
