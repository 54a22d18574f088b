#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mfts {

struct TickRecord {
    std::int64_t timestamp_ms = 0;
    double price = 0.0;       // quote currency per base unit
    double volume_usd = 0.0;  // USD notional of the trade

    friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

enum class Dialect { generic, binance_aggtrades };

Dialect parse_dialect(std::string_view name);
std::string_view to_string(Dialect d);

// Time-ordered trades of one pool or pair. Records are sorted by timestamp
// (stable, so equal timestamps keep their file order) and validated on
// construction; the object is immutable afterwards.
class TickSeries {
public:
    TickSeries(std::string pair_id, std::vector<TickRecord> records,
               Dialect source = Dialect::generic);

    const std::string& pair_id() const { return pair_id_; }
    const std::vector<TickRecord>& records() const { return records_; }
    Dialect source_dialect() const { return source_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

private:
    std::string pair_id_;
    std::vector<TickRecord> records_;
    Dialect source_;
};

struct TickStats {
    std::size_t n = 0;
    double mean_gap_s = 0.0;   // <dt>, seconds between consecutive trades
    double mean_volume = 0.0;  // <V>
    double max_volume = 0.0;   // V_max
};

// Reads a tick file. Rows that fail to parse or violate price > 0,
// volume >= 0, timestamp >= 0 are collected and reported together, by
// 1-based line number, in a single ValidationError.
TickSeries parse_ticks(const std::filesystem::path& path, Dialect dialect,
                       std::string pair_id = {});
TickSeries parse_ticks(std::istream& in, Dialect dialect, std::string pair_id,
                       std::string_view source_name = "<stream>");

// Canonical generic CSV; parse_ticks reproduces the records bit-exactly.
void write_ticks(std::ostream& out, const TickSeries& ticks);
void write_ticks(const std::filesystem::path& path, const TickSeries& ticks);

// Keeps records with volume_usd >= threshold_usd (exclusion is strictly below).
TickSeries filter_min_volume(const TickSeries& ticks, double threshold_usd);

// Removes exact (timestamp, price, volume) duplicates, keeping the first.
TickSeries dedup_exact(const TickSeries& ticks);

// Timestamp merge; on ties all of a's records come before b's. The result's
// pair_id is "<a>+<b>" (or the non-empty side's id when one input is empty).
TickSeries merge_pools(const TickSeries& a, const TickSeries& b);

TickStats tick_stats(const TickSeries& ticks);

}  // namespace mfts
