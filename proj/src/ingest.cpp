#include "mfts/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "mfts/error.hpp"
#include "mfts/io.hpp"

namespace mfts {

namespace {

constexpr std::string_view kGenericHeader = "timestamp_ms,price,volume_usd";
constexpr std::size_t kMaxReportedRows = 20;

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

void check_record(const TickRecord& r, std::string& why) {
    if (r.timestamp_ms < 0) why = "negative timestamp";
    else if (!(r.price > 0.0) || !std::isfinite(r.price)) why = "non-positive price";
    else if (!(r.volume_usd >= 0.0) || !std::isfinite(r.volume_usd)) why = "negative volume";
}

}  // namespace

Dialect parse_dialect(std::string_view name) {
    if (name == "generic") return Dialect::generic;
    if (name == "binance_aggtrades" || name == "binance") return Dialect::binance_aggtrades;
    throw ValidationError("unknown tick dialect '" + std::string(name) + "'");
}

std::string_view to_string(Dialect d) {
    return d == Dialect::generic ? "generic" : "binance_aggtrades";
}

TickSeries::TickSeries(std::string pair_id, std::vector<TickRecord> records, Dialect source)
    : pair_id_(std::move(pair_id)), records_(std::move(records)), source_(source) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        std::string why;
        check_record(records_[i], why);
        if (!why.empty()) throw ValidationError("tick " + std::to_string(i) + ": " + why);
    }
    std::stable_sort(records_.begin(), records_.end(),
                     [](const TickRecord& a, const TickRecord& b) { return a.timestamp_ms < b.timestamp_ms; });
}

TickSeries parse_ticks(std::istream& in, Dialect dialect, std::string pair_id, std::string_view source_name) {
    std::vector<TickRecord> records;
    std::vector<std::string> bad;
    std::size_t bad_count = 0;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;

    auto reject = [&](std::size_t row, const std::string& why) {
        ++bad_count;
        if (bad.size() < kMaxReportedRows) bad.push_back("row " + std::to_string(row) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (first) {
            first = false;
            if (dialect == Dialect::generic) {
                if (text.substr(0, 3) == "\xEF\xBB\xBF") {
                    if (trim(text.substr(3)) != kGenericHeader)
                        throw ValidationError(std::string(source_name) + ": malformed header, expected '" +
                                              std::string(kGenericHeader) + "'");
                } else if (text != kGenericHeader) {
                    throw ValidationError(std::string(source_name) + ": malformed header, expected '" +
                                          std::string(kGenericHeader) + "'");
                }
                continue;
            }
            // Binance dumps are headerless, but some exports add one.
            long long probe = 0;
            if (!text.empty() && !parse_int64(split_csv(text).front(), probe)) continue;
        }
        if (text.empty()) continue;

        const auto fields = split_csv(text);
        TickRecord rec;
        if (dialect == Dialect::generic) {
            if (fields.size() != 3) {
                reject(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
                continue;
            }
            long long ts = 0;
            if (!parse_int64(fields[0], ts) || !parse_double(fields[1], rec.price) ||
                !parse_double(fields[2], rec.volume_usd)) {
                reject(line_no, "unparsable number");
                continue;
            }
            rec.timestamp_ms = ts;
        } else {
            if (fields.size() < 6) {
                reject(line_no, "expected 8 fields, got " + std::to_string(fields.size()));
                continue;
            }
            long long ts = 0;
            double quantity = 0.0;
            if (!parse_double(fields[1], rec.price) || !parse_double(fields[2], quantity) ||
                !parse_int64(fields[5], ts)) {
                reject(line_no, "unparsable number");
                continue;
            }
            if (ts >= 1'000'000'000'000'000LL) ts /= 1000;  // microsecond timestamps
            rec.timestamp_ms = ts;
            if (quantity < 0.0) {
                reject(line_no, "negative quantity");
                continue;
            }
            rec.volume_usd = rec.price * quantity;
        }
        std::string why;
        check_record(rec, why);
        if (!why.empty()) {
            reject(line_no, why + " (" + std::string(text) + ")");
            continue;
        }
        records.push_back(rec);
    }

    if (first && dialect == Dialect::generic)
        throw ValidationError(std::string(source_name) + ": empty file, missing header");
    if (bad_count > 0) {
        std::ostringstream msg;
        msg << source_name << ": " << bad_count << " invalid row(s)";
        for (const auto& b : bad) msg << "\n  " << b;
        if (bad_count > bad.size()) msg << "\n  ...";
        throw ValidationError(msg.str());
    }
    if (records.empty()) throw ValidationError(std::string(source_name) + ": no tick records");
    return TickSeries(std::move(pair_id), std::move(records), dialect);
}

TickSeries parse_ticks(const std::filesystem::path& path, Dialect dialect, std::string pair_id) {
    if (!std::filesystem::exists(path)) throw ValidationError("tick file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open tick file: " + path.string());
    if (pair_id.empty()) pair_id = path.stem().string();
    return parse_ticks(in, dialect, std::move(pair_id), path.string());
}

void write_ticks(std::ostream& out, const TickSeries& ticks) {
    out << kGenericHeader << '\n';
    for (const auto& r : ticks.records())
        out << r.timestamp_ms << ',' << format_double(r.price) << ',' << format_double(r.volume_usd) << '\n';
}

void write_ticks(const std::filesystem::path& path, const TickSeries& ticks) {
    std::ostringstream ss;
    write_ticks(ss, ticks);
    write_text_file(path, ss.str());
}

TickSeries filter_min_volume(const TickSeries& ticks, double threshold_usd) {
    if (!(threshold_usd >= 0.0)) throw ValidationError("filter_min_volume: threshold must be >= 0");
    std::vector<TickRecord> kept;
    kept.reserve(ticks.size());
    std::copy_if(ticks.records().begin(), ticks.records().end(), std::back_inserter(kept),
                 [&](const TickRecord& r) { return r.volume_usd >= threshold_usd; });
    return TickSeries(ticks.pair_id(), std::move(kept), ticks.source_dialect());
}

TickSeries dedup_exact(const TickSeries& ticks) {
    std::vector<TickRecord> kept;
    kept.reserve(ticks.size());
    const auto& recs = ticks.records();
    std::set<std::pair<double, double>> seen;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (i == 0 || recs[i].timestamp_ms != recs[i - 1].timestamp_ms) seen.clear();
        if (seen.emplace(recs[i].price, recs[i].volume_usd).second) kept.push_back(recs[i]);
    }
    return TickSeries(ticks.pair_id(), std::move(kept), ticks.source_dialect());
}

TickSeries merge_pools(const TickSeries& a, const TickSeries& b) {
    std::vector<TickRecord> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.records().begin(), a.records().end(), b.records().begin(), b.records().end(),
               std::back_inserter(merged),
               [](const TickRecord& x, const TickRecord& y) { return x.timestamp_ms < y.timestamp_ms; });
    std::string id = a.empty() ? b.pair_id() : b.empty() ? a.pair_id() : a.pair_id() + "+" + b.pair_id();
    return TickSeries(std::move(id), std::move(merged), a.source_dialect());
}

TickStats tick_stats(const TickSeries& ticks) {
    if (ticks.empty()) throw ValidationError("tick_stats: empty series");
    const auto& recs = ticks.records();
    TickStats s;
    s.n = recs.size();
    if (s.n > 1)
        s.mean_gap_s = static_cast<double>(recs.back().timestamp_ms - recs.front().timestamp_ms) /
                       static_cast<double>(s.n - 1) / 1000.0;
    double total = 0.0;
    for (const auto& r : recs) {
        total += r.volume_usd;
        s.max_volume = std::max(s.max_volume, r.volume_usd);
    }
    s.mean_volume = total / static_cast<double>(s.n);
    return s;
}

}  // namespace mfts
