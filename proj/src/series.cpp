#include "mfts/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "mfts/error.hpp"
#include "mfts/io.hpp"
#include "mfts/serialize.hpp"

namespace mfts {

SeriesKind parse_series_kind(std::string_view name) {
    if (name == "log_return") return SeriesKind::log_return;
    if (name == "volume") return SeriesKind::volume;
    if (name == "volatility") return SeriesKind::volatility;
    if (name == "generic") return SeriesKind::generic;
    throw ValidationError("unknown series kind '" + std::string(name) + "'");
}

std::string_view to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::log_return: return "log_return";
        case SeriesKind::volume: return "volume";
        case SeriesKind::volatility: return "volatility";
        case SeriesKind::generic: return "generic";
    }
    return "generic";
}

void RegularSeries::validate() const {
    if (dt_ms <= 0) throw ValidationError("series '" + name + "': dt_ms must be positive");
    if (kind == SeriesKind::volume || kind == SeriesKind::volatility) {
        // Normalization shifts the values, so the sign rule applies to raw series only.
        if (!normalized)
            for (std::size_t i = 0; i < values.size(); ++i)
                if (values[i] < 0.0)
                    throw ValidationError("series '" + name + "': negative " + std::string(to_string(kind)) +
                                          " at index " + std::to_string(i));
    }
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    long double acc = 0.0L;
    for (double x : v) acc += x;
    return static_cast<double>(acc / static_cast<long double>(v.size()));
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    long double acc = 0.0L;
    for (double x : v) acc += static_cast<long double>(x - m) * (x - m);
    return static_cast<double>(acc / static_cast<long double>(v.size() - 1));
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Aggregated aggregate(const TickSeries& ticks, std::int64_t dt_ms) {
    if (dt_ms <= 0) throw ValidationError("aggregate: dt_ms must be positive");
    if (ticks.empty()) throw ValidationError("aggregate: empty tick series");

    const auto& recs = ticks.records();
    const std::int64_t anchor = floor_div(recs.front().timestamp_ms, dt_ms) * dt_ms;
    const std::int64_t last_bin = floor_div(recs.back().timestamp_ms - anchor, dt_ms);
    const auto n_bins = static_cast<std::size_t>(last_bin + 1);
    if (n_bins < 2)
        throw ValidationError("aggregate: ticks of '" + ticks.pair_id() + "' span fewer than 2 bins of " +
                              std::to_string(dt_ms) + " ms");

    std::vector<double> price(n_bins, 0.0);
    std::vector<double> volume(n_bins, 0.0);
    std::vector<char> filled(n_bins, 0);
    for (const auto& r : recs) {
        const auto k = static_cast<std::size_t>((r.timestamp_ms - anchor) / dt_ms);
        price[k] = r.price;  // records are time-ordered, so the last write wins
        volume[k] += r.volume_usd;
        filled[k] = 1;
    }
    for (std::size_t k = 1; k < n_bins; ++k)
        if (!filled[k]) price[k] = price[k - 1];

    Aggregated out;
    out.returns.name = ticks.pair_id() + ":returns";
    out.returns.start_ms = anchor + dt_ms;
    out.returns.dt_ms = dt_ms;
    out.returns.kind = SeriesKind::log_return;
    out.returns.values = log_returns(price);

    out.volume.name = ticks.pair_id() + ":volume";
    out.volume.start_ms = anchor;
    out.volume.dt_ms = dt_ms;
    out.volume.kind = SeriesKind::volume;
    out.volume.values = std::move(volume);

    const auto zeros = std::count(out.returns.values.begin(), out.returns.values.end(), 0.0);
    out.report.n_bins = n_bins;
    out.report.zero_return_fraction = static_cast<double>(zeros) / static_cast<double>(out.returns.size());
    long double total = 0.0L;
    for (double v : out.volume.values) total += v;
    out.report.mean_bin_volume = static_cast<double>(total / static_cast<long double>(n_bins));
    return out;
}

std::vector<double> log_returns(std::span<const double> prices) {
    for (std::size_t i = 0; i < prices.size(); ++i)
        if (!(prices[i] > 0.0))
            throw ValidationError("log_returns: non-positive price at index " + std::to_string(i));
    std::vector<double> out;
    if (prices.size() < 2) return out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) out.push_back(std::log(prices[i] / prices[i - 1]));
    return out;
}

RegularSeries normalize(const RegularSeries& series) {
    const double sd = std::sqrt(sample_variance(series.values));
    if (!(sd > 0.0)) throw ValidationError("normalize: series '" + series.name + "' has zero variance");
    const double m = mean(series.values);
    RegularSeries out = series;
    for (double& v : out.values) v = (v - m) / sd;
    out.normalized = true;
    return out;
}

RegularSeries absolute(const RegularSeries& series) {
    if (series.kind != SeriesKind::log_return)
        throw ValidationError("absolute: series '" + series.name + "' is " + std::string(to_string(series.kind)) +
                              ", expected log_return");
    RegularSeries out = series;
    for (double& v : out.values) v = std::fabs(v);
    out.kind = SeriesKind::volatility;
    return out;
}

RegularSeries drop_front(const RegularSeries& series, std::size_t count) {
    if (count > series.size()) throw ValidationError("drop_front: series '" + series.name + "' too short");
    RegularSeries out = series;
    out.values.erase(out.values.begin(), out.values.begin() + static_cast<std::ptrdiff_t>(count));
    out.start_ms += static_cast<std::int64_t>(count) * series.dt_ms;
    return out;
}

void require_aligned(const RegularSeries& x, const RegularSeries& y) {
    if (x.start_ms == y.start_ms && x.dt_ms == y.dt_ms && x.size() == y.size()) return;
    std::ostringstream msg;
    msg << "series are not aligned: '" << x.name << "' (start " << x.start_ms << ", dt " << x.dt_ms << ", length "
        << x.size() << ") vs '" << y.name << "' (start " << y.start_ms << ", dt " << y.dt_ms << ", length "
        << y.size() << ")";
    throw ValidationError(msg.str());
}

void write_series_csv(const std::filesystem::path& path, const RegularSeries& s) {
    write_text_file(path, series_csv(s));
}

std::string series_json_text(const RegularSeries& s) { return dump(to_json(s)); }

void write_series_json(const std::filesystem::path& path, const RegularSeries& s) {
    write_text_file(path, series_json_text(s));
}

RegularSeries read_series(const std::filesystem::path& path, const RegularSeries& defaults) {
    const std::string text = read_text_file(path);
    if (path.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ": " + e.what());
        }
        RegularSeries s = series_from_json(j);
        if (s.name.empty()) s.name = path.stem().string();
        return s;
    }

    RegularSeries s = defaults;
    s.values.clear();
    if (s.name.empty()) s.name = path.stem().string();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        const std::string_view value_text =
            comma == std::string::npos ? std::string_view(line) : std::string_view(line).substr(comma + 1);
        double v = 0.0;
        if (!parse_double(value_text, v)) {
            if (line_no == 1) continue;  // header
            throw ValidationError(path.string() + ": row " + std::to_string(line_no) + ": unparsable value");
        }
        s.values.push_back(v);
    }
    s.validate();
    return s;
}

}  // namespace mfts
