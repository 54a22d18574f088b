#include "mfts/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "mfts/detrend.hpp"
#include "mfts/error.hpp"
#include "mfts/fitting.hpp"
#include "mfts/io.hpp"
#include "mfts/mfcca.hpp"
#include "mfts/parallel.hpp"
#include "mfts/serialize.hpp"
#include "mfts/series.hpp"
#include "mfts/stats.hpp"

namespace mfts {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return (path.is_absolute() || base.empty()) ? path : base / path;
}

std::optional<FitRange> fit_range_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2) throw ValidationError(std::string(key) + " must be [lo, hi]");
    return FitRange{a.at(0).get<double>(), a.at(1).get<double>()};
}

json fit_range_to(const std::optional<FitRange>& r) {
    if (!r) return nullptr;
    return json::array({r->lo, r->hi});
}

const std::set<std::string> kConfigKeys = {
    "pairs", "volume_threshold_usd", "dedup", "dt_ms", "q", "scales", "m", "fit_range", "xy_fit_range",
    "acf_max_lag", "tail_quantile", "rho_q", "surrogates", "workers", "output_dir"};

}  // namespace

PipelineConfig config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kConfigKeys.contains(key)) throw ValidationError("unknown config field '" + key + "'");

    try {
        PipelineConfig cfg;
        for (const auto& pj : j.at("pairs")) {
            PairConfig pair;
            pair.id = pj.at("id").get<std::string>();
            if (pj.contains("ticks"))
                for (const auto& tj : pj.at("ticks"))
                    pair.ticks.push_back({resolve(base_dir, tj.at("path").get<std::string>()),
                                          parse_dialect(tj.value("dialect", std::string{"generic"}))});
            if (pj.contains("series")) pair.series = resolve(base_dir, pj.at("series").get<std::string>());
            if (pj.contains("cross_with")) pair.cross_with = resolve(base_dir, pj.at("cross_with").get<std::string>());
            cfg.pairs.push_back(std::move(pair));
        }
        cfg.volume_threshold_usd = j.value("volume_threshold_usd", cfg.volume_threshold_usd);
        cfg.dedup = j.value("dedup", cfg.dedup);
        cfg.dt_ms = j.value("dt_ms", cfg.dt_ms);
        cfg.q = j.value("q", cfg.q);
        if (j.contains("scales")) {
            const auto& s = j.at("scales");
            cfg.scales.min = s.value("min", cfg.scales.min);
            cfg.scales.max = s.value("max", cfg.scales.max);
            cfg.scales.count = s.value("count", cfg.scales.count);
        }
        cfg.m = j.value("m", cfg.m);
        cfg.fit_range = fit_range_from(j, "fit_range");
        cfg.xy_fit_range = fit_range_from(j, "xy_fit_range");
        cfg.acf_max_lag = j.value("acf_max_lag", cfg.acf_max_lag);
        cfg.tail_quantile = j.value("tail_quantile", cfg.tail_quantile);
        if (j.contains("rho_q")) cfg.rho_q = j.at("rho_q").get<std::vector<double>>();
        if (j.contains("surrogates")) {
            const auto& s = j.at("surrogates");
            if (s.contains("kinds"))
                for (const auto& k : s.at("kinds")) cfg.surrogates.kinds.push_back(parse_surrogate_kind(k.get<std::string>()));
            cfg.surrogates.replicates = s.value("replicates", cfg.surrogates.replicates);
            cfg.surrogates.seed = s.value("seed", cfg.surrogates.seed);
        }
        cfg.workers = j.value("workers", cfg.workers);
        if (j.contains("output_dir")) cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
        return cfg;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
}

json config_to_json(const PipelineConfig& cfg) {
    json pairs = json::array();
    for (const auto& p : cfg.pairs) {
        json pj{{"id", p.id}};
        if (!p.ticks.empty()) {
            json ticks = json::array();
            for (const auto& t : p.ticks)
                ticks.push_back({{"path", t.path.generic_string()}, {"dialect", std::string(to_string(t.dialect))}});
            pj["ticks"] = ticks;
        }
        if (!p.series.empty()) pj["series"] = p.series.generic_string();
        if (!p.cross_with.empty()) pj["cross_with"] = p.cross_with.generic_string();
        pairs.push_back(pj);
    }
    json kinds = json::array();
    for (auto k : cfg.surrogates.kinds) kinds.push_back(std::string(to_string(k)));
    return {{"pairs", pairs},
            {"volume_threshold_usd", cfg.volume_threshold_usd},
            {"dedup", cfg.dedup},
            {"dt_ms", cfg.dt_ms},
            {"q", cfg.q},
            {"scales", {{"min", cfg.scales.min}, {"max", cfg.scales.max}, {"count", cfg.scales.count}}},
            {"m", cfg.m},
            {"fit_range", fit_range_to(cfg.fit_range)},
            {"xy_fit_range", fit_range_to(cfg.xy_fit_range)},
            {"acf_max_lag", cfg.acf_max_lag},
            {"tail_quantile", cfg.tail_quantile},
            {"rho_q", cfg.rho_q},
            {"surrogates",
             {{"kinds", kinds}, {"replicates", cfg.surrogates.replicates}, {"seed", cfg.surrogates.seed}}}};
}

PipelineConfig load_config(const fs::path& path) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

void validate(const PipelineConfig& cfg) {
    if (cfg.pairs.empty()) throw ValidationError("config lists no pairs");
    std::set<std::string> ids;
    for (const auto& p : cfg.pairs) {
        if (p.id.empty() || p.id.find_first_of("/\\") != std::string::npos || p.id == "." || p.id == "..")
            throw ValidationError("pair id '" + p.id + "' is not usable as a directory name");
        if (!ids.insert(p.id).second) throw ValidationError("duplicate pair id '" + p.id + "'");
        if (p.ticks.empty() == p.series.empty())
            throw ValidationError("pair '" + p.id + "' needs either tick inputs or a series, not both");
        for (const auto& t : p.ticks)
            if (!fs::exists(t.path)) throw ValidationError("pair '" + p.id + "': file not found: " + t.path.string());
        for (const auto* path : {&p.series, &p.cross_with})
            if (!path->empty() && !fs::exists(*path))
                throw ValidationError("pair '" + p.id + "': file not found: " + path->string());
        if (!p.cross_with.empty() && p.series.empty())
            throw ValidationError("pair '" + p.id + "': cross_with needs a series input");
    }
    if (!(cfg.volume_threshold_usd >= 0.0)) throw ValidationError("volume_threshold_usd must be >= 0");
    if (cfg.dt_ms <= 0) throw ValidationError("dt_ms must be positive");
    if (cfg.m < 1 || cfg.m > 4) throw ValidationError("m must be in 1..4");
    const QGrid q = QGrid::parse(cfg.q);
    if (q.size() < 5) throw ValidationError("q grid needs at least 5 values for the spectrum");
    if (q.index_of(2.0) == QGrid::npos) throw ValidationError("q grid must contain q = 2");
    if (cfg.scales.min < 2 * (cfg.m + 1)) throw ValidationError("scales.min must be >= 2(m+1)");
    if (cfg.scales.max != 0 && cfg.scales.max <= cfg.scales.min) throw ValidationError("scales.max must exceed scales.min");
    if (cfg.scales.count < 5) throw ValidationError("scales.count must be >= 5");
    for (const auto& r : {cfg.fit_range, cfg.xy_fit_range})
        if (r && !(r->lo < r->hi)) throw ValidationError("fit ranges need lo < hi");
    if (cfg.acf_max_lag < 1) throw ValidationError("acf_max_lag must be >= 1");
    if (!(cfg.tail_quantile > 0.0 && cfg.tail_quantile < 1.0)) throw ValidationError("tail_quantile must be in (0, 1)");
    if (cfg.rho_q.empty()) throw ValidationError("rho_q must list at least one q");
    for (double q : cfg.rho_q)
        if (q == 0.0 || !std::isfinite(q)) throw ValidationError("rho_q entries must be finite and non-zero");
    if (!cfg.surrogates.kinds.empty() && cfg.surrogates.replicates < 1)
        throw ValidationError("surrogates.replicates must be >= 1");
    if (cfg.workers < 1) throw ValidationError("workers must be >= 1");
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string config_hash(const PipelineConfig& cfg) { return sha256_hex(config_to_json(cfg).dump()); }

// ---------------------------------------------------------------------------
// Running

namespace {

std::mutex log_mutex;

void log_event(std::string_view level, std::string_view pair, std::string_view stage, std::string_view msg) {
    std::lock_guard lock(log_mutex);
    std::cerr << "mfts level=" << level << " pair=" << pair << " stage=" << stage << " msg=\"" << msg << "\"\n";
}

class ArtifactWriter {
public:
    ArtifactWriter(fs::path root, std::string pair) : root_(std::move(root)), pair_(std::move(pair)) {}

    void write(const std::string& stage, const std::string& file, const std::string& content) {
        const std::string rel = pair_ + "/" + stage + "/" + file;
        write_text_file(root_ / rel, content);
        artifacts_.push_back({{"path", rel}, {"stage", stage}, {"sha256", sha256_hex(content)}});
    }
    void write_json(const std::string& stage, const std::string& name, const json& j) {
        write(stage, name + ".json", dump(j));
    }

    const json& artifacts() const { return artifacts_; }

private:
    fs::path root_;
    std::string pair_;
    json artifacts_ = json::array();
};

std::string q_label(double q) {
    std::string s = format_double(q);
    std::replace(s.begin(), s.end(), '-', 'm');
    return "q" + s;
}

struct PairContext {
    const PipelineConfig& cfg;
    ArtifactWriter& out;
    std::string& stage;
    DetrendOptions opts;
    QGrid q;
};

ScaleGrid scales_for(const PipelineConfig& cfg, std::size_t length) {
    const int s_max = cfg.scales.max > 0 ? cfg.scales.max : static_cast<int>(length / 4);
    if (s_max <= cfg.scales.min)
        throw ValidationError("series of length " + std::to_string(length) + " is too short for scales from " +
                              std::to_string(cfg.scales.min));
    return ScaleGrid(log_scale_grid(cfg.scales.min, s_max, cfg.scales.count));
}

// ACF and CCDF diagnostics for one (already normalized where relevant) series.
json distribution_stats(PairContext& ctx, const std::string& label, const RegularSeries& raw,
                        const RegularSeries& normalized) {
    const std::size_t lag = std::min(ctx.cfg.acf_max_lag, raw.size() - 1);
    ctx.out.write("stats", "acf_" + label + ".csv", acf_csv(acf(raw.values, lag)));

    const CcdfCurve curve = ccdf(normalized.values);
    ctx.out.write("stats", "ccdf_" + label + ".csv", ccdf_csv(curve));

    json fits;
    const double x_min = quantile_lower(normalized.values, ctx.cfg.tail_quantile);
    fits["x_min"] = json_number(x_min);
    try {
        fits["powerlaw"] = to_json(fit_powerlaw_tail(curve, x_min));
    } catch (const AnalysisError& e) {
        fits["powerlaw"] = {{"error", e.what()}};
    }
    try {
        fits["stretched_exp"] = to_json(fit_stretched_exp(curve));
    } catch (const AnalysisError& e) {
        fits["stretched_exp"] = {{"error", e.what()}};
    }
    const auto k = static_cast<std::size_t>(std::count_if(normalized.values.begin(), normalized.values.end(),
                                                          [&](double v) { return v > x_min; }));
    try {
        fits["hill"] = {{"gamma", json_number(hill_estimator(normalized.values, k))}, {"k", k}};
    } catch (const std::exception& e) {
        fits["hill"] = {{"error", e.what()}};
    }
    return fits;
}

HurstCurve mfdfa_stage(PairContext& ctx, const std::string& label, const RegularSeries& x) {
    const ScaleGrid scales = scales_for(ctx.cfg, x.size());
    const auto surface = fluctuation_zz(x, ctx.q, scales, ctx.opts);
    ctx.out.write("mfdfa", label + "_fluctuation.csv", surface_csv(surface));
    ctx.out.write_json("mfdfa", label + "_fluctuation", to_json(surface));
    const FitRange fit = ctx.cfg.fit_range.value_or(default_fit_range(scales));
    const HurstCurve h = generalized_hurst(surface, fit);
    ctx.out.write("mfdfa", label + "_hurst.csv", hurst_csv(h));
    ctx.out.write_json("mfdfa", label + "_hurst", to_json(h));
    const Spectrum sp = singularity_spectrum(h);
    ctx.out.write("mfdfa", label + "_spectrum.csv", spectrum_csv(sp));
    ctx.out.write_json("mfdfa", label + "_spectrum", to_json(sp));
    return h;
}

void mfcca_stage(PairContext& ctx, const RegularSeries& x, const RegularSeries& y, const HurstCurve& hx,
                 const HurstCurve& hy) {
    require_aligned(x, y);
    const ScaleGrid scales = scales_for(ctx.cfg, x.size());
    const auto fxy = fluctuation_xy(x, y, ctx.q, scales, ctx.opts);
    ctx.out.write("mfcca", "fxy_fluctuation.csv", surface_csv(fxy));
    ctx.out.write_json("mfcca", "fxy_fluctuation", to_json(fxy));

    const FitRange fit = ctx.cfg.xy_fit_range.value_or(ctx.cfg.fit_range.value_or(default_fit_range(scales)));
    try {
        ctx.out.write_json("mfcca", "lambda", to_json(lambda_exponent(fxy, fit)));
    } catch (const AnalysisError& e) {
        ctx.out.write_json("mfcca", "lambda", {{"error", e.what()}});
    }

    const HurstCurve avg = avg_hurst(hx, hy);
    ctx.out.write("mfcca", "avg_hurst.csv", hurst_csv(avg));
    ctx.out.write_json("mfcca", "avg_hurst", to_json(avg));

    for (const auto& r : rho(x, y, ctx.cfg.rho_q, scales, ctx.opts))
        ctx.out.write("mfcca", "rho_" + q_label(r.q) + ".csv", rho_csv(r));
}

void surrogate_stage(PairContext& ctx, const std::string& label, const RegularSeries& x) {
    const ScaleGrid scales = scales_for(ctx.cfg, x.size());
    const FitRange fit = ctx.cfg.fit_range.value_or(default_fit_range(scales));
    for (const auto kind : ctx.cfg.surrogates.kinds) {
        std::vector<Spectrum> spectra;
        for (int r = 0; r < ctx.cfg.surrogates.replicates; ++r) {
            const SurrogateSpec spec{kind, ctx.cfg.surrogates.seed, static_cast<std::uint64_t>(r)};
            const auto surrogate = make_surrogate(x, spec);
            spectra.push_back(
                singularity_spectrum(generalized_hurst(fluctuation_zz(surrogate, ctx.q, scales, ctx.opts), fit)));
        }
        const Spectrum avg = average_spectra(spectra);
        const std::string name = label + "_" + std::string(to_string(kind)) + "_spectrum";
        ctx.out.write("surrogates", name + ".csv", spectrum_csv(avg));
        json j = to_json(avg);
        j["replicates"] = ctx.cfg.surrogates.replicates;
        j["seed"] = ctx.cfg.surrogates.seed;
        ctx.out.write_json("surrogates", name, j);
    }
}

void run_tick_pair(PairContext& ctx, const PairConfig& pair) {
    ctx.stage = "ingest";
    json pools = json::array();
    std::optional<TickSeries> merged;
    for (const auto& input : pair.ticks) {
        const TickSeries raw = parse_ticks(input.path, input.dialect);
        TickSeries kept = filter_min_volume(raw, ctx.cfg.volume_threshold_usd);
        if (ctx.cfg.dedup) kept = dedup_exact(kept);
        pools.push_back({{"file", input.path.filename().string()},
                         {"raw_records", raw.size()},
                         {"kept_records", kept.size()}});
        merged = merged ? merge_pools(*merged, kept) : kept;
    }
    const TickSeries ticks(pair.id, merged->records(), merged->source_dialect());
    if (ticks.empty()) throw ValidationError("no ticks left after the volume filter");
    ctx.out.write_json("ingest", "tick_stats", {{"pools", pools}, {"merged", to_json(tick_stats(ticks))}});

    ctx.stage = "series";
    const Aggregated agg = aggregate(ticks, ctx.cfg.dt_ms);
    ctx.out.write_json("series", "aggregation", to_json(agg.report));
    ctx.out.write("series", "returns.csv", series_csv(agg.returns));
    ctx.out.write_json("series", "returns", to_json(agg.returns));
    ctx.out.write("series", "volume.csv", series_csv(agg.volume));
    ctx.out.write_json("series", "volume", to_json(agg.volume));

    ctx.stage = "stats";
    const RegularSeries volatility = absolute(agg.returns);
    const RegularSeries volume = drop_front(agg.volume, 1);
    json fits;
    fits["volatility"] = distribution_stats(ctx, "volatility", volatility, normalize(volatility));
    fits["volume"] = distribution_stats(ctx, "volume", agg.volume, normalize(agg.volume));
    fits["pearson_volatility_volume"] = json_number(pearson(volatility.values, volume.values));
    ctx.out.write_json("stats", "fits", fits);

    ctx.stage = "mfdfa";
    const HurstCurve h_returns = mfdfa_stage(ctx, "returns", agg.returns);
    const HurstCurve h_volume = mfdfa_stage(ctx, "volume", agg.volume);

    ctx.stage = "mfcca";
    mfcca_stage(ctx, volatility, volume, h_returns, h_volume);

    if (!ctx.cfg.surrogates.kinds.empty()) {
        ctx.stage = "surrogates";
        surrogate_stage(ctx, "returns", agg.returns);
        surrogate_stage(ctx, "volume", agg.volume);
    }
}

void run_series_pair(PairContext& ctx, const PairConfig& pair) {
    ctx.stage = "series";
    const RegularSeries x = read_series(pair.series);

    ctx.stage = "stats";
    const RegularSeries magnitude = x.kind == SeriesKind::log_return ? absolute(x) : x;
    ctx.out.write_json("stats", "fits", {{"series", distribution_stats(ctx, "series", x, normalize(magnitude))}});

    ctx.stage = "mfdfa";
    const HurstCurve hx = mfdfa_stage(ctx, "series", x);

    if (!pair.cross_with.empty()) {
        ctx.stage = "mfcca";
        const RegularSeries y = read_series(pair.cross_with);
        require_aligned(x, y);
        const HurstCurve hy = mfdfa_stage(ctx, "partner", y);
        ctx.stage = "mfcca";
        mfcca_stage(ctx, x, y, hx, hy);
    }

    if (!ctx.cfg.surrogates.kinds.empty()) {
        ctx.stage = "surrogates";
        surrogate_stage(ctx, "series", x);
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    validate(cfg);
    const QGrid q = QGrid::parse(cfg.q);
    fs::create_directories(cfg.output_dir);

    struct PairOutcome {
        json entry;
        bool ok = true;
        bool validation = false;
    };
    std::vector<PairOutcome> outcomes(cfg.pairs.size());

    parallel_for(cfg.pairs.size(), cfg.workers, [&](std::size_t i) {
        const PairConfig& pair = cfg.pairs[i];
        fs::remove_all(cfg.output_dir / pair.id);
        ArtifactWriter writer(cfg.output_dir, pair.id);
        std::string stage = "start";
        PairContext ctx{cfg, writer, stage, DetrendOptions{cfg.m, cfg.workers}, q};
        json entry{{"id", pair.id}};
        log_event("info", pair.id, stage, "started");
        try {
            if (!pair.ticks.empty()) run_tick_pair(ctx, pair);
            else run_series_pair(ctx, pair);
            entry["status"] = "ok";
            log_event("info", pair.id, stage, "finished");
        } catch (const std::exception& e) {
            outcomes[i].ok = false;
            outcomes[i].validation = dynamic_cast<const ValidationError*>(&e) != nullptr;
            entry["status"] = "FAILED";
            entry["failed_stage"] = stage;
            entry["error"] = e.what();
            log_event("error", pair.id, stage, e.what());
        }
        entry["artifacts"] = writer.artifacts();
        outcomes[i].entry = std::move(entry);
    });

    PipelineResult result;
    json pairs = json::array();
    for (auto& o : outcomes) {
        result.ok = result.ok && o.ok;
        result.validation_failure = result.validation_failure || o.validation;
        pairs.push_back(std::move(o.entry));
    }
    result.manifest = {{"tool", "mfts"},
                       {"format_version", 1},
                       {"config_hash", config_hash(cfg)},
                       {"config", config_to_json(cfg)},
                       {"status", result.ok ? "ok" : "FAILED"},
                       {"pairs", pairs}};
    write_text_file(cfg.output_dir / "manifest.json", dump(result.manifest));
    return result;
}

}  // namespace mfts
