// mfts: command-line front end for the multifractal time-series toolkit.
//
// Every subcommand delegates to the library; `report` runs the whole
// pipeline from a JSON config with flag overrides. Exit codes: 0 success,
// 1 invalid input or usage, 2 analysis failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfts/detrend.hpp"
#include "mfts/error.hpp"
#include "mfts/fitting.hpp"
#include "mfts/ingest.hpp"
#include "mfts/io.hpp"
#include "mfts/mfcca.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/pipeline.hpp"
#include "mfts/serialize.hpp"
#include "mfts/series.hpp"
#include "mfts/stats.hpp"
#include "mfts/surrogates.hpp"
#include "mfts/synth.hpp"

namespace fs = std::filesystem;
using namespace mfts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAnalysis = 2;

void log_info(std::string_view cmd, std::string_view msg) {
    std::cerr << "mfts level=info cmd=" << cmd << " msg=\"" << msg << "\"\n";
}

void log_error(std::string_view cmd, std::string_view msg) {
    std::cerr << "mfts level=error cmd=" << cmd << " msg=\"" << msg << "\"\n";
}

// Writes a series as JSON or CSV depending on the extension.
void save_series(const fs::path& path, const RegularSeries& s) {
    if (path.extension() == ".csv") write_series_csv(path, s);
    else write_series_json(path, s);
}

RegularSeries load_series(const fs::path& path, const std::string& kind) {
    RegularSeries defaults;
    defaults.name = path.stem().string();
    if (!kind.empty()) defaults.kind = parse_series_kind(kind);
    RegularSeries s = read_series(path, defaults);
    s.validate();
    return s;
}

// For two-series commands the file is part of the name, so that errors can
// tell the inputs apart even when they carry the same series name.
RegularSeries load_pair_member(const fs::path& path, const std::string& kind) {
    RegularSeries s = load_series(path, kind);
    s.name += " [" + path.string() + "]";
    return s;
}

std::optional<FitRange> parse_fit_range(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto colon = text.find(':');
    FitRange r;
    if (colon == std::string::npos || !parse_double(text.substr(0, colon), r.lo) ||
        !parse_double(text.substr(colon + 1), r.hi) || !(r.lo < r.hi))
        throw ValidationError("fit range must be lo:hi with lo < hi, got '" + text + "'");
    return r;
}

std::vector<double> parse_q_list(const std::string& text) { return QGrid::parse(text).values; }

// Options shared by the fluctuation-based subcommands.
struct AnalysisFlags {
    std::string q = "-4:4:0.2";
    std::string scales = "16:T/4:40";
    std::string fit_range;
    int m = 2;
    int workers = 1;

    void add_to(CLI::App* cmd, bool with_q = true) {
        if (with_q) cmd->add_option("--q", q, "q grid, lo:hi:step or comma list")->capture_default_str();
        cmd->add_option("--scales", scales, "scale grid min:max:count (max may be T/4)")->capture_default_str();
        cmd->add_option("--m", m, "detrending polynomial order (1..4)")->capture_default_str();
        cmd->add_option("--fit-range", fit_range, "scaling fit range lo:hi (default: central half of the grid)");
        cmd->add_option("--workers", workers, "worker threads")->capture_default_str();
    }
    DetrendOptions detrend() const { return {m, workers}; }
    ScaleGrid scale_grid(std::size_t length) const { return ScaleGrid::parse(scales, length); }
    FitRange fit(const ScaleGrid& grid) const { return parse_fit_range(fit_range).value_or(default_fit_range(grid)); }
};

std::string q_label(double q) {
    std::string s = format_double(q);
    for (auto& c : s)
        if (c == '-') c = 'm';
    return "q" + s;
}

// CLI11 reads "--q -4:4:0.2" as a flag followed by an unknown short option.
// Values of the q-like options are glued to their flag before parsing.
std::vector<std::string> glue_negative_values(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        const bool takes_q = a == "--q" || a == "--rho-q";
        if (takes_q && i + 1 < argc && argv[i + 1][0] == '-' && argv[i + 1][1] != '-') {
            args.push_back(a + "=" + argv[i + 1]);
            ++i;
        } else {
            args.push_back(a);
        }
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multifractal analysis of trade and price time series", "mfts"};
    app.require_subcommand(1);

    // ingest ----------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "Read tick files, filter, merge pools and write canonical ticks");
    std::vector<std::string> ingest_inputs;
    std::string ingest_dialect = "generic", ingest_pair, ingest_out, ingest_stats;
    double ingest_min_volume = 0.01;
    bool ingest_dedup = false;
    ingest_cmd->add_option("--input", ingest_inputs, "tick file(s); several pools are merged in order")->required();
    ingest_cmd->add_option("--dialect", ingest_dialect, "generic | binance_aggtrades")->capture_default_str();
    ingest_cmd->add_option("--pair", ingest_pair, "pair identifier");
    ingest_cmd->add_option("--min-volume", ingest_min_volume, "drop trades below this USD volume")
        ->capture_default_str();
    ingest_cmd->add_flag("--dedup", ingest_dedup, "remove exact duplicate records");
    ingest_cmd->add_option("--out", ingest_out, "canonical tick CSV to write");
    ingest_cmd->add_option("--stats", ingest_stats, "tick statistics JSON (default: stdout)");

    // aggregate -------------------------------------------------------------
    auto* agg_cmd = app.add_subcommand("aggregate", "Bin ticks into log-return and volume series");
    std::string agg_input, agg_dialect = "generic", agg_out_dir = ".";
    long long agg_dt = 300'000;
    agg_cmd->add_option("--input", agg_input, "tick file")->required();
    agg_cmd->add_option("--dialect", agg_dialect, "generic | binance_aggtrades")->capture_default_str();
    agg_cmd->add_option("--dt-ms", agg_dt, "bin width in milliseconds")->capture_default_str();
    agg_cmd->add_option("--out-dir", agg_out_dir, "output directory")->capture_default_str();

    // acf -------------------------------------------------------------------
    auto* acf_cmd = app.add_subcommand("acf", "Autocorrelation function of a series");
    std::string acf_input, acf_kind, acf_out;
    std::size_t acf_lag = 100;
    bool acf_abs = false;
    acf_cmd->add_option("--input", acf_input, "series file (.json or .csv)")->required();
    acf_cmd->add_option("--kind", acf_kind, "series kind for CSV input");
    acf_cmd->add_option("--max-lag", acf_lag, "largest lag")->capture_default_str();
    acf_cmd->add_flag("--abs", acf_abs, "use absolute values (volatility)");
    acf_cmd->add_option("--out", acf_out, "CSV output (default: stdout)");

    // ccdf ------------------------------------------------------------------
    auto* ccdf_cmd = app.add_subcommand("ccdf", "Complementary CDF of the normalized series with tail fits");
    std::string ccdf_input, ccdf_kind, ccdf_out, ccdf_fits;
    double ccdf_quantile = 0.99;
    bool ccdf_abs = false;
    ccdf_cmd->add_option("--input", ccdf_input, "series file (.json or .csv)")->required();
    ccdf_cmd->add_option("--kind", ccdf_kind, "series kind for CSV input");
    ccdf_cmd->add_flag("--abs", ccdf_abs, "use absolute values (volatility)");
    ccdf_cmd->add_option("--tail-quantile", ccdf_quantile, "power-law fit starts at this quantile")
        ->capture_default_str();
    ccdf_cmd->add_option("--out", ccdf_out, "CSV output (default: stdout)");
    ccdf_cmd->add_option("--fits", ccdf_fits, "JSON with power-law, stretched-exponential and Hill fits");

    // mfdfa -----------------------------------------------------------------
    auto* mfdfa_cmd = app.add_subcommand("mfdfa", "Fluctuation functions, h(q) and f(alpha) of one series");
    std::string mfdfa_input, mfdfa_kind, mfdfa_out_dir = ".", mfdfa_label;
    AnalysisFlags mfdfa_flags;
    mfdfa_cmd->add_option("--input", mfdfa_input, "series file (.json or .csv)")->required();
    mfdfa_cmd->add_option("--kind", mfdfa_kind, "series kind for CSV input");
    mfdfa_cmd->add_option("--out-dir", mfdfa_out_dir, "output directory")->capture_default_str();
    mfdfa_cmd->add_option("--label", mfdfa_label, "file name prefix (default: series name)");
    mfdfa_flags.add_to(mfdfa_cmd);

    // mfcca -----------------------------------------------------------------
    auto* mfcca_cmd = app.add_subcommand("mfcca", "Cross-fluctuation function, lambda(q) and rho(q,s) of a pair");
    std::string mfcca_x, mfcca_y, mfcca_kind, mfcca_out_dir = ".", mfcca_rho_q = "2";
    AnalysisFlags mfcca_flags;
    mfcca_cmd->add_option("--x", mfcca_x, "first series")->required();
    mfcca_cmd->add_option("--y", mfcca_y, "second series")->required();
    mfcca_cmd->add_option("--kind", mfcca_kind, "series kind for CSV input");
    mfcca_cmd->add_option("--rho-q", mfcca_rho_q, "q values for rho(q,s)")->capture_default_str();
    mfcca_cmd->add_option("--out-dir", mfcca_out_dir, "output directory")->capture_default_str();
    mfcca_flags.add_to(mfcca_cmd);

    // rho -------------------------------------------------------------------
    auto* rho_cmd = app.add_subcommand("rho", "q-dependent detrended cross-correlation coefficient");
    std::string rho_x, rho_y, rho_kind, rho_out_dir;
    AnalysisFlags rho_flags;
    rho_flags.q = "2";
    rho_cmd->add_option("--x", rho_x, "first series")->required();
    rho_cmd->add_option("--y", rho_y, "second series")->required();
    rho_cmd->add_option("--kind", rho_kind, "series kind for CSV input");
    rho_cmd->add_option("--out-dir", rho_out_dir, "write rho_q<q>.csv files here (default: stdout)");
    rho_flags.add_to(rho_cmd);

    // surrogate -------------------------------------------------------------
    auto* sur_cmd = app.add_subcommand("surrogate", "Shuffled or phase-randomized copy of a series");
    std::string sur_input, sur_kind_series, sur_kind = "shuffle", sur_out;
    std::uint64_t sur_seed = 0, sur_replicate = 0;
    sur_cmd->add_option("--input", sur_input, "series file")->required();
    sur_cmd->add_option("--series-kind", sur_kind_series, "series kind for CSV input");
    sur_cmd->add_option("--kind", sur_kind, "shuffle | fourier")->capture_default_str();
    sur_cmd->add_option("--seed", sur_seed, "base seed")->capture_default_str();
    sur_cmd->add_option("--replicate", sur_replicate, "replicate index")->capture_default_str();
    sur_cmd->add_option("--out", sur_out, "output series file (.json or .csv)")->required();

    // synth -----------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic benchmark series");
    synth_cmd->require_subcommand(1);
    auto* cascade_cmd = synth_cmd->add_subcommand("cascade", "Binomial multiplicative cascade");
    CascadeParams cascade_params;
    std::string cascade_out;
    cascade_cmd->add_option("--levels", cascade_params.levels, "series length is 2^levels")->capture_default_str();
    cascade_cmd->add_option("--p", cascade_params.p, "multiplier, 0.5 < p < 1")->capture_default_str();
    cascade_cmd->add_option("--out", cascade_out, "output series file (.json or .csv)")->required();
    auto* fgn_cmd = synth_cmd->add_subcommand("fgn", "Fractional Gaussian noise");
    double fgn_hurst = 0.5;
    std::size_t fgn_length = 65536;
    std::uint64_t fgn_seed = 0;
    std::string fgn_out;
    fgn_cmd->add_option("--hurst", fgn_hurst, "Hurst exponent in (0, 1)")->capture_default_str();
    fgn_cmd->add_option("--length", fgn_length, "power of two >= 1024")->capture_default_str();
    fgn_cmd->add_option("--seed", fgn_seed, "seed")->capture_default_str();
    fgn_cmd->add_option("--out", fgn_out, "output series file (.json or .csv)")->required();

    // report ----------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "Run the full pipeline from a JSON config");
    std::string report_config, report_out_dir, report_q;
    std::optional<int> report_workers, report_m, report_replicates;
    std::optional<long long> report_dt;
    std::optional<std::uint64_t> report_seed;
    report_cmd->add_option("--config", report_config, "pipeline config (JSON)")->required();
    report_cmd->add_option("--out-dir", report_out_dir, "override output_dir");
    report_cmd->add_option("--workers", report_workers, "override workers");
    report_cmd->add_option("--m", report_m, "override m");
    report_cmd->add_option("--dt-ms", report_dt, "override dt_ms");
    report_cmd->add_option("--q", report_q, "override q");
    report_cmd->add_option("--seed", report_seed, "override surrogates.seed");
    report_cmd->add_option("--replicates", report_replicates, "override surrogates.replicates");

    try {
        app.parse(glue_negative_values(argc, argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (*ingest_cmd) {
            const Dialect dialect = parse_dialect(ingest_dialect);
            std::optional<TickSeries> merged;
            for (const auto& file : ingest_inputs) {
                TickSeries kept = filter_min_volume(parse_ticks(file, dialect), ingest_min_volume);
                if (ingest_dedup) kept = dedup_exact(kept);
                merged = merged ? merge_pools(*merged, kept) : kept;
            }
            const TickSeries ticks(ingest_pair.empty() ? merged->pair_id() : ingest_pair, merged->records(),
                                   merged->source_dialect());
            if (!ingest_out.empty()) write_ticks(fs::path(ingest_out), ticks);
            const std::string stats = dump(to_json(tick_stats(ticks)));
            if (ingest_stats.empty()) std::cout << stats;
            else write_text_file(ingest_stats, stats);
            log_info(cmd, std::to_string(ticks.size()) + " records kept");
        } else if (*agg_cmd) {
            const TickSeries ticks = parse_ticks(agg_input, parse_dialect(agg_dialect));
            const Aggregated agg = aggregate(ticks, agg_dt);
            const fs::path dir = agg_out_dir;
            write_series_json(dir / "returns.json", agg.returns);
            write_series_csv(dir / "returns.csv", agg.returns);
            write_series_json(dir / "volume.json", agg.volume);
            write_series_csv(dir / "volume.csv", agg.volume);
            write_text_file(dir / "aggregation.json", dump(to_json(agg.report)));
            log_info(cmd, std::to_string(agg.report.n_bins) + " bins");
        } else if (*acf_cmd) {
            RegularSeries s = load_series(acf_input, acf_kind);
            if (acf_abs) s = absolute(s);
            const std::string csv = acf_csv(acf(s.values, acf_lag));
            if (acf_out.empty()) std::cout << csv;
            else write_text_file(acf_out, csv);
        } else if (*ccdf_cmd) {
            RegularSeries s = load_series(ccdf_input, ccdf_kind);
            if (ccdf_abs) s = absolute(s);
            const RegularSeries z = normalize(s);
            const CcdfCurve curve = ccdf(z.values);
            if (ccdf_out.empty()) std::cout << ccdf_csv(curve);
            else write_text_file(ccdf_out, ccdf_csv(curve));
            if (!ccdf_fits.empty()) {
                const double x_min = quantile_lower(z.values, ccdf_quantile);
                nlohmann::json fits{{"x_min", json_number(x_min)}};
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
                write_text_file(ccdf_fits, dump(fits));
            }
        } else if (*mfdfa_cmd) {
            const RegularSeries s = load_series(mfdfa_input, mfdfa_kind);
            const QGrid q = QGrid::parse(mfdfa_flags.q);
            const ScaleGrid scales = mfdfa_flags.scale_grid(s.size());
            const auto surface = fluctuation_zz(s, q, scales, mfdfa_flags.detrend());
            const HurstCurve h = generalized_hurst(surface, mfdfa_flags.fit(scales));
            const Spectrum sp = singularity_spectrum(h);
            const fs::path dir = mfdfa_out_dir;
            const std::string label = mfdfa_label.empty() ? s.name : mfdfa_label;
            write_text_file(dir / (label + "_fluctuation.csv"), surface_csv(surface));
            write_text_file(dir / (label + "_hurst.csv"), hurst_csv(h));
            write_text_file(dir / (label + "_hurst.json"), dump(to_json(h)));
            write_text_file(dir / (label + "_spectrum.csv"), spectrum_csv(sp));
            write_text_file(dir / (label + "_spectrum.json"), dump(to_json(sp)));
            log_info(cmd, "h(2)=" + format_double(h.hurst()) + " width=" + format_double(sp.width));
        } else if (*mfcca_cmd) {
            const RegularSeries x = load_pair_member(mfcca_x, mfcca_kind);
            const RegularSeries y = load_pair_member(mfcca_y, mfcca_kind);
            require_aligned(x, y);
            const QGrid q = QGrid::parse(mfcca_flags.q);
            const ScaleGrid scales = mfcca_flags.scale_grid(x.size());
            const FitRange fit = mfcca_flags.fit(scales);
            const auto opts = mfcca_flags.detrend();
            const auto fxy = fluctuation_xy(x, y, q, scales, opts);
            const fs::path dir = mfcca_out_dir;
            write_text_file(dir / "fxy_fluctuation.csv", surface_csv(fxy));
            write_text_file(dir / "lambda.json", dump(to_json(lambda_exponent(fxy, fit))));
            const HurstCurve hx = generalized_hurst(fluctuation_zz(x, q, scales, opts), fit);
            const HurstCurve hy = generalized_hurst(fluctuation_zz(y, q, scales, opts), fit);
            write_text_file(dir / "avg_hurst.csv", hurst_csv(avg_hurst(hx, hy)));
            for (const auto& r : rho(x, y, parse_q_list(mfcca_rho_q), scales, opts))
                write_text_file(dir / ("rho_" + q_label(r.q) + ".csv"), rho_csv(r));
        } else if (*rho_cmd) {
            const RegularSeries x = load_pair_member(rho_x, rho_kind);
            const RegularSeries y = load_pair_member(rho_y, rho_kind);
            const ScaleGrid scales = rho_flags.scale_grid(x.size());
            const auto surfaces = rho(x, y, parse_q_list(rho_flags.q), scales, rho_flags.detrend());
            for (const auto& r : surfaces) {
                if (rho_out_dir.empty()) std::cout << "# q=" << format_double(r.q) << '\n' << rho_csv(r);
                else write_text_file(fs::path(rho_out_dir) / ("rho_" + q_label(r.q) + ".csv"), rho_csv(r));
            }
        } else if (*sur_cmd) {
            const RegularSeries s = load_series(sur_input, sur_kind_series);
            const SurrogateSpec spec{parse_surrogate_kind(sur_kind), sur_seed, sur_replicate};
            save_series(sur_out, make_surrogate(s, spec));
        } else if (*cascade_cmd) {
            save_series(cascade_out, binomial_cascade(cascade_params));
        } else if (*fgn_cmd) {
            save_series(fgn_out, fgn(fgn_hurst, fgn_length, fgn_seed));
        } else if (*report_cmd) {
            PipelineConfig cfg = load_config(report_config);
            if (!report_out_dir.empty()) cfg.output_dir = report_out_dir;
            if (report_workers) cfg.workers = *report_workers;
            if (report_m) cfg.m = *report_m;
            if (report_dt) cfg.dt_ms = *report_dt;
            if (!report_q.empty()) cfg.q = report_q;
            if (report_seed) cfg.surrogates.seed = *report_seed;
            if (report_replicates) cfg.surrogates.replicates = *report_replicates;
            const PipelineResult result = run_pipeline(cfg);
            log_info(cmd, "manifest written to " + (cfg.output_dir / "manifest.json").string());
            if (!result.ok) return result.validation_failure ? kExitValidation : kExitAnalysis;
        }
    } catch (const ValidationError& e) {
        log_error(cmd, e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        log_error(cmd, e.what());
        return kExitAnalysis;
    }
    return kExitOk;
}
