#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfts/ingest.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/surrogates.hpp"

namespace mfts {

struct TickInput {
    std::filesystem::path path;
    Dialect dialect = Dialect::generic;
};

// One analysis unit. Either tick files (pools merged in order after the
// per-pool volume filter), or a prepared series with an optional partner for
// the cross-correlation stage.
struct PairConfig {
    std::string id;
    std::vector<TickInput> ticks;
    std::filesystem::path series;
    std::filesystem::path cross_with;
};

struct ScaleSpec {
    int min = 16;
    int max = 0;  // 0: T / 4
    int count = 40;
};

struct SurrogateConfig {
    std::vector<SurrogateKind> kinds;
    int replicates = 10;
    std::uint64_t seed = 0;
};

struct PipelineConfig {
    std::vector<PairConfig> pairs;
    double volume_threshold_usd = 0.01;
    bool dedup = false;
    std::int64_t dt_ms = 300'000;
    std::string q = "-4:4:0.2";
    ScaleSpec scales;
    int m = 2;
    std::optional<FitRange> fit_range;
    std::optional<FitRange> xy_fit_range;
    std::size_t acf_max_lag = 100;
    double tail_quantile = 0.99;
    std::vector<double> rho_q{2.0};
    SurrogateConfig surrogates;
    int workers = 1;
    std::filesystem::path output_dir = "out";
};

// Relative paths inside the document are resolved against base_dir.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
// Canonical form; output_dir and workers are left out so that the hash only
// reflects what determines the results.
nlohmann::json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

// Throws ValidationError for missing files or out-of-range parameters.
void validate(const PipelineConfig& cfg);

std::string config_hash(const PipelineConfig& cfg);
std::string sha256_hex(std::string_view data);

struct PipelineResult {
    nlohmann::json manifest;
    bool ok = true;
    bool validation_failure = false;  // a pair failed on bad input rather than analysis
};

// Writes <output_dir>/<pair>/<stage>/<name>.{csv,json} and <output_dir>/manifest.json.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace mfts
