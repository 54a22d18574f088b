#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfts/detrend.hpp"
#include "mfts/ingest.hpp"
#include "mfts/mfcca.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/series.hpp"
#include "mfts/stats.hpp"

namespace mfts {

// JSON numbers are written through format_double-compatible values; NaN and
// infinities become null.
nlohmann::json json_number(double v);

nlohmann::json to_json(const TickStats& s);
nlohmann::json to_json(const AggregationReport& r);
nlohmann::json to_json(const RegularSeries& s);
nlohmann::json to_json(const CcdfCurve& c);
nlohmann::json to_json(const TailFit& f);
nlohmann::json to_json(const StretchedFit& f);
nlohmann::json to_json(const FluctuationSurface& s);
nlohmann::json to_json(const HurstCurve& h);
nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const LambdaCurve& l);
nlohmann::json to_json(const RhoSurface& r);

RegularSeries series_from_json(const nlohmann::json& j);

std::string acf_csv(std::span<const double> acf);        // lag,acf
std::string ccdf_csv(const CcdfCurve& c);                 // x,p
std::string surface_csv(const FluctuationSurface& s);     // q,s,F
std::string hurst_csv(const HurstCurve& h);               // q,h,stderr
std::string spectrum_csv(const Spectrum& s);              // alpha,f
std::string rho_csv(const RhoSurface& r);                 // s,rho
std::string series_csv(const RegularSeries& s);           // index,value

// Deterministic text for JSON documents (2-space indent, trailing newline).
std::string dump(const nlohmann::json& j);

}  // namespace mfts
