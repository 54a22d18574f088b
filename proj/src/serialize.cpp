#include "mfts/serialize.hpp"

#include <cmath>
#include <sstream>

#include "mfts/error.hpp"
#include "mfts/io.hpp"

namespace mfts {

using nlohmann::json;

json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

namespace {

json number_array(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(json_number(x));
    return a;
}

json fit_range_json(const FitRange& r) { return json::array({json_number(r.lo), json_number(r.hi)}); }

}  // namespace

json to_json(const TickStats& s) {
    return {{"n", s.n}, {"mean_gap_s", json_number(s.mean_gap_s)}, {"mean_volume_usd", json_number(s.mean_volume)},
            {"max_volume_usd", json_number(s.max_volume)}};
}

json to_json(const AggregationReport& r) {
    return {{"n_bins", r.n_bins},
            {"zero_return_fraction", json_number(r.zero_return_fraction)},
            {"mean_bin_volume_usd", json_number(r.mean_bin_volume)}};
}

json to_json(const RegularSeries& s) {
    return {{"name", s.name},
            {"start_ms", s.start_ms},
            {"dt_ms", s.dt_ms},
            {"kind", std::string(to_string(s.kind))},
            {"normalized", s.normalized},
            {"length", s.values.size()},
            {"values", number_array(s.values)}};
}

RegularSeries series_from_json(const json& j) {
    try {
        RegularSeries s;
        s.name = j.value("name", std::string{});
        s.start_ms = j.value("start_ms", std::int64_t{0});
        s.dt_ms = j.value("dt_ms", std::int64_t{1});
        s.kind = parse_series_kind(j.value("kind", std::string{"generic"}));
        s.normalized = j.value("normalized", false);
        for (const auto& v : j.at("values")) {
            if (v.is_null()) throw ValidationError("series '" + s.name + "': null value");
            s.values.push_back(v.get<double>());
        }
        if (j.contains("length") && j.at("length").get<std::size_t>() != s.values.size())
            throw ValidationError("series '" + s.name + "': length field does not match values");
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed series document: ") + e.what());
    }
}

json to_json(const CcdfCurve& c) {
    return {{"n_samples", c.n_samples}, {"x", number_array(c.x)}, {"p", number_array(c.p)}};
}

json to_json(const TailFit& f) {
    return {{"gamma", json_number(f.gamma)},
            {"stderr", json_number(f.stderr_)},
            {"x_min", json_number(f.x_min)},
            {"n_tail", f.n_tail}};
}

json to_json(const StretchedFit& f) {
    return {{"beta", json_number(f.beta)},
            {"x0", json_number(f.x0)},
            {"c", json_number(f.c)},
            {"residual", json_number(f.residual)},
            {"n", f.n}};
}

json to_json(const FluctuationSurface& s) {
    json scales = s.scales.values;
    json unusable = json::array();
    for (bool b : s.unusable) unusable.push_back(b);
    return {{"q", number_array(s.q.values)},
            {"scales", scales},
            {"signed", s.is_signed},
            {"F", number_array(s.F)},
            {"segments", s.segments},
            {"dropped_segments", s.dropped},
            {"unusable", unusable}};
}

json to_json(const HurstCurve& h) {
    return {{"q", number_array(h.q)},
            {"h", number_array(h.h)},
            {"stderr", number_array(h.stderr_)},
            {"fit_range", fit_range_json(h.fit)},
            {"n_scales", h.n_scales},
            {"excluded_scales", h.excluded_scales},
            {"min_r2", json_number(h.min_r2)}};
}

json to_json(const Spectrum& s) {
    return {{"q", number_array(s.q)},
            {"alpha", number_array(s.alpha)},
            {"f", number_array(s.f)},
            {"width", json_number(s.width)},
            {"asymmetry", json_number(s.asymmetry)}};
}

json to_json(const LambdaCurve& l) {
    json profile = json::array();
    for (const auto& sp : l.sign_profile)
        profile.push_back({{"q", json_number(sp.q)},
                           {"positive", sp.positive},
                           {"negative", sp.negative},
                           {"undefined", sp.undefined}});
    return {{"q", number_array(l.q)},
            {"lambda", number_array(l.lambda)},
            {"stderr", number_array(l.stderr_)},
            {"sign", l.sign},
            {"excluded_q", number_array(l.excluded_q)},
            {"sign_profile", profile},
            {"fit_range", fit_range_json(l.fit)},
            {"min_r2", json_number(l.min_r2)}};
}

json to_json(const RhoSurface& r) {
    json flagged = json::array();
    for (bool b : r.flagged) flagged.push_back(b);
    return {{"q", json_number(r.q)}, {"scales", r.scales}, {"rho", number_array(r.rho)}, {"flagged", flagged}};
}

std::string acf_csv(std::span<const double> a) {
    std::ostringstream out;
    out << "lag,acf\n";
    for (std::size_t i = 0; i < a.size(); ++i) out << i << ',' << format_double(a[i]) << '\n';
    return out.str();
}

std::string ccdf_csv(const CcdfCurve& c) {
    std::ostringstream out;
    out << "x,p\n";
    for (std::size_t i = 0; i < c.x.size(); ++i) out << format_double(c.x[i]) << ',' << format_double(c.p[i]) << '\n';
    return out.str();
}

std::string surface_csv(const FluctuationSurface& s) {
    std::ostringstream out;
    out << "q,s,F\n";
    for (std::size_t qi = 0; qi < s.q.size(); ++qi)
        for (std::size_t si = 0; si < s.scales.size(); ++si)
            out << format_double(s.q.values[qi]) << ',' << s.scales.values[si] << ',' << format_double(s.at(qi, si))
                << '\n';
    return out.str();
}

std::string hurst_csv(const HurstCurve& h) {
    std::ostringstream out;
    out << "q,h,stderr\n";
    for (std::size_t i = 0; i < h.q.size(); ++i)
        out << format_double(h.q[i]) << ',' << format_double(h.h[i]) << ',' << format_double(h.stderr_[i]) << '\n';
    return out.str();
}

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream out;
    out << "alpha,f\n";
    for (std::size_t i = 0; i < s.alpha.size(); ++i)
        out << format_double(s.alpha[i]) << ',' << format_double(s.f[i]) << '\n';
    return out.str();
}

std::string rho_csv(const RhoSurface& r) {
    std::ostringstream out;
    out << "s,rho\n";
    for (std::size_t i = 0; i < r.scales.size(); ++i) out << r.scales[i] << ',' << format_double(r.rho[i]) << '\n';
    return out.str();
}

std::string series_csv(const RegularSeries& s) {
    std::ostringstream out;
    out << "index,value\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) out << i << ',' << format_double(s.values[i]) << '\n';
    return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mfts
