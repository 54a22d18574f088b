#include "mfts/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfts/error.hpp"
#include "mfts/fitting.hpp"

namespace mfts {

FitRange default_fit_range(const ScaleGrid& scales) {
    const double a = std::log(static_cast<double>(scales.values.front()));
    const double b = std::log(static_cast<double>(scales.values.back()));
    return {std::exp(a + (b - a) / 4.0), std::exp(b - (b - a) / 4.0)};
}

double HurstCurve::hurst() const {
    for (std::size_t i = 0; i < q.size(); ++i)
        if (std::fabs(q[i] - 2.0) < 1e-9) return h[i];
    throw ValidationError("q = 2 is not on the grid, H = h(2) is undefined");
}

HurstCurve generalized_hurst(const FluctuationSurface& surface, FitRange fit) {
    if (surface.is_signed) throw ValidationError("generalized_hurst needs an unsigned (F_ZZ) surface");
    if (surface.q.index_of(2.0) == QGrid::npos)
        throw ValidationError("generalized_hurst: the q grid must contain q = 2 (H = h(2))");

    HurstCurve out;
    out.fit = fit;
    std::vector<std::size_t> used;
    for (std::size_t si = 0; si < surface.scales.size(); ++si) {
        const double s = surface.scales.values[si];
        if (s < fit.lo || s > fit.hi) continue;
        if (surface.unusable[si]) {
            out.excluded_scales.push_back(surface.scales.values[si]);
            continue;
        }
        used.push_back(si);
    }
    if (used.size() < 5)
        throw AnalysisError("generalized_hurst: " + std::to_string(used.size()) + " usable scales in [" +
                            std::to_string(fit.lo) + ", " + std::to_string(fit.hi) + "], need at least 5");
    out.n_scales = used.size();

    std::vector<double> lx(used.size()), ly(used.size());
    for (std::size_t k = 0; k < used.size(); ++k) lx[k] = std::log(static_cast<double>(surface.scales.values[used[k]]));

    for (std::size_t qi = 0; qi < surface.q.size(); ++qi) {
        for (std::size_t k = 0; k < used.size(); ++k) {
            const double F = surface.at(qi, used[k]);
            if (!(F > 0.0) || !std::isfinite(F))
                throw AnalysisError("generalized_hurst: non-positive F at q = " + std::to_string(surface.q.values[qi]) +
                                    ", s = " + std::to_string(surface.scales.values[used[k]]));
            ly[k] = std::log(F);
        }
        const LinFit lf = linear_fit(lx, ly);
        out.q.push_back(surface.q.values[qi]);
        out.h.push_back(lf.slope);
        out.stderr_.push_back(lf.slope_stderr);
        out.min_r2 = std::min(out.min_r2, lf.r2);
    }
    return out;
}

HurstCurve generalized_hurst(const FluctuationSurface& surface) {
    return generalized_hurst(surface, default_fit_range(surface.scales));
}

Spectrum singularity_spectrum(const HurstCurve& hc) {
    const std::size_t n = hc.q.size();
    if (n < 5) throw ValidationError("singularity_spectrum: need h(q) on at least 5 q values");

    Spectrum sp;
    sp.q = hc.q;
    sp.alpha.resize(n);
    sp.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        const double dh = (hc.h[hi] - hc.h[lo]) / (hc.q[hi] - hc.q[lo]);
        if (!std::isfinite(dh))
            throw AnalysisError("singularity_spectrum: non-finite dh/dq at q = " + std::to_string(hc.q[i]));
        sp.alpha[i] = hc.h[i] + hc.q[i] * dh;
        sp.f[i] = hc.q[i] * (sp.alpha[i] - hc.h[i]) + 1.0;
    }
    sp.width = *std::max_element(sp.alpha.begin(), sp.alpha.end()) -
               *std::min_element(sp.alpha.begin(), sp.alpha.end());
    try {
        sp.asymmetry = spectrum_metrics(sp).asymmetry;
    } catch (const AnalysisError&) {
        sp.asymmetry = std::numeric_limits<double>::quiet_NaN();
    }
    return sp;
}

SpectrumMetrics spectrum_metrics(const Spectrum& spec) {
    if (spec.alpha.size() < 3 || spec.f.size() != spec.alpha.size())
        throw ValidationError("spectrum_metrics: need at least 3 spectrum points");
    const auto [lo, hi] = std::minmax_element(spec.alpha.begin(), spec.alpha.end());
    const auto apex = static_cast<std::size_t>(std::max_element(spec.f.begin(), spec.f.end()) - spec.f.begin());
    const double left = spec.alpha[apex] - *lo;
    const double right = *hi - spec.alpha[apex];
    if (!(left + right > 0.0)) throw AnalysisError("spectrum_metrics: degenerate spectrum (zero width)");
    return {*hi - *lo, (left - right) / (left + right)};
}

}  // namespace mfts
