#include "mfts/mfcca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfts/error.hpp"
#include "mfts/fitting.hpp"

namespace mfts {

LambdaCurve lambda_exponent(const FluctuationSurface& surface, FitRange fit) {
    if (!surface.is_signed) throw ValidationError("lambda_exponent needs a signed (F_XY) surface");

    std::vector<std::size_t> used;
    for (std::size_t si = 0; si < surface.scales.size(); ++si) {
        const double s = surface.scales.values[si];
        if (s >= fit.lo && s <= fit.hi && !surface.unusable[si]) used.push_back(si);
    }
    if (used.size() < 5)
        throw AnalysisError("lambda_exponent: " + std::to_string(used.size()) +
                            " usable scales in the fit range, need at least 5");

    LambdaCurve out;
    out.fit = fit;
    std::vector<double> lx(used.size()), ly(used.size());
    for (std::size_t k = 0; k < used.size(); ++k) lx[k] = std::log(static_cast<double>(surface.scales.values[used[k]]));

    for (std::size_t qi = 0; qi < surface.q.size(); ++qi) {
        const double q = surface.q.values[qi];
        if (!(q > 0.0)) continue;
        SignSummary summary{q, 0, 0, 0};
        for (std::size_t si : used) {
            const double F = surface.at(qi, si);
            if (F > 0.0 && std::isfinite(F)) ++summary.positive;
            else if (F < 0.0 && std::isfinite(F)) ++summary.negative;
            else ++summary.undefined;
        }
        out.sign_profile.push_back(summary);
        const auto n = static_cast<int>(used.size());
        const int sign = summary.positive == n ? 1 : summary.negative == n ? -1 : 0;
        if (sign == 0) {
            out.excluded_q.push_back(q);
            continue;
        }
        for (std::size_t k = 0; k < used.size(); ++k) ly[k] = std::log(sign * surface.at(qi, used[k]));
        const LinFit lf = linear_fit(lx, ly);
        out.q.push_back(q);
        out.lambda.push_back(lf.slope);
        out.stderr_.push_back(lf.slope_stderr);
        out.sign.push_back(sign);
        out.min_r2 = std::min(out.min_r2, lf.r2);
    }
    if (out.q.empty())
        throw AnalysisError("lambda_exponent: no q > 0 has a uniform sign of F_XY over the fit range");
    return out;
}

HurstCurve avg_hurst(const HurstCurve& hx, const HurstCurve& hy) {
    if (hx.q.size() != hy.q.size())
        throw ValidationError("avg_hurst: q grids differ in size");
    for (std::size_t i = 0; i < hx.q.size(); ++i)
        if (std::fabs(hx.q[i] - hy.q[i]) > 1e-9) throw ValidationError("avg_hurst: q grids differ");

    HurstCurve out = hx;
    out.excluded_scales.clear();
    out.min_r2 = std::min(hx.min_r2, hy.min_r2);
    for (std::size_t i = 0; i < hx.q.size(); ++i) {
        out.h[i] = (hx.h[i] + hy.h[i]) / 2.0;
        out.stderr_[i] = std::hypot(hx.stderr_[i], hy.stderr_[i]) / 2.0;
    }
    return out;
}

RhoSurface rho_from_surfaces(const FluctuationSurface& fxy, const FluctuationSurface& fxx,
                             const FluctuationSurface& fyy, double q) {
    const std::size_t i_xy = fxy.q.index_of(q), i_xx = fxx.q.index_of(q), i_yy = fyy.q.index_of(q);
    if (i_xy == QGrid::npos || i_xx == QGrid::npos || i_yy == QGrid::npos)
        throw ValidationError("rho: q = " + std::to_string(q) + " missing from a surface");
    if (fxy.scales.values != fxx.scales.values || fxy.scales.values != fyy.scales.values)
        throw ValidationError("rho: surfaces use different scale grids");

    if (q == 0.0) throw ValidationError("rho: q = 0 is not defined (the q-th powers are identically 1)");

    // Ratio of the q-th order averages, i.e. the fluctuation functions raised
    // back to the power q, so that q = 2 is the detrended covariance over the
    // detrended standard deviations.
    RhoSurface out;
    out.q = q;
    out.scales = fxy.scales.values;
    for (std::size_t si = 0; si < out.scales.size(); ++si) {
        const double f_xy = fxy.at(i_xy, si);
        const double denom = std::sqrt(std::pow(fxx.at(i_xx, si), q) * std::pow(fyy.at(i_yy, si), q));
        const double num = std::copysign(std::pow(std::abs(f_xy), q), f_xy);
        const bool bad = !(denom > 0.0) || !std::isfinite(denom) || !std::isfinite(num);
        out.rho.push_back(bad ? std::numeric_limits<double>::quiet_NaN() : num / denom);
        out.flagged.push_back(bad);
    }
    return out;
}

std::vector<RhoSurface> rho(const RegularSeries& x, const RegularSeries& y, std::span<const double> q,
                            const ScaleGrid& scales, const DetrendOptions& opts) {
    require_aligned(x, y);
    if (q.empty()) throw ValidationError("rho: empty q list");
    std::vector<double> grid(q.begin(), q.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const QGrid qg(grid);

    const auto fxy = fluctuation_xy(x, y, qg, scales, opts);
    const auto fxx = fluctuation_zz(x, qg, scales, opts);
    const auto fyy = fluctuation_zz(y, qg, scales, opts);
    std::vector<RhoSurface> out;
    out.reserve(q.size());
    for (double qv : q) out.push_back(rho_from_surfaces(fxy, fxx, fyy, qv));
    return out;
}

RhoSurface rho(const RegularSeries& x, const RegularSeries& y, double q, const ScaleGrid& scales,
               const DetrendOptions& opts) {
    const double qs[] = {q};
    return rho(x, y, qs, scales, opts).front();
}

}  // namespace mfts
