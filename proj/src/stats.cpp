#include "mfts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "mfts/error.hpp"
#include "mfts/fitting.hpp"

namespace mfts {

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 1 || max_lag >= n)
        throw ValidationError("acf: need 1 <= max_lag < T (max_lag " + std::to_string(max_lag) + ", T " +
                              std::to_string(n) + ")");
    const double mu = mean(x);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - mu;

    long double c0 = 0.0L;
    for (double v : d) c0 += static_cast<long double>(v) * v;
    if (!(c0 > 0.0L)) throw ValidationError("acf: zero variance");

    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        long double c = 0.0L;
        for (std::size_t i = 0; i + lag < n; ++i) c += static_cast<long double>(d[i]) * d[i + lag];
        out[lag] = static_cast<double>(c / c0);
    }
    return out;
}

CcdfCurve ccdf(std::span<const double> values) {
    if (values.size() < 2) throw ValidationError("ccdf: need at least 2 values");
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted)
        if (std::isnan(v)) throw ValidationError("ccdf: NaN in input");
    std::sort(sorted.begin(), sorted.end());

    CcdfCurve c;
    const std::size_t n = sorted.size();
    c.n_samples = n;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        c.x.push_back(sorted[i]);
        c.p.push_back(static_cast<double>(n - j) / static_cast<double>(n));
        i = j;
    }
    return c;
}

TailFit fit_powerlaw_tail(const CcdfCurve& curve, double x_min) {
    std::vector<double> lx, lp;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.x[i] < x_min || !(curve.p[i] > 0.0)) continue;
        if (!(curve.x[i] > 0.0))
            throw AnalysisError("fit_powerlaw_tail: non-positive x in the tail (x_min " + std::to_string(x_min) + ")");
        lx.push_back(std::log(curve.x[i]));
        lp.push_back(std::log(curve.p[i]));
    }
    if (lx.size() < 10)
        throw AnalysisError("fit_powerlaw_tail: " + std::to_string(lx.size()) +
                            " curve points above x_min, need at least 10");
    const LinFit fit = linear_fit(lx, lp);
    if (!(fit.slope < 0.0)) throw AnalysisError("fit_powerlaw_tail: tail does not decay");
    return TailFit{-fit.slope, fit.slope_stderr, x_min, lx.size()};
}

namespace {

struct StretchedLinear {
    double slope = 0.0;
    double intercept = 0.0;
    double rss = 0.0;
};

StretchedLinear stretched_at(double beta, std::span<const double> x, std::span<const double> lp) {
    const std::size_t n = x.size();
    std::vector<double> xb(n);
    for (std::size_t i = 0; i < n; ++i) xb[i] = std::pow(x[i], beta);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xb[i];
        my += lp[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xb[i] - mx) * (xb[i] - mx);
        sxy += (xb[i] - mx) * (lp[i] - my);
    }
    StretchedLinear r;
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = lp[i] - (r.intercept + r.slope * xb[i]);
        r.rss += e * e;
    }
    return r;
}

}  // namespace

StretchedFit fit_stretched_exp(const CcdfCurve& curve) {
    std::vector<double> x, lp;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (!(curve.x[i] > 0.0) || !(curve.p[i] > 0.0)) continue;
        x.push_back(curve.x[i]);
        lp.push_back(std::log(curve.p[i]));
    }
    if (x.size() < 20)
        throw AnalysisError("fit_stretched_exp: " + std::to_string(x.size()) +
                            " positive curve points, need at least 20");

    // ln P is linear in x^beta for fixed beta; profile the residual over beta.
    constexpr double kBetaLo = 0.02;
    constexpr double kBetaHi = 5.0;
    constexpr int kGrid = 120;
    std::vector<double> grid(kGrid), rss(kGrid);
    for (int k = 0; k < kGrid; ++k) {
        grid[k] = kBetaLo * std::pow(kBetaHi / kBetaLo, static_cast<double>(k) / (kGrid - 1));
        rss[k] = stretched_at(grid[k], x, lp).rss;
    }
    const auto best = static_cast<int>(std::min_element(rss.begin(), rss.end()) - rss.begin());
    if (best == 0 || best == kGrid - 1)
        throw AnalysisError("fit_stretched_exp: no interior optimum for beta in [" + std::to_string(kBetaLo) +
                            ", " + std::to_string(kBetaHi) + "]");

    auto objective = [&](double beta) { return stretched_at(beta, x, lp).rss; };
    const auto [beta, best_rss] =
        boost::math::tools::brent_find_minima(objective, grid[best - 1], grid[best + 1], 52);
    const StretchedLinear lin = stretched_at(beta, x, lp);
    if (!(lin.slope < 0.0)) throw AnalysisError("fit_stretched_exp: fitted curve does not decay");

    StretchedFit fit;
    fit.beta = beta;
    fit.x0 = std::pow(-lin.slope, -1.0 / beta);
    fit.c = lin.intercept;
    fit.residual = std::sqrt(best_rss / static_cast<double>(x.size()));
    fit.n = x.size();
    return fit;
}

double hill_estimator(std::span<const double> values, std::size_t k) {
    if (k < 2 || k >= values.size())
        throw ValidationError("hill_estimator: need 2 <= k < n");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double threshold = sorted[k];
    if (!(threshold > 0.0)) throw AnalysisError("hill_estimator: non-positive order statistic");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(sorted[i] / threshold);
    if (!(acc > 0.0)) throw AnalysisError("hill_estimator: degenerate tail");
    return static_cast<double>(k) / acc;
}

double quantile_lower(std::span<const double> values, double q) {
    if (values.empty()) throw ValidationError("quantile_lower: empty input");
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile_lower: q outside [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(idx), sorted.end());
    return sorted[idx];
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    if (x.size() < 2) throw ValidationError("pearson: need at least 2 points");
    const double mx = mean(x), my = mean(y);
    long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0L) || !(syy > 0.0L)) throw ValidationError("pearson: zero variance");
    return std::clamp(static_cast<double>(sxy / std::sqrt(sxx * syy)), -1.0, 1.0);
}

}  // namespace mfts
