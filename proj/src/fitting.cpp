#include "mfts/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfts/error.hpp"

namespace mfts {

LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("linear_fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw AnalysisError("linear_fit: need at least 3 points, got " + std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw AnalysisError("linear_fit: x values are all equal");

    LinFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - rss / syy, 0.0, 1.0) : 1.0;
    return fit;
}

LinFit loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi) {
    if (x.size() != y.size()) throw ValidationError("loglog_fit: x and y differ in length");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw AnalysisError("loglog_fit: non-positive value at index " + std::to_string(i));
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 3)
        throw AnalysisError("loglog_fit: need at least 3 points in range, got " + std::to_string(lx.size()));
    return linear_fit(lx, ly);
}

std::vector<int> log_scale_grid(int s_min, int s_max, int count) {
    if (s_min < 4 || s_max <= s_min || count < 2)
        throw ValidationError("log_scale_grid: need s_min >= 4, s_max > s_min, count >= 2 (got " +
                              std::to_string(s_min) + ", " + std::to_string(s_max) + ", " +
                              std::to_string(count) + ")");
    const double a = std::log(static_cast<double>(s_min));
    const double b = std::log(static_cast<double>(s_max));
    std::vector<int> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double t = (k == count - 1) ? b : a + (b - a) * k / (count - 1);
        const int s = static_cast<int>(std::lround(std::exp(t)));
        if (grid.empty() || s > grid.back()) grid.push_back(s);
    }
    return grid;
}

}  // namespace mfts
