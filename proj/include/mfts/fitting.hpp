#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfts {

struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x. Requires n >= 3 and a
// non-degenerate x. r2 is 1 when y has no variance and the fit is exact.
LinFit linear_fit(std::span<const double> x, std::span<const double> y);

// OLS on (ln x, ln y) over points with lo <= x <= hi.
LinFit loglog_fit(std::span<const double> x, std::span<const double> y, double lo, double hi);

// round(exp(linspace(ln s_min, ln s_max, count))), deduplicated.
std::vector<int> log_scale_grid(int s_min, int s_max, int count);

}  // namespace mfts
