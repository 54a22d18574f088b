#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfts/series.hpp"

namespace mfts {

// Empirical complementary CDF over the distinct sample values, ascending.
// p[i] = #{X > x[i]} / n (strict). The largest value is kept as a terminal
// point with p = 0; fits skip it.
struct CcdfCurve {
    std::vector<double> x;
    std::vector<double> p;
    std::size_t n_samples = 0;
};

struct TailFit {
    double gamma = 0.0;
    double stderr_ = 0.0;
    double x_min = 0.0;
    std::size_t n_tail = 0;
};

// ln P(X > x) = -(x / x0)^beta + c
struct StretchedFit {
    double beta = 0.0;
    double x0 = 0.0;
    double c = 0.0;
    double residual = 0.0;  // RMS of ln P residuals
    std::size_t n = 0;
};

// Autocorrelation with the full-sample mean and the 1/T variance, so A(0) = 1.
// Returns max_lag + 1 values, index = lag.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

CcdfCurve ccdf(std::span<const double> values);

// Log-log regression of P against x over curve points with x >= x_min, P > 0.
TailFit fit_powerlaw_tail(const CcdfCurve& curve, double x_min);

StretchedFit fit_stretched_exp(const CcdfCurve& curve);

// Hill estimator of the tail exponent from the k largest values.
double hill_estimator(std::span<const double> values, std::size_t k);

// Order statistic at floor(q * (n - 1)) of the sorted sample.
double quantile_lower(std::span<const double> values, double q);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace mfts
