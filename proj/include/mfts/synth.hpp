#pragma once

#include <cstddef>
#include <cstdint>

#include "mfts/series.hpp"

namespace mfts {

struct CascadeParams {
    int levels = 16;  // series length 2^levels, 1..24 (analysis needs >= 8)
    double p = 0.75;  // 0.5 < p < 1
};

// Deterministic binomial measure: value k is p^(n - b(k)) (1 - p)^b(k),
// b(k) = number of set bits of k.
RegularSeries binomial_cascade(const CascadeParams& params);

// Generalized Hurst exponent of the binomial measure,
// h(q) = 1/q - log2(p^q + (1-p)^q) / q, evaluated in the cosh form
// h(q) = -log2(p(1-p)) / 2 - ln cosh(q ln(p/(1-p)) / 2) / (q ln 2),
// which is exact and has the q -> 0 limit built in.
double analytic_cascade_hq(double p, double q);

// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

// Fractional Gaussian noise by circulant embedding (Davies-Harte). length
// must be a power of two >= 1024. The embedding is retried once at twice the
// size if it is not non-negative definite.
RegularSeries fgn(double hurst, std::size_t length, std::uint64_t seed);

}  // namespace mfts
