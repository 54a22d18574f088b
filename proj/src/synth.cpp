#include "mfts/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mfts/error.hpp"
#include "mfts/io.hpp"
#include "mfts/random.hpp"

namespace mfts {

RegularSeries binomial_cascade(const CascadeParams& params) {
    if (params.levels < 1 || params.levels > 24)
        throw ValidationError("binomial_cascade: levels must be in 1..24");
    if (!(params.p > 0.5 && params.p < 1.0)) throw ValidationError("binomial_cascade: p must be in (0.5, 1)");
    const int levels = params.levels;
    const double p = params.p;
    const std::size_t n = std::size_t{1} << levels;
    RegularSeries out;
    out.name = "cascade_n" + std::to_string(levels) + "_p" + format_double(p);
    out.kind = SeriesKind::generic;
    out.values.resize(n);
    // Only levels + 1 distinct values exist.
    std::vector<double> by_bits(static_cast<std::size_t>(levels) + 1);
    for (int b = 0; b <= levels; ++b) by_bits[b] = std::pow(p, levels - b) * std::pow(1.0 - p, b);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = by_bits[static_cast<std::size_t>(std::popcount(k))];
    return out;
}

double analytic_cascade_hq(double p, double q) {
    if (!(p > 0.5 && p < 1.0)) throw ValidationError("analytic_cascade_hq: p must be in (0.5, 1)");
    const double a = std::log(p);
    const double b = std::log1p(-p);
    const double base = -(a + b) / (2.0 * std::numbers::ln2);
    if (q == 0.0) return base;
    const double z = std::fabs(q * (a - b) / 2.0);
    const double lncosh = z < 1e-4 ? z * z / 2.0 - z * z * z * z / 12.0
                                   : z + std::log1p(std::exp(-2.0 * z)) - std::numbers::ln2;
    return base - lncosh / (q * std::numbers::ln2);
}

double fgn_autocovariance(double hurst, std::size_t k) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    if (k == 0) return 1.0;
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

namespace {

// Eigenvalues of the circulant embedding of the first `half` lags, or an
// empty vector if the embedding is not non-negative definite.
std::vector<double> circulant_eigenvalues(double hurst, std::size_t half) {
    const std::size_t m = 2 * half;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= half; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = half + 1; k < m; ++k) row[k] = row[m - k];
    const auto spectrum = detail::fft_c2c_forward(row);

    std::vector<double> eig(m);
    double largest = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        eig[k] = spectrum[k].real();
        largest = std::max(largest, std::fabs(eig[k]));
    }
    for (double& e : eig) {
        if (e < -1e-10 * largest) return {};
        e = std::max(e, 0.0);
    }
    return eig;
}

}  // namespace

RegularSeries fgn(double hurst, std::size_t length, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ValidationError("fgn: H must be in (0, 1)");
    if (length < 1024 || !std::has_single_bit(length))
        throw ValidationError("fgn: length must be a power of two >= 1024");

    std::size_t half = length;
    auto eig = circulant_eigenvalues(hurst, half);
    if (eig.empty()) {
        half *= 2;
        eig = circulant_eigenvalues(hurst, half);
    }
    if (eig.empty()) throw AnalysisError("fgn: circulant embedding is not non-negative definite");

    const std::size_t m = eig.size();
    Rng rng(seed);
    std::vector<std::complex<double>> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double scale = std::sqrt(eig[k] / static_cast<double>(m));
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = {scale * re, scale * im};
    }
    const auto y = detail::fft_c2c_forward(w);

    RegularSeries out;
    out.name = "fgn_H" + format_double(hurst) + "_seed" + std::to_string(seed);
    out.kind = SeriesKind::generic;
    out.values.resize(length);
    for (std::size_t i = 0; i < length; ++i) out.values[i] = y[i].real();
    return out;
}

}  // namespace mfts
