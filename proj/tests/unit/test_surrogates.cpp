#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "mfts/detrend.hpp"
#include "mfts/error.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/series.hpp"
#include "mfts/stats.hpp"
#include "mfts/surrogates.hpp"
#include "mfts/synth.hpp"
#include "oracles.hpp"

using namespace mfts;

namespace {

RegularSeries series_of(std::vector<double> v) {
    RegularSeries s;
    s.name = "x";
    s.values = std::move(v);
    return s;
}

Spectrum mfdfa_spectrum(const RegularSeries& x) {
    const auto surface = fluctuation_zz(x, QGrid::standard(), ScaleGrid::standard(x.size()));
    return singularity_spectrum(generalized_hurst(surface));
}

double hurst_of(const RegularSeries& x) {
    const auto surface = fluctuation_zz(x, QGrid({-2.0, 0.0, 2.0}), ScaleGrid::standard(x.size()));
    return generalized_hurst(surface).hurst();
}

}  // namespace

TEST_CASE("surrogate kinds parse") {
    CHECK(parse_surrogate_kind("shuffle") == SurrogateKind::shuffle);
    CHECK(parse_surrogate_kind("fourier") == SurrogateKind::fourier);
    CHECK(to_string(SurrogateKind::fourier) == "fourier");
    CHECK_THROWS_AS(parse_surrogate_kind("iaaft"), ValidationError);
}

TEST_CASE("shuffle is a permutation") {
    const auto x = series_of(oracle::pareto(2.0, 10001, 3));
    const auto y = shuffle_surrogate(x, {SurrogateKind::shuffle, 9, 0});
    CHECK(y.values != x.values);
    auto a = x.values, b = y.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(mean(y.values) == doctest::Approx(mean(x.values)).epsilon(1e-14));
    CHECK(sample_variance(y.values) == doctest::Approx(sample_variance(x.values)).epsilon(1e-13));
    CHECK(y.start_ms == x.start_ms);
    CHECK(y.dt_ms == x.dt_ms);
}

TEST_CASE("surrogates are reproducible per seed and replicate") {
    const auto x = series_of(oracle::gaussian(4096, 1));
    for (auto kind : {SurrogateKind::shuffle, SurrogateKind::fourier}) {
        const auto a = make_surrogate(x, {kind, 5, 0});
        const auto b = make_surrogate(x, {kind, 5, 0});
        const auto c = make_surrogate(x, {kind, 5, 1});
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
    }
}

TEST_CASE("shuffled series have h(2) = 0.5") {
    const auto cascade = binomial_cascade({16, 0.75});
    const auto persistent = fgn(0.7, 1 << 16, 3);
    for (const RegularSeries* x : {&cascade, &persistent})
        for (std::uint64_t r = 0; r < 3; ++r)
            CHECK(std::fabs(hurst_of(shuffle_surrogate(*x, {SurrogateKind::shuffle, 11, r})) - 0.5) < 0.05);
}

TEST_CASE("shuffling narrows the cascade spectrum but keeps the broad-distribution part") {
    // Shuffling removes the multiplicative correlations; the multifractality
    // carried by the very broad value distribution survives.
    const auto cascade = binomial_cascade({16, 0.75});
    const Spectrum original = mfdfa_spectrum(cascade);
    const Spectrum shuffled = mfdfa_spectrum(shuffle_surrogate(cascade, {SurrogateKind::shuffle, 1, 0}));
    CHECK(original.width > 0.6);
    CHECK(shuffled.width < original.width);
}

TEST_CASE("Fourier surrogate keeps the power spectrum and the mean") {
    for (std::size_t n : {64u, 65u, 1000u}) {
        const auto x = series_of(oracle::ar1(0.7, n, n));
        const auto y = fourier_surrogate(x, {SurrogateKind::fourier, 3, 0});
        REQUIRE(y.size() == n);
        const auto fx = oracle::naive_dft(x.values), fy = oracle::naive_dft(y.values);
        double peak = 0.0;
        for (const auto& c : fx) peak = std::max(peak, std::norm(c));
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::fabs(std::norm(fy[k]) - std::norm(fx[k])) <= 1e-9 * peak);
        CHECK(mean(y.values) == doctest::Approx(mean(x.values)).epsilon(1e-10).scale(1.0));
        CHECK(y.values != x.values);
    }
    CHECK_THROWS_AS(fourier_surrogate(series_of({1, 2, 3}), {}), ValidationError);
}

TEST_CASE("Fourier surrogates of AR(1) keep the ACF and are monofractal, 20 seeds") {
    const std::size_t T = 1 << 16;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = series_of(oracle::ar1(0.6, T, 900 + seed));
        const auto y = fourier_surrogate(x, {SurrogateKind::fourier, seed, 0});
        const auto ax = acf(x.values, 20), ay = acf(y.values, 20);
        for (std::size_t lag = 1; lag <= 20; ++lag) CHECK(std::fabs(ax[lag] - ay[lag]) < 3.0 / std::sqrt(double(T)));
        CHECK(mfdfa_spectrum(y).width < 0.15);
    }
}

TEST_CASE("Fourier surrogate of white noise is white") {
    const std::size_t T = 1 << 16;
    const auto y = fourier_surrogate(series_of(oracle::gaussian(T, 4)), {SurrogateKind::fourier, 8, 2});
    const auto a = acf(y.values, 30);
    // 30 simultaneous lags: a 4-sigma band keeps the family-wise false alarm rate near 0.2%.
    for (std::size_t lag = 1; lag <= 30; ++lag) CHECK(std::fabs(a[lag]) < 4.0 / std::sqrt(double(T)));
}

TEST_CASE("Fourier surrogate of fGn(0.7) preserves h(2)") {
    const auto x = fgn(0.7, 1 << 16, 21);
    const auto y = fourier_surrogate(x, {SurrogateKind::fourier, 2, 0});
    CHECK(std::fabs(hurst_of(y) - 0.7) < 0.05);
    CHECK(mfdfa_spectrum(y).width < 0.15);
}

TEST_CASE("average_spectra") {
    Spectrum a, b;
    a.q = b.q = {-1, 0, 1, 2, 3};
    a.alpha = {1.0, 0.8, 0.6, 0.5, 0.4};
    b.alpha = {1.2, 1.0, 0.8, 0.7, 0.6};
    a.f = {0.5, 1.0, 0.9, 0.8, 0.7};
    b.f = {0.7, 1.0, 0.7, 0.6, 0.5};
    const Spectrum m = average_spectra({a, b});
    CHECK(m.alpha[0] == doctest::Approx(1.1));
    CHECK(m.f[2] == doctest::Approx(0.8));
    CHECK(m.width == doctest::Approx(0.6));
    b.q = {-1, 0, 1, 2, 4};
    CHECK_THROWS_AS(average_spectra({a, b}), ValidationError);
    CHECK_THROWS_AS(average_spectra({}), ValidationError);
}
