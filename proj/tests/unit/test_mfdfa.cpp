#include <cmath>

#include "doctest.h"
#include "mfts/detrend.hpp"
#include "mfts/error.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/synth.hpp"
#include "oracles.hpp"

using namespace mfts;

namespace {

FluctuationSurface power_surface(const QGrid& q, const ScaleGrid& s, double exponent) {
    FluctuationSurface f;
    f.q = q;
    f.scales = s;
    for (std::size_t qi = 0; qi < q.size(); ++qi)
        for (int sv : s.values) f.F.push_back(2.5 * std::pow(sv, exponent));
    f.segments.assign(s.size(), 100);
    f.dropped.assign(s.size(), 0);
    f.unusable.assign(s.size(), false);
    return f;
}

// alpha(q) of the binomial measure: d/dq [q h(q)].
double analytic_alpha(double p, double q) {
    const double a = std::pow(p, q), b = std::pow(1 - p, q);
    return -(a * std::log(p) + b * std::log(1 - p)) / ((a + b) * std::log(2.0));
}

}  // namespace

TEST_CASE("default_fit_range is the central half in log space") {
    const FitRange r = default_fit_range(ScaleGrid::standard(1 << 16));
    CHECK(r.lo == doctest::Approx(16 * std::pow(1024.0, 0.25)));
    CHECK(r.hi == doctest::Approx(16 * std::pow(1024.0, 0.75)));
}

TEST_CASE("generalized_hurst on an exact power-law surface") {
    const QGrid q = QGrid::standard();
    const ScaleGrid s = ScaleGrid::standard(1 << 14);
    const HurstCurve h = generalized_hurst(power_surface(q, s, 0.7), {16, 4096});
    REQUIRE(h.h.size() == q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(h.h[i] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(h.stderr_[i] < 1e-10);
    }
    CHECK(h.hurst() == doctest::Approx(0.7));
    CHECK(h.min_r2 == doctest::Approx(1.0));
}

TEST_CASE("generalized_hurst errors and exclusions") {
    const QGrid q = QGrid::standard();
    const ScaleGrid s({16, 20, 25, 32, 40, 50, 64});
    auto surface = power_surface(q, s, 0.5);
    CHECK_THROWS_AS(generalized_hurst(surface, {16, 25}), AnalysisError);

    surface.unusable[2] = true;
    CHECK_THROWS_AS(generalized_hurst(surface, {16, 40}), AnalysisError);
    const HurstCurve h = generalized_hurst(surface, {16, 64});
    CHECK(h.n_scales == 6);
    CHECK(h.excluded_scales == std::vector<int>{25});

    auto negative = power_surface(q, s, 0.5);
    negative.F[3] = -1.0;
    CHECK_THROWS_AS(generalized_hurst(negative, {16, 64}), AnalysisError);

    auto signed_surface = power_surface(q, s, 0.5);
    signed_surface.is_signed = true;
    CHECK_THROWS_AS(generalized_hurst(signed_surface, {16, 64}), ValidationError);

    CHECK_THROWS_AS(generalized_hurst(power_surface(QGrid({1.0, 3.0}), s, 0.5), {16, 64}), ValidationError);
}

TEST_CASE("fGn(0.7) gives h(2) = 0.7 +- 0.05") {
    const auto x = fgn(0.7, 1 << 16, 42);
    const auto surface = fluctuation_zz(x, QGrid::standard(), ScaleGrid::standard(x.size()));
    const HurstCurve h = generalized_hurst(surface);
    CHECK(std::fabs(h.hurst() - 0.7) < 0.05);
    for (std::size_t i = 1; i < h.h.size(); ++i) CHECK(h.h[i] <= h.h[i - 1] + 0.01);
}

TEST_CASE("cascade h(q), spectrum and asymmetry against the closed form") {
    const auto c = binomial_cascade({16, 0.75});
    const QGrid q = QGrid::standard();
    const auto surface = fluctuation_zz(c, q, ScaleGrid::standard(c.size()));
    const HurstCurve h = generalized_hurst(surface, {16, 4096});
    CHECK(std::fabs(h.hurst() - 0.8390359526) < 0.05);
    for (std::size_t i = 1; i < h.h.size(); ++i) CHECK(h.h[i] <= h.h[i - 1] + 0.01);

    const Spectrum sp = singularity_spectrum(h);
    REQUIRE(sp.alpha.size() == q.size());
    const std::size_t zero = q.index_of(0.0);
    CHECK(sp.f[zero] == doctest::Approx(1.0).epsilon(0.02));
    for (double f : sp.f) CHECK(f <= 1.05);
    // alpha(-4) = 1.98067 and alpha(4) = 0.43437 for p = 0.75.
    CHECK(analytic_alpha(0.75, -4) == doctest::Approx(1.98067).epsilon(1e-5));
    CHECK(analytic_alpha(0.75, 4) == doctest::Approx(0.43437).epsilon(1e-5));
    CHECK(std::fabs(sp.alpha.front() - analytic_alpha(0.75, -4)) < 0.1);
    CHECK(std::fabs(sp.alpha.back() - analytic_alpha(0.75, 4)) < 0.1);
    CHECK(sp.width > 0.6);
    CHECK(std::fabs(sp.width - (analytic_alpha(0.75, -4) - analytic_alpha(0.75, 4))) < 0.2);
}

TEST_CASE("monofractal h(q) collapses the spectrum") {
    HurstCurve h;
    h.q = QGrid::standard().values;
    h.h.assign(h.q.size(), 0.6);
    h.stderr_.assign(h.q.size(), 0.0);
    const Spectrum sp = singularity_spectrum(h);
    for (std::size_t i = 0; i < sp.alpha.size(); ++i) {
        CHECK(sp.alpha[i] == doctest::Approx(0.6));
        CHECK(sp.f[i] == doctest::Approx(1.0));
    }
    CHECK(sp.width == doctest::Approx(0.0));
    CHECK(std::isnan(sp.asymmetry));
    CHECK_THROWS_AS(spectrum_metrics(sp), AnalysisError);
}

TEST_CASE("singularity_spectrum needs five q values") {
    HurstCurve h;
    h.q = {1, 2, 3, 4};
    h.h = {0.6, 0.5, 0.45, 0.42};
    h.stderr_.assign(4, 0.0);
    CHECK_THROWS_AS(singularity_spectrum(h), ValidationError);
}

TEST_CASE("spectrum_metrics") {
    Spectrum sym;
    for (int i = -5; i <= 5; ++i) {
        sym.alpha.push_back(0.5 + 0.1 * i);
        sym.f.push_back(1.0 - 0.01 * i * i);
    }
    const SpectrumMetrics m = spectrum_metrics(sym);
    CHECK(m.width == doctest::Approx(1.0));
    CHECK(std::fabs(m.asymmetry) < 1e-12);

    // q in [0, 4]: alpha decreases from the apex, only the left arm exists.
    HurstCurve h;
    h.q = QGrid::range(0.0, 4.0, 0.2).values;
    for (double qv : h.q) h.h.push_back(analytic_cascade_hq(0.75, qv));
    h.stderr_.assign(h.q.size(), 0.0);
    CHECK(spectrum_metrics(singularity_spectrum(h)).asymmetry == doctest::Approx(1.0));

    Spectrum tiny;
    tiny.alpha = {0.5, 0.6};
    tiny.f = {1.0, 0.9};
    CHECK_THROWS_AS(spectrum_metrics(tiny), ValidationError);
}

TEST_CASE("white noise spectra are narrow, 20 seeds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = oracle::gaussian(1 << 16, 500 + seed);
        const auto surface = fluctuation_zz(x, QGrid::standard(), ScaleGrid::standard(x.size()));
        const Spectrum sp = singularity_spectrum(generalized_hurst(surface));
        CHECK(sp.width < 0.15);
        CHECK(sp.f[20] == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("affine changes of the input leave h(q) and the spectrum unchanged") {
    const auto x = oracle::ar1(0.5, 1 << 14, 77);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v - 12.0);
    const QGrid q = QGrid::standard();
    const ScaleGrid s = ScaleGrid::standard(x.size());
    const HurstCurve hx = generalized_hurst(fluctuation_zz(x, q, s));
    const HurstCurve hy = generalized_hurst(fluctuation_zz(y, q, s));
    const Spectrum sx = singularity_spectrum(hx), sy = singularity_spectrum(hy);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(std::fabs(hx.h[i] - hy.h[i]) < 1e-9);
        CHECK(std::fabs(sx.alpha[i] - sy.alpha[i]) < 1e-9);
        CHECK(std::fabs(sx.f[i] - sy.f[i]) < 1e-9);
    }
}
