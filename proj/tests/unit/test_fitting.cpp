#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mfts/error.hpp"
#include "mfts/fitting.hpp"

using namespace mfts;

TEST_CASE("loglog_fit recovers an exact power law") {
    std::vector<double> x, y;
    for (int i = 1; i <= 10; ++i) {
        x.push_back(i * 3.0);
        y.push_back(3.0 * std::pow(i * 3.0, 2.0));
    }
    const LinFit f = loglog_fit(x, y, 0.0, 1e9);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.slope_stderr < 1e-10);
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(f.n == 10);
    CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("loglog_fit of a constant has zero slope") {
    const std::vector<double> x{1, 2, 4, 8, 16}, y(5, 7.0);
    const LinFit f = loglog_fit(x, y, 1, 16);
    CHECK(std::fabs(f.slope) < 1e-14);
    CHECK(f.r2 >= 0.0);
    CHECK(f.r2 <= 1.0);
}

TEST_CASE("loglog_fit with 1% multiplicative noise, 100 seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> x, y;
        for (int i = 0; i < 40; ++i) {
            const double xi = std::exp(0.1 * i);
            x.push_back(xi);
            y.push_back(std::pow(xi, 1.5) * std::exp(noise(gen)));
        }
        const LinFit f = loglog_fit(x, y, 0.0, 1e9);
        CHECK(std::fabs(f.slope - 1.5) < 0.02);
    }
}

TEST_CASE("loglog_fit is invariant to scaling y") {
    const std::vector<double> x{2, 3, 5, 7, 11, 13}, y{1.3, 2.9, 4.1, 9.5, 12.0, 20.2};
    std::vector<double> y2;
    for (double v : y) y2.push_back(v * 42.0);
    const LinFit a = loglog_fit(x, y, 0, 100), b = loglog_fit(x, y2, 0, 100);
    CHECK(b.slope == doctest::Approx(a.slope).epsilon(1e-12));
    CHECK(b.intercept - a.intercept == doctest::Approx(std::log(42.0)).epsilon(1e-12));
    CHECK(b.slope_stderr == doctest::Approx(a.slope_stderr).epsilon(1e-9));
}

TEST_CASE("loglog_fit restricts to the range and reports errors") {
    const std::vector<double> x{1, 2, 4, 8, 16, 32}, y{1, 2, 4, 8, 16, 32};
    CHECK(loglog_fit(x, y, 2, 16).n == 4);
    CHECK_THROWS_AS(loglog_fit(x, y, 2, 4), AnalysisError);
    const std::vector<double> bad{1, 2, -4, 8, 16, 32};
    CHECK_THROWS_AS(loglog_fit(x, bad, 0, 100), AnalysisError);
}

TEST_CASE("log_scale_grid") {
    // exp(linspace(ln 16, ln 16384, 4)) = 16, 161.27, 1625.5, 16384
    CHECK(log_scale_grid(16, 16384, 4) == std::vector<int>{16, 161, 1625, 16384});
    CHECK(log_scale_grid(10, 11, 5) == std::vector<int>{10, 11});
    const auto dense = log_scale_grid(4, 8, 40);
    CHECK(dense == std::vector<int>{4, 5, 6, 7, 8});
    CHECK(log_scale_grid(16, 16384, 40) == log_scale_grid(16, 16384, 40));
    const auto g = log_scale_grid(16, 16384, 40);
    CHECK(g.size() == 40);
    CHECK(g.front() == 16);
    CHECK(g.back() == 16384);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(log_scale_grid(3, 100, 5), ValidationError);
    CHECK_THROWS_AS(log_scale_grid(16, 16, 5), ValidationError);
}
