#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mfts/series.hpp"

namespace mfts {

// Strictly increasing list of moment orders q.
struct QGrid {
    std::vector<double> values;

    QGrid() = default;
    explicit QGrid(std::vector<double> q);

    // lo, lo + step, ..., hi; values snapped to 1e-10 so that 0 and 2 are exact.
    static QGrid range(double lo, double hi, double step);
    // "lo:hi:step" or a comma list "2,4".
    static QGrid parse(std::string_view text);
    static QGrid standard() { return range(-4.0, 4.0, 0.2); }

    std::size_t size() const { return values.size(); }
    // Index of q (exact match within 1e-9), or npos.
    std::size_t index_of(double q) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Strictly increasing segment lengths.
struct ScaleGrid {
    std::vector<int> values;

    ScaleGrid() = default;
    explicit ScaleGrid(std::vector<int> s);

    // 40 log-spaced scales from 16 to T/4.
    static ScaleGrid standard(std::size_t length);
    // "min:max:count"; max may be the literal "T/4".
    static ScaleGrid parse(std::string_view text, std::size_t length);

    std::size_t size() const { return values.size(); }
};

// F(q, s) on a q-grid x scale-grid, row-major in q.
struct FluctuationSurface {
    QGrid q;
    ScaleGrid scales;
    std::vector<double> F;
    bool is_signed = false;
    // Per scale: 2*M_s segments, how many had numerically zero (co)variance
    // and were left out of the q <= 0 averages, and whether that exceeded 1%.
    std::vector<std::size_t> segments;
    std::vector<std::size_t> dropped;
    std::vector<bool> unusable;

    double at(std::size_t qi, std::size_t si) const { return F[qi * scales.size() + si]; }
    double& at(std::size_t qi, std::size_t si) { return F[qi * scales.size() + si]; }
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct DetrendOptions {
    int order = 2;    // polynomial order m, 1..4
    int workers = 1;  // threads over scales; results do not depend on it
};

// Running sum of the mean-subtracted series.
std::vector<double> profile(std::span<const double> x);

// M_s forward segments from the start followed by M_s segments anchored at the end.
std::vector<IndexRange> segment_bounds(std::size_t length, std::size_t s);

// Least-squares polynomial detrending of fixed-length segments.
//
// The basis is orthonormalized once per (s, m) on in-segment coordinates
// mapped to [-1, 1], so the residual is y - Q Q^T y and conditioning does
// not degrade with s.
class PolynomialDetrender {
public:
    PolynomialDetrender(std::size_t s, int order);

    std::size_t length() const { return s_; }
    int order() const { return order_; }

    void residuals(std::span<const double> y, std::span<double> out) const;
    std::vector<double> residuals(std::span<const double> y) const;
    std::span<const double> basis_vector(int k) const;

private:
    std::size_t s_;
    int order_;
    std::vector<double> basis_;  // (order + 1) x s, row-major
};

std::vector<double> detrend_segment(std::span<const double> profile, IndexRange range, int order);

// (1/s) sum rx * ry
double segment_cov(std::span<const double> rx, std::span<const double> ry);

FluctuationSurface fluctuation_zz(std::span<const double> x, const QGrid& q, const ScaleGrid& scales,
                                  const DetrendOptions& opts = {});
FluctuationSurface fluctuation_xy(std::span<const double> x, std::span<const double> y, const QGrid& q,
                                  const ScaleGrid& scales, const DetrendOptions& opts = {});

FluctuationSurface fluctuation_zz(const RegularSeries& x, const QGrid& q, const ScaleGrid& scales,
                                  const DetrendOptions& opts = {});
// Requires aligned series (same start, dt, length).
FluctuationSurface fluctuation_xy(const RegularSeries& x, const RegularSeries& y, const QGrid& q,
                                  const ScaleGrid& scales, const DetrendOptions& opts = {});

}  // namespace mfts
