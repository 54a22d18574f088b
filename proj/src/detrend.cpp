#include "mfts/detrend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mfts/error.hpp"
#include "mfts/fitting.hpp"
#include "mfts/io.hpp"
#include "mfts/parallel.hpp"

namespace mfts {

// ---------------------------------------------------------------------------
// Grids

QGrid::QGrid(std::vector<double> q) : values(std::move(q)) {
    if (values.empty()) throw ValidationError("q grid is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ValidationError("q grid contains a non-finite value");
        if (i > 0 && !(values[i] > values[i - 1])) throw ValidationError("q grid must be strictly increasing");
    }
}

QGrid QGrid::range(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("q range needs lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    std::vector<double> q(n);
    for (std::size_t k = 0; k < n; ++k) q[k] = std::round((lo + static_cast<double>(k) * step) * 1e10) / 1e10;
    return QGrid(std::move(q));
}

QGrid QGrid::parse(std::string_view text) {
    auto field = [&](std::string_view f) {
        double v = 0.0;
        if (!parse_double(f, v)) throw ValidationError("cannot parse q value '" + std::string(f) + "'");
        return v;
    };
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) throw ValidationError("q range must be lo:hi:step");
        return range(field(text.substr(0, c1)), field(text.substr(c1 + 1, c2 - c1 - 1)), field(text.substr(c2 + 1)));
    }
    std::vector<double> q;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        q.push_back(field(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return QGrid(std::move(q));
}

std::size_t QGrid::index_of(double q) const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::fabs(values[i] - q) < 1e-9) return i;
    return npos;
}

ScaleGrid::ScaleGrid(std::vector<int> s) : values(std::move(s)) {
    if (values.empty()) throw ValidationError("scale grid is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 2) throw ValidationError("scales must be >= 2");
        if (i > 0 && values[i] <= values[i - 1]) throw ValidationError("scale grid must be strictly increasing");
    }
}

ScaleGrid ScaleGrid::standard(std::size_t length) {
    const auto s_max = static_cast<int>(length / 4);
    if (s_max <= 16)
        throw ValidationError("series of length " + std::to_string(length) + " is too short for the default scales");
    return ScaleGrid(log_scale_grid(16, s_max, 40));
}

ScaleGrid ScaleGrid::parse(std::string_view text, std::size_t length) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == text.npos ? text.npos : text.find(':', c1 + 1);
    if (c2 == text.npos) throw ValidationError("scale grid must be min:max:count");
    auto integer = [&](std::string_view f) {
        if (f == "T/4") return static_cast<long long>(length / 4);
        long long v = 0;
        if (!parse_int64(f, v)) throw ValidationError("cannot parse scale value '" + std::string(f) + "'");
        return v;
    };
    return ScaleGrid(log_scale_grid(static_cast<int>(integer(text.substr(0, c1))),
                                    static_cast<int>(integer(text.substr(c1 + 1, c2 - c1 - 1))),
                                    static_cast<int>(integer(text.substr(c2 + 1)))));
}

// ---------------------------------------------------------------------------
// Profiles, segments, detrending

std::vector<double> profile(std::span<const double> x) {
    const std::size_t n = x.size();
    long double m = 0.0L;
    for (double v : x) m += v;
    if (n > 0) m /= static_cast<long double>(n);
    std::vector<double> out(n);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        acc += static_cast<long double>(x[i]) - m;
        out[i] = static_cast<double>(acc);
    }
    return out;
}

std::vector<IndexRange> segment_bounds(std::size_t length, std::size_t s) {
    if (s == 0 || s > length)
        throw ValidationError("segment_bounds: scale " + std::to_string(s) + " outside [1, " + std::to_string(length) +
                              "]");
    const std::size_t m = length / s;
    const std::size_t offset = length - m * s;
    std::vector<IndexRange> out;
    out.reserve(2 * m);
    for (std::size_t v = 0; v < m; ++v) out.push_back({v * s, (v + 1) * s});
    for (std::size_t v = 0; v < m; ++v) out.push_back({offset + v * s, offset + (v + 1) * s});
    return out;
}

PolynomialDetrender::PolynomialDetrender(std::size_t s, int order) : s_(s), order_(order) {
    if (order < 0) throw ValidationError("polynomial order must be >= 0");
    const auto k = static_cast<std::size_t>(order) + 1;
    if (s < k + 1)
        throw ValidationError("segment of length " + std::to_string(s) + " is too short for order " +
                              std::to_string(order) + " detrending");

    // Legendre polynomials on u in [-1, 1], then two rounds of modified
    // Gram-Schmidt over the discrete points.
    basis_.assign(k * s, 0.0);
    const double half = static_cast<double>(s - 1) / 2.0;
    for (std::size_t i = 0; i < s; ++i) {
        const double u = (static_cast<double>(i) - half) / half;
        double p_prev = 1.0, p = u;
        basis_[i] = 1.0;
        if (k > 1) basis_[s + i] = u;
        for (std::size_t d = 2; d < k; ++d) {
            const double next = ((2.0 * d - 1.0) * u * p - (d - 1.0) * p_prev) / static_cast<double>(d);
            p_prev = p;
            p = next;
            basis_[d * s + i] = p;
        }
    }
    for (std::size_t d = 0; d < k; ++d) {
        double* v = &basis_[d * s];
        const double initial = std::sqrt(std::inner_product(v, v + s, v, 0.0));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t e = 0; e < d; ++e) {
                const double* w = &basis_[e * s];
                const double c = std::inner_product(v, v + s, w, 0.0);
                for (std::size_t i = 0; i < s; ++i) v[i] -= c * w[i];
            }
        }
        const double norm = std::sqrt(std::inner_product(v, v + s, v, 0.0));
        if (!(norm > 1e-8 * initial))
            throw AnalysisError("ill-conditioned polynomial fit: order " + std::to_string(order) + ", segment length " +
                                std::to_string(s));
        for (std::size_t i = 0; i < s; ++i) v[i] /= norm;
    }
}

void PolynomialDetrender::residuals(std::span<const double> y, std::span<double> out) const {
    if (y.size() != s_ || out.size() != s_) throw ValidationError("detrender: segment length mismatch");
    std::copy(y.begin(), y.end(), out.begin());
    const auto k = static_cast<std::size_t>(order_) + 1;
    for (std::size_t d = 0; d < k; ++d) {
        const double* w = &basis_[d * s_];
        double c = 0.0;
        for (std::size_t i = 0; i < s_; ++i) c += w[i] * out[i];
        for (std::size_t i = 0; i < s_; ++i) out[i] -= c * w[i];
    }
}

std::vector<double> PolynomialDetrender::residuals(std::span<const double> y) const {
    std::vector<double> out(s_);
    residuals(y, out);
    return out;
}

std::span<const double> PolynomialDetrender::basis_vector(int k) const {
    return {basis_.data() + static_cast<std::size_t>(k) * s_, s_};
}

std::vector<double> detrend_segment(std::span<const double> prof, IndexRange range, int order) {
    if (range.end > prof.size() || range.begin >= range.end)
        throw ValidationError("detrend_segment: range outside the profile");
    if (range.size() < static_cast<std::size_t>(order) + 2)
        throw ValidationError("detrend_segment: need s >= m + 2");
    PolynomialDetrender det(range.size(), order);
    return det.residuals(prof.subspan(range.begin, range.size()));
}

double segment_cov(std::span<const double> rx, std::span<const double> ry) {
    if (rx.size() != ry.size() || rx.empty())
        throw ValidationError("segment_cov: length mismatch (" + std::to_string(rx.size()) + " vs " +
                              std::to_string(ry.size()) + ")");
    double acc = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) acc += rx[i] * ry[i];
    return acc / static_cast<double>(rx.size());
}

// ---------------------------------------------------------------------------
// Fluctuation functions

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void check_inputs(std::size_t length, const ScaleGrid& scales, const DetrendOptions& opts) {
    if (opts.order < 1 || opts.order > 4) throw ValidationError("polynomial order m must be in 1..4");
    if (length < 2) throw ValidationError("series needs at least 2 values");
    const int min_scale = 2 * (opts.order + 1);
    if (scales.values.front() < min_scale)
        throw ValidationError("smallest scale " + std::to_string(scales.values.front()) + " is below 2(m+1) = " +
                              std::to_string(min_scale));
    if (static_cast<std::size_t>(scales.values.back()) > length)
        throw ValidationError("largest scale " + std::to_string(scales.values.back()) + " exceeds series length " +
                              std::to_string(length));
}

// Segment (co)variances for every scale. When py is empty the variance of px
// is computed.
std::vector<std::vector<double>> segment_covariances(std::span<const double> px, std::span<const double> py,
                                                     const ScaleGrid& scales, const DetrendOptions& opts) {
    const bool self = py.empty();
    std::vector<std::vector<double>> out(scales.size());
    parallel_for(scales.size(), opts.workers, [&](std::size_t si) {
        const auto s = static_cast<std::size_t>(scales.values[si]);
        const PolynomialDetrender det(s, opts.order);
        const auto bounds = segment_bounds(px.size(), s);
        std::vector<double> rx(s), ry(s);
        auto& f2 = out[si];
        f2.resize(bounds.size());
        for (std::size_t v = 0; v < bounds.size(); ++v) {
            det.residuals(px.subspan(bounds[v].begin, s), rx);
            if (self) {
                f2[v] = segment_cov(rx, rx);
            } else {
                det.residuals(py.subspan(bounds[v].begin, s), ry);
                f2[v] = segment_cov(rx, ry);
            }
        }
    });
    return out;
}

// sign(f2) |f2|^(q/2) averaged over segments, then sign-preserving 1/q power.
// Segments at or below `zero_floor` are left out for q <= 0.
FluctuationSurface aggregate_surface(const std::vector<std::vector<double>>& f2_by_scale, const QGrid& q,
                                     const ScaleGrid& scales, double zero_floor, bool is_signed) {
    FluctuationSurface surf;
    surf.q = q;
    surf.scales = scales;
    surf.is_signed = is_signed;
    surf.F.assign(q.size() * scales.size(), 0.0);
    surf.segments.resize(scales.size());
    surf.dropped.resize(scales.size());
    surf.unusable.resize(scales.size());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t si = 0; si < scales.size(); ++si) {
        const auto& f2 = f2_by_scale[si];
        std::size_t zeros = 0;
        for (double v : f2)
            if (std::fabs(v) <= zero_floor) ++zeros;
        surf.segments[si] = f2.size();
        surf.dropped[si] = zeros;
        surf.unusable[si] = zeros * 100 > f2.size();

        for (std::size_t qi = 0; qi < q.size(); ++qi) {
            const double qv = q.values[qi];
            double value = nan;
            if (qv == 0.0) {
                double log_sum = 0.0;
                std::size_t used = 0, pos = 0, neg = 0;
                for (double v : f2) {
                    if (std::fabs(v) <= zero_floor) continue;
                    log_sum += std::log(std::fabs(v));
                    ++used;
                    (v > 0.0 ? pos : neg)++;
                }
                if (used > 0 && (pos == 0 || neg == 0)) {
                    const double magnitude = std::exp(log_sum / (2.0 * static_cast<double>(used)));
                    value = neg == 0 ? magnitude : -magnitude;
                }
            } else {
                const double half_q = qv / 2.0;
                double sum = 0.0;
                std::size_t used = 0;
                for (double v : f2) {
                    if (qv < 0.0 && std::fabs(v) <= zero_floor) continue;
                    sum += v >= 0.0 ? std::pow(v, half_q) : -std::pow(-v, half_q);
                    ++used;
                }
                if (used > 0) {
                    const double avg = sum / static_cast<double>(used);
                    value = avg >= 0.0 ? std::pow(avg, 1.0 / qv) : -std::pow(-avg, 1.0 / qv);
                }
            }
            surf.at(qi, si) = value;
        }
    }
    return surf;
}

// Roundoff floor for a segment (co)variance: detrending an exactly
// polynomial profile leaves residuals of order eps * |profile|.
double zero_floor(std::span<const double> px, std::span<const double> py) {
    constexpr double k = 64.0 * std::numeric_limits<double>::epsilon();
    return k * k * max_abs(px) * max_abs(py);
}

}  // namespace

FluctuationSurface fluctuation_zz(std::span<const double> x, const QGrid& q, const ScaleGrid& scales,
                                  const DetrendOptions& opts) {
    check_inputs(x.size(), scales, opts);
    const auto px = profile(x);
    const auto f2 = segment_covariances(px, {}, scales, opts);
    return aggregate_surface(f2, q, scales, zero_floor(px, px), false);
}

FluctuationSurface fluctuation_xy(std::span<const double> x, std::span<const double> y, const QGrid& q,
                                  const ScaleGrid& scales, const DetrendOptions& opts) {
    if (x.size() != y.size())
        throw ValidationError("fluctuation_xy: length mismatch (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    check_inputs(x.size(), scales, opts);
    const auto px = profile(x);
    const auto py = profile(y);
    const auto f2 = segment_covariances(px, py, scales, opts);
    return aggregate_surface(f2, q, scales, zero_floor(px, py), true);
}

FluctuationSurface fluctuation_zz(const RegularSeries& x, const QGrid& q, const ScaleGrid& scales,
                                  const DetrendOptions& opts) {
    return fluctuation_zz(std::span<const double>(x.values), q, scales, opts);
}

FluctuationSurface fluctuation_xy(const RegularSeries& x, const RegularSeries& y, const QGrid& q,
                                  const ScaleGrid& scales, const DetrendOptions& opts) {
    require_aligned(x, y);
    return fluctuation_xy(std::span<const double>(x.values), std::span<const double>(y.values), q, scales, opts);
}

}  // namespace mfts
