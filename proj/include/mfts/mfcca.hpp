#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfts/detrend.hpp"
#include "mfts/mfdfa.hpp"

namespace mfts {

struct SignSummary {
    double q = 0.0;
    int positive = 0;   // scales in the fit range with F_XY > 0
    int negative = 0;
    int undefined = 0;  // zero or NaN
};

struct LambdaCurve {
    std::vector<double> q;
    std::vector<double> lambda;
    std::vector<double> stderr_;
    std::vector<int> sign;             // +1, or -1 where -F_XY was fitted
    std::vector<double> excluded_q;    // q > 0 with mixed or undefined signs
    std::vector<SignSummary> sign_profile;
    FitRange fit;
    double min_r2 = 1.0;
};

struct RhoSurface {
    double q = 2.0;
    std::vector<int> scales;
    std::vector<double> rho;
    std::vector<bool> flagged;  // zero or undefined denominator
};

// Scaling of the signed cross-fluctuation function over q > 0. A q enters the
// domain only if F_XY has one sign on every fitted scale.
LambdaCurve lambda_exponent(const FluctuationSurface& surface, FitRange fit);

// (h_x + h_y) / 2 with stderr sqrt(se_x^2 + se_y^2) / 2.
HurstCurve avg_hurst(const HurstCurve& hx, const HurstCurve& hy);

// rho(q, s) = sign(F_XY) |F_XY|^q / sqrt(F_XX^q F_YY^q). Bounded by 1 in
// magnitude at q = 2; q = 0 is rejected.
RhoSurface rho_from_surfaces(const FluctuationSurface& fxy, const FluctuationSurface& fxx,
                             const FluctuationSurface& fyy, double q);

std::vector<RhoSurface> rho(const RegularSeries& x, const RegularSeries& y, std::span<const double> q,
                            const ScaleGrid& scales, const DetrendOptions& opts = {});
RhoSurface rho(const RegularSeries& x, const RegularSeries& y, double q, const ScaleGrid& scales,
               const DetrendOptions& opts = {});

}  // namespace mfts
