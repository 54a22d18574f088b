#pragma once

#include <cstddef>
#include <vector>

#include "mfts/detrend.hpp"

namespace mfts {

struct FitRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Central half of the grid in log-space.
FitRange default_fit_range(const ScaleGrid& scales);

struct HurstCurve {
    std::vector<double> q;
    std::vector<double> h;
    std::vector<double> stderr_;
    FitRange fit;
    std::size_t n_scales = 0;            // scales used in each regression
    std::vector<int> excluded_scales;    // in range but flagged unusable
    double min_r2 = 1.0;                 // worst per-q regression R^2 (scaling quality)

    // h(2); throws if q = 2 is not on the grid.
    double hurst() const;
};

struct Spectrum {
    std::vector<double> q;
    std::vector<double> alpha;
    std::vector<double> f;
    double width = 0.0;
    double asymmetry = 0.0;  // NaN when the spectrum is degenerate
};

struct SpectrumMetrics {
    double width = 0.0;
    double asymmetry = 0.0;
};

// Per-q slope of ln F against ln s over scales in [fit.lo, fit.hi].
HurstCurve generalized_hurst(const FluctuationSurface& surface, FitRange fit);
HurstCurve generalized_hurst(const FluctuationSurface& surface);

// alpha = h + q h', f = q (alpha - h) + 1 with central differences in q.
Spectrum singularity_spectrum(const HurstCurve& h);

// Width alpha_max - alpha_min and (L - R) / (L + R) with arms measured from
// the apex (largest f). Positive asymmetry means the left arm is longer.
SpectrumMetrics spectrum_metrics(const Spectrum& spec);

}  // namespace mfts
