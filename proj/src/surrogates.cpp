#include "mfts/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mfts/error.hpp"
#include "mfts/random.hpp"

namespace mfts {

SurrogateKind parse_surrogate_kind(std::string_view name) {
    if (name == "shuffle") return SurrogateKind::shuffle;
    if (name == "fourier") return SurrogateKind::fourier;
    throw ValidationError("unknown surrogate kind '" + std::string(name) + "'");
}

std::string_view to_string(SurrogateKind k) { return k == SurrogateKind::shuffle ? "shuffle" : "fourier"; }

RegularSeries shuffle_surrogate(const RegularSeries& series, const SurrogateSpec& spec) {
    if (series.size() < 2) throw ValidationError("shuffle_surrogate: need at least 2 values");
    Rng rng = Rng::for_replicate(spec.seed, spec.replicate_index);
    RegularSeries out = series;
    auto& v = out.values;
    for (std::size_t i = v.size() - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
    return out;
}

RegularSeries fourier_surrogate(const RegularSeries& series, const SurrogateSpec& spec) {
    const std::size_t n = series.size();
    if (n < 4) throw ValidationError("fourier_surrogate: need at least 4 values");
    Rng rng = Rng::for_replicate(spec.seed, spec.replicate_index);

    auto spectrum = detail::fft_r2c(series.values);
    // Bin 0 and, for even n, bin n/2 are real and stay untouched.
    for (std::size_t k = 1; 2 * k < n; ++k) {
        const double amplitude = std::abs(spectrum[k]);
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        spectrum[k] = std::polar(amplitude, phase);
    }
    auto values = detail::fft_c2r(spectrum, n);
    for (double& v : values) v /= static_cast<double>(n);

    RegularSeries out = series;
    out.values = std::move(values);
    return out;
}

RegularSeries make_surrogate(const RegularSeries& series, const SurrogateSpec& spec) {
    return spec.kind == SurrogateKind::shuffle ? shuffle_surrogate(series, spec) : fourier_surrogate(series, spec);
}

Spectrum average_spectra(const std::vector<Spectrum>& spectra) {
    if (spectra.empty()) throw ValidationError("average_spectra: no spectra");
    Spectrum out = spectra.front();
    for (std::size_t r = 1; r < spectra.size(); ++r) {
        if (spectra[r].q != out.q) throw ValidationError("average_spectra: replicate q grids differ");
        for (std::size_t i = 0; i < out.q.size(); ++i) {
            out.alpha[i] += spectra[r].alpha[i];
            out.f[i] += spectra[r].f[i];
        }
    }
    const auto n = static_cast<double>(spectra.size());
    for (std::size_t i = 0; i < out.q.size(); ++i) {
        out.alpha[i] /= n;
        out.f[i] /= n;
    }
    out.width = *std::max_element(out.alpha.begin(), out.alpha.end()) -
                *std::min_element(out.alpha.begin(), out.alpha.end());
    try {
        out.asymmetry = spectrum_metrics(out).asymmetry;
    } catch (const AnalysisError&) {
        out.asymmetry = std::nan("");
    }
    return out;
}

}  // namespace mfts
