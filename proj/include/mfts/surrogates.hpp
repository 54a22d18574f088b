#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mfts/mfdfa.hpp"
#include "mfts/series.hpp"

namespace mfts {

enum class SurrogateKind { shuffle, fourier };

SurrogateKind parse_surrogate_kind(std::string_view name);
std::string_view to_string(SurrogateKind k);

// Replicate r draws from Rng::for_replicate(seed, r).
struct SurrogateSpec {
    SurrogateKind kind = SurrogateKind::shuffle;
    std::uint64_t seed = 0;
    std::uint64_t replicate_index = 0;
};

// Fisher-Yates permutation of the values.
RegularSeries shuffle_surrogate(const RegularSeries& series, const SurrogateSpec& spec);

// Random Fourier phases with the amplitude spectrum, the mean and (for even
// length) the Nyquist term kept. Not amplitude adjusted.
RegularSeries fourier_surrogate(const RegularSeries& series, const SurrogateSpec& spec);

RegularSeries make_surrogate(const RegularSeries& series, const SurrogateSpec& spec);

// Pointwise mean of alpha and f over replicate spectra sharing a q grid.
Spectrum average_spectra(const std::vector<Spectrum>& spectra);

}  // namespace mfts
