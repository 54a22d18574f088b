#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mfts::detail {

// Thin FFTW wrappers. Planning is serialized internally (FFTW's planner is
// not thread-safe); execution runs on private buffers. Unnormalized.
std::vector<std::complex<double>> fft_r2c(std::span<const double> in);
std::vector<double> fft_c2r(std::span<const std::complex<double>> half_spectrum, std::size_t n);
std::vector<std::complex<double>> fft_c2c_forward(std::span<const std::complex<double>> in);

}  // namespace mfts::detail
