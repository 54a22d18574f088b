#include "fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace mfts::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    fftw_plan plan = nullptr;
    ~Plan() {
        if (plan) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

struct Buffer {
    void* data;
    explicit Buffer(std::size_t bytes) : data(fftw_malloc(bytes)) {}
    ~Buffer() { fftw_free(data); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
};

}  // namespace

std::vector<std::complex<double>> fft_r2c(std::span<const double> in) {
    const std::size_t n = in.size();
    Buffer real(sizeof(double) * n);
    Buffer spec(sizeof(fftw_complex) * (n / 2 + 1));
    auto* r = static_cast<double*>(real.data);
    auto* c = static_cast<fftw_complex*>(spec.data);
    Plan p;
    {
        std::lock_guard lock(planner_mutex());
        p.plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, FFTW_ESTIMATE);
    }
    std::copy(in.begin(), in.end(), r);
    fftw_execute(p.plan);
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {c[k][0], c[k][1]};
    return out;
}

std::vector<double> fft_c2r(std::span<const std::complex<double>> half, std::size_t n) {
    Buffer real(sizeof(double) * n);
    Buffer spec(sizeof(fftw_complex) * (n / 2 + 1));
    auto* r = static_cast<double*>(real.data);
    auto* c = static_cast<fftw_complex*>(spec.data);
    Plan p;
    {
        std::lock_guard lock(planner_mutex());
        p.plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        c[k][0] = half[k].real();
        c[k][1] = half[k].imag();
    }
    fftw_execute(p.plan);
    return std::vector<double>(r, r + n);
}

std::vector<std::complex<double>> fft_c2c_forward(std::span<const std::complex<double>> in) {
    const std::size_t n = in.size();
    Buffer src(sizeof(fftw_complex) * n);
    Buffer dst(sizeof(fftw_complex) * n);
    auto* a = static_cast<fftw_complex*>(src.data);
    auto* b = static_cast<fftw_complex*>(dst.data);
    Plan p;
    {
        std::lock_guard lock(planner_mutex());
        p.plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n; ++k) {
        a[k][0] = in[k].real();
        a[k][1] = in[k].imag();
    }
    fftw_execute(p.plan);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = {b[k][0], b[k][1]};
    return out;
}

}  // namespace mfts::detail
