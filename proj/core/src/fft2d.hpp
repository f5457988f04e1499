#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace texkd::detail {

// Owns an FFTW plan pair and scratch buffer for one 2D size. FFTW's planner
// is not thread-safe, so construction and destruction are serialized.
class Fft2d {
public:
    Fft2d(std::size_t height, std::size_t width);
    ~Fft2d();

    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    void forward(std::span<const float> in, std::span<std::complex<double>> out);
    // Unnormalized inverse; callers divide by size().
    void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

    [[nodiscard]] std::size_t size() const noexcept { return height_ * width_; }

private:
    std::size_t height_;
    std::size_t width_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

}  // namespace texkd::detail
