#include "fft2d.hpp"

#include <mutex>
#include <new>

namespace texkd::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft2d::Fft2d(std::size_t height, std::size_t width) : height_(height), width_(width) {
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_complex(height * width);
    if (buffer_ == nullptr) {
        throw std::bad_alloc();
    }
    const int h = static_cast<int>(height);
    const int w = static_cast<int>(width);
    forward_ = fftw_plan_dft_2d(h, w, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_2d(h, w, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(buffer_);
}

void Fft2d::forward(std::span<const float> in, std::span<std::complex<double>> out) {
    for (std::size_t i = 0; i < size(); ++i) {
        buffer_[i][0] = in[i];
        buffer_[i][1] = 0.0;
    }
    fftw_execute(forward_);
    for (std::size_t i = 0; i < size(); ++i) {
        out[i] = {buffer_[i][0], buffer_[i][1]};
    }
}

void Fft2d::inverse(std::span<const std::complex<double>> in,
                    std::span<std::complex<double>> out) {
    for (std::size_t i = 0; i < size(); ++i) {
        buffer_[i][0] = in[i].real();
        buffer_[i][1] = in[i].imag();
    }
    fftw_execute(inverse_);
    for (std::size_t i = 0; i < size(); ++i) {
        out[i] = {buffer_[i][0], buffer_[i][1]};
    }
}

}  // namespace texkd::detail
