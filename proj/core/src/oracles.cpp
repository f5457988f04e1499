#include "texkd/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace texkd::oracle {

std::vector<double> histogram(std::span<const double> s_values, std::span<const double> levels,
                              std::span<const double> peak_width) {
    if (levels.size() != peak_width.size()) {
        throw std::invalid_argument("levels and peak widths differ in length");
    }
    const std::size_t n = levels.size();
    std::vector<double> counts(n, 0.0);
    for (double s : s_values) {
        for (std::size_t l = 0; l < n; ++l) {
            const bool lower_neighbour = levels[l] <= s && (l + 1 == n || levels[l + 1] > s);
            const bool upper_neighbour = levels[l] > s && (l == 0 || levels[l - 1] <= s);
            if (!lower_neighbour && !upper_neighbour) {
                continue;
            }
            const double diff = levels[l] - s;
            const double half = 0.5 / peak_width[l];
            if (diff >= -half && diff < half) {
                counts[l] += 1.0 - std::fabs(diff);
            }
        }
    }
    return counts;
}

std::vector<std::complex<double>> dft2(std::span<const float> plane, std::size_t height,
                                       std::size_t width) {
    if (plane.size() != height * width) {
        throw std::invalid_argument("plane size does not match dimensions");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> row_twiddle(height);
    std::vector<std::complex<double>> col_twiddle(width);
    for (std::size_t i = 0; i < height; ++i) {
        row_twiddle[i] = std::polar(1.0, -two_pi * static_cast<double>(i) / height);
    }
    for (std::size_t i = 0; i < width; ++i) {
        col_twiddle[i] = std::polar(1.0, -two_pi * static_cast<double>(i) / width);
    }
    std::vector<std::complex<double>> out(height * width);
    for (std::size_t ky = 0; ky < height; ++ky) {
        for (std::size_t kx = 0; kx < width; ++kx) {
            std::complex<double> acc = 0.0;
            for (std::size_t y = 0; y < height; ++y) {
                const auto wy = row_twiddle[(ky * y) % height];
                for (std::size_t x = 0; x < width; ++x) {
                    acc += static_cast<double>(plane[y * width + x]) * wy *
                           col_twiddle[(kx * x) % width];
                }
            }
            out[ky * width + kx] = acc;
        }
    }
    return out;
}

std::vector<double> dft_energy(const FeatureMap& map,
                               const std::vector<std::vector<double>>& band_masks) {
    const std::size_t n = map.shape().plane();
    for (const auto& mask : band_masks) {
        if (mask.size() != n) {
            throw std::invalid_argument("mask size does not match the map");
        }
    }
    std::vector<double> energies(band_masks.size(), 0.0);
    for (std::size_t c = 0; c < map.channels(); ++c) {
        const auto spectrum = dft2(map.channel(c), map.height(), map.width());
        for (std::size_t b = 0; b < band_masks.size(); ++b) {
            double e = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                e += band_masks[b][k] * std::norm(spectrum[k]);
            }
            energies[b] += e / static_cast<double>(n);
        }
    }
    return energies;
}

double signal_energy(const FeatureMap& map) {
    double e = 0.0;
    for (float v : map.data()) {
        e += static_cast<double>(v) * v;
    }
    return e;
}

}  // namespace texkd::oracle
