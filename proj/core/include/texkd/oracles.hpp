#pragma once

#include <complex>
#include <span>
#include <vector>

#include "texkd/feature_map.hpp"

// Brute-force reference computations. Nothing here calls into the contourlet
// or statistical-texture code; they exist to check it.
namespace texkd::oracle {

/// Per-level soft counts computed pixel by pixel: for every level, test the
/// window [-0.5/w_n, 0.5/w_n) on L_n - S_i and whether L_n is the nearest
/// level at or below S_i or the nearest level strictly above it.
std::vector<double> histogram(std::span<const double> s_values, std::span<const double> levels,
                              std::span<const double> peak_width);

/// Direct O((HW)^2) discrete Fourier transform of one H x W plane,
/// unnormalized, unshifted index order.
std::vector<std::complex<double>> dft2(std::span<const float> plane, std::size_t height,
                                       std::size_t width);

/// Mask-weighted spectral energy per band, summed over channels:
/// sum_k M_b(k) |X(k)|^2 / (H W).
std::vector<double> dft_energy(const FeatureMap& map,
                               const std::vector<std::vector<double>>& band_masks);

/// Sum of squares of all entries.
double signal_energy(const FeatureMap& map);

}  // namespace texkd::oracle
