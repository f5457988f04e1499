#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft2d.hpp"
#include "texkd/contourlet.hpp"

namespace texkd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTransitionBins = 4.0;
constexpr int kMaxDepth = 12;

std::ptrdiff_t signed_frequency(std::size_t idx, std::size_t n) {
    const auto i = static_cast<std::ptrdiff_t>(idx);
    return 2 * idx < n ? i : i - static_cast<std::ptrdiff_t>(n);
}

// Maps an angle difference onto [-pi/2, pi/2): orientations are defined mod pi.
double wrap_half_turn(double a) {
    a = std::fmod(a + kPi / 2, kPi);
    if (a < 0) {
        a += kPi;
    }
    return a - kPi / 2;
}

// Raised-cosine step across a boundary; d is the signed perpendicular
// distance in frequency bins.
double soft_step(double d) {
    constexpr double half = kTransitionBins / 2;
    if (d <= -half) {
        return 0.0;
    }
    if (d >= half) {
        return 1.0;
    }
    return 0.5 * (1.0 + std::sin(kPi * d / kTransitionBins));
}

void check_depth(int m) {
    if (m < 1) {
        throw ContourletError("directional tree depth must be at least 1");
    }
    if (m > kMaxDepth) {
        throw ContourletError("directional tree depth too large");
    }
}

}  // namespace

std::vector<std::vector<double>> wedge_masks(std::size_t height, std::size_t width, int m) {
    check_depth(m);
    if (height < 2 || width < 2) {
        throw ContourletError("directional filter bank needs at least 2x2 input");
    }
    const std::size_t bands = std::size_t{1} << m;
    // Wedge i spans orientations [start_i, start_i + pi/K), with wedge 0
    // starting on the -45 degree diagonal so that the first half of the
    // wedges straddles the horizontal frequency axis.
    std::vector<double> starts(bands);
    for (std::size_t j = 0; j < bands; ++j) {
        starts[j] = -kPi / 4 + kPi * static_cast<double>(j) / static_cast<double>(bands);
    }
    const double scale = static_cast<double>(std::max(height, width));
    const std::size_t n = height * width;

    std::vector<std::vector<double>> masks(bands, std::vector<double>(n));
    std::vector<double> step(bands);
    for (std::size_t ky = 0; ky < height; ++ky) {
        const double fy = static_cast<double>(signed_frequency(ky, height)) / height;
        for (std::size_t kx = 0; kx < width; ++kx) {
            const double fx = static_cast<double>(signed_frequency(kx, width)) / width;
            const double radius = scale * std::hypot(fx, fy);
            const double phi = std::atan2(fy, fx);
            for (std::size_t j = 0; j < bands; ++j) {
                step[j] = soft_step(radius * std::sin(wrap_half_turn(phi - starts[j])));
            }
            double total = 0.0;
            const std::size_t idx = ky * width + kx;
            for (std::size_t i = 0; i < bands; ++i) {
                const double w = step[i] * (1.0 - step[(i + 1) % bands]);
                masks[i][idx] = w;
                total += w;
            }
            for (std::size_t i = 0; i < bands; ++i) {
                masks[i][idx] = total > 1e-12 ? masks[i][idx] / total
                                              : 1.0 / static_cast<double>(bands);
            }
        }
    }
    // Enforce M(k) == M(-k) on the Nyquist row/column of even sizes.
    for (auto& mask : masks) {
        std::vector<double> sym(n);
        for (std::size_t ky = 0; ky < height; ++ky) {
            const std::size_t my = (height - ky) % height;
            for (std::size_t kx = 0; kx < width; ++kx) {
                const std::size_t mx = (width - kx) % width;
                sym[ky * width + kx] = 0.5 * (mask[ky * width + kx] + mask[my * width + mx]);
            }
        }
        mask = std::move(sym);
    }
    return masks;
}

DirectionalSubbands dfb_decompose(const FeatureMap& h, int m) {
    const auto masks = wedge_masks(h.height(), h.width(), m);
    const std::size_t n = h.height() * h.width();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<std::vector<float>> out(masks.size(), std::vector<float>(h.data().size()));
    detail::Fft2d fft(h.height(), h.width());
    std::vector<std::complex<double>> spectrum(n);
    std::vector<std::complex<double>> filtered(n);
    std::vector<std::complex<double>> spatial(n);
    for (std::size_t c = 0; c < h.channels(); ++c) {
        fft.forward(h.channel(c), spectrum);
        for (std::size_t b = 0; b < masks.size(); ++b) {
            for (std::size_t k = 0; k < n; ++k) {
                filtered[k] = spectrum[k] * masks[b][k];
            }
            fft.inverse(filtered, spatial);
            for (std::size_t k = 0; k < n; ++k) {
                out[b][c * n + k] = static_cast<float>(spatial[k].real() * inv_n);
            }
        }
    }
    DirectionalSubbands result{m, {}};
    result.bands.reserve(out.size());
    for (auto& band : out) {
        result.bands.emplace_back(h.shape(), std::move(band));
    }
    return result;
}

std::vector<double> band_energies(const DirectionalSubbands& bands, const FeatureMap& h) {
    std::vector<double> energies;
    energies.reserve(bands.bands.size());
    const auto hs = h.data();
    for (const auto& band : bands.bands) {
        if (band.shape() != h.shape()) {
            throw ContourletError("band shape does not match the decomposed map");
        }
        double e = 0.0;
        const auto bs = band.data();
        for (std::size_t i = 0; i < bs.size(); ++i) {
            e += static_cast<double>(bs[i]) * hs[i];
        }
        energies.push_back(e);
    }
    return energies;
}

FeatureMap dfb_reconstruct(const DirectionalSubbands& bands) {
    if (bands.bands.empty()) {
        throw ContourletError("no bands to reconstruct from");
    }
    const auto& shape = bands.bands.front().shape();
    std::vector<double> acc(shape.size(), 0.0);
    for (const auto& band : bands.bands) {
        if (band.shape() != shape) {
            throw ContourletError("bands have inconsistent shapes");
        }
        const auto bs = band.data();
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += bs[i];
        }
    }
    return FeatureMap(shape, std::vector<float>(acc.begin(), acc.end()));
}

}  // namespace texkd
