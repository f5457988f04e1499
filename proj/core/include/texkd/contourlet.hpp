#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "texkd/feature_map.hpp"

namespace texkd {

class ContourletError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultDownsample = 2;

/// One Laplacian-pyramid split. `low` is decimated by p per spatial axis
/// (ceil division); `high` keeps the input resolution.
struct LpPair {
    FeatureMap low;
    FeatureMap high;
};

/// Low-pass analysis: separable binomial [1 4 6 4 1]/16 blur with
/// reflect-101 borders, then keep every p-th sample starting at 0.
FeatureMap lp_analysis(const FeatureMap& x, std::size_t p = kDefaultDownsample);

/// Low-pass synthesis: zero-insertion upsampling, the same binomial kernel
/// with gain p per axis, then crop to (height, width).
FeatureMap lp_synthesis(const FeatureMap& low, std::size_t height, std::size_t width,
                        std::size_t p = kDefaultDownsample);

LpPair lp_decompose(const FeatureMap& x, std::size_t p = kDefaultDownsample);
FeatureMap lp_reconstruct(const LpPair& pair, std::size_t p = kDefaultDownsample);

/// 2^m full-resolution directional subbands of a high-pass map. Bands
/// [0, 2^(m-1)) hold vertical detail (spectral energy near the horizontal
/// frequency axis); the remaining bands hold horizontal detail.
struct DirectionalSubbands {
    int m = 0;
    std::vector<FeatureMap> bands;

    [[nodiscard]] std::size_t vertical_group_size() const { return bands.size() / 2; }
};

/// Frequency-domain wedge masks for an H x W grid, in unshifted DFT index
/// order (row-major, index 0 is DC). The masks are non-negative, sum to one
/// at every frequency, and are symmetric under k -> -k so that filtered real
/// inputs stay real. Transitions between neighbouring wedges are raised
/// cosines spanning four frequency bins.
std::vector<std::vector<double>> wedge_masks(std::size_t height, std::size_t width, int m);

DirectionalSubbands dfb_decompose(const FeatureMap& h, int m);

/// Energy captured by each band: <band_i, h>, which equals the mask-weighted
/// spectral energy sum_k M_i(k)|H(k)|^2 / (H*W). These shares add up to
/// ||h||^2.
std::vector<double> band_energies(const DirectionalSubbands& bands, const FeatureMap& h);

/// Element-wise sum of all bands; recovers the decomposed high-pass map.
FeatureMap dfb_reconstruct(const DirectionalSubbands& bands);

struct ContourletLevel {
    LpPair lp;
    DirectionalSubbands directional;
};

struct ContourletSet {
    std::vector<ContourletLevel> levels;
    std::vector<int> levels_m;
    std::size_t p = kDefaultDownsample;
};

inline const std::vector<int> kDefaultLevelsM = {4, 3};

/// Iterated LP + DFB: level n+1 splits level n's low-pass output and runs the
/// directional filter bank on the resulting high-pass.
ContourletSet cdm_forward(const FeatureMap& x, const std::vector<int>& levels_m = kDefaultLevelsM,
                          std::size_t p = kDefaultDownsample);

/// Inverse of cdm_forward: re-sums each level's bands and chains the LP
/// reconstruction back from the coarsest low-pass.
FeatureMap cdm_reconstruct(const ContourletSet& cs);

/// Bilinear resize with half-pixel centers, applied per channel.
FeatureMap resize_bilinear(const FeatureMap& x, std::size_t height, std::size_t width);

/// Stacks bands along the channel axis (level-major, band-minor, channel
/// innermost), resizing every band to (height, width).
FeatureMap flatten_bands(const std::vector<std::vector<FeatureMap>>& bands_per_level,
                         std::size_t height, std::size_t width);

/// Structural texture tensor: every bandpass subband at level-1 resolution.
FeatureMap flatten_structural(const ContourletSet& cs);

}  // namespace texkd
