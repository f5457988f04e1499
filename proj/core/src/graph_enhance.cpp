#include <array>
#include <cmath>
#include <numeric>

#include "texkd/statexture.hpp"

namespace texkd {

namespace {

// Fixed lift from the 2-d node feature (level, count share) to the
// descriptor width. Rows are orthonormal (QR of a seeded Gaussian draw).
constexpr std::array<std::array<double, kDescriptorWidth>, 2> kLift = {{
    {0.26118551436301196, 0.45503689119406299, 0.028091624074881191, -0.45499837398250592,
     0.017647543687382628, -0.16565654428780791, 0.091946352948685528, -0.6933276547097641},
    {0.12867910876147223, -0.15631804068185645, -0.47710367040611629, -0.21510049133894504,
     -0.44993673622168129, -0.43328826352658417, 0.49412757920947709, 0.22531394317568409},
}};

constexpr std::array<double, kDescriptorWidth> kBias = {
    -0.044018217339341283, 0.039984913680282952, -0.047609999275386256, 0.091564870081407984,
    -0.08314130429726517,  -0.040844160850305872, 0.029053979522906809, 0.04890287902882734};

}  // namespace

std::vector<double> graph_enhance(const EncodingMatrix& e, const QuantLevels& levels, double tau) {
    const auto n = levels.size();
    if (n == 0 || e.n_levels != n || e.counts.size() != n) {
        throw StatTextureError("encoding and levels disagree on the level count");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw StatTextureError("tau must be positive");
    }
    const double total = std::accumulate(e.counts.begin(), e.counts.end(), 0.0);
    std::vector<std::array<double, 2>> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = {levels.levels[i], total > 0.0 ? e.counts[i] / total : 0.0};
    }

    std::vector<double> out(n * kDescriptorWidth);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        // The self term has exponent 0, the row maximum, so no shift is needed.
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            weights[j] = std::exp(-std::abs(levels.levels[i] - levels.levels[j]) / tau);
            norm += weights[j];
        }
        std::array<double, 2> agg = {0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double a = weights[j] / norm;
            agg[0] += a * nodes[j][0];
            agg[1] += a * nodes[j][1];
        }
        for (std::size_t d = 0; d < kDescriptorWidth; ++d) {
            out[i * kDescriptorWidth + d] = agg[0] * kLift[0][d] + agg[1] * kLift[1][d] + kBias[d];
        }
    }
    return out;
}

}  // namespace texkd
