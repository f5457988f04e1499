#include <algorithm>
#include <cmath>

#include "texkd/statexture.hpp"

namespace texkd {

SimilarityMap self_similarity(const FeatureMap& a) {
    const auto channels = a.channels();
    const auto pixels = a.shape().plane();
    std::vector<double> mean(channels, 0.0);
    for (std::size_t c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (float v : a.channel(c)) {
            acc += v;
        }
        mean[c] = acc / static_cast<double>(pixels);
    }
    double mean_norm = 0.0;
    for (double m : mean) {
        mean_norm += m * m;
    }
    mean_norm = std::sqrt(mean_norm);

    SimilarityMap s{a.height(), a.width(), std::vector<double>(pixels, 0.0)};
    if (mean_norm == 0.0) {
        return s;
    }
    const auto data = a.data();
    for (std::size_t i = 0; i < pixels; ++i) {
        double dot = 0.0;
        double norm = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            const double v = data[c * pixels + i];
            dot += v * mean[c];
            norm += v * v;
        }
        if (norm > 0.0) {
            s.values[i] = std::clamp(dot / (std::sqrt(norm) * mean_norm), -1.0, 1.0);
        }
    }
    return s;
}

}  // namespace texkd
