#include <algorithm>
#include <cmath>

#include "texkd/contourlet.hpp"

namespace texkd {

ContourletSet cdm_forward(const FeatureMap& x, const std::vector<int>& levels_m, std::size_t p) {
    if (levels_m.empty()) {
        throw ContourletError("at least one decomposition level is required");
    }
    ContourletSet cs;
    cs.levels_m = levels_m;
    cs.p = p;
    cs.levels.reserve(levels_m.size());
    const FeatureMap* running = &x;
    for (std::size_t n = 0; n < levels_m.size(); ++n) {
        auto lp = lp_decompose(*running, p);
        auto directional = dfb_decompose(lp.high, levels_m[n]);
        cs.levels.push_back({std::move(lp), std::move(directional)});
        running = &cs.levels.back().lp.low;
    }
    return cs;
}

FeatureMap cdm_reconstruct(const ContourletSet& cs) {
    if (cs.levels.empty()) {
        throw ContourletError("empty contourlet set");
    }
    FeatureMap current = cs.levels.back().lp.low;
    for (auto it = cs.levels.rbegin(); it != cs.levels.rend(); ++it) {
        current = lp_reconstruct({current, dfb_reconstruct(it->directional)}, cs.p);
    }
    return current;
}

FeatureMap resize_bilinear(const FeatureMap& x, std::size_t height, std::size_t width) {
    if (height == 0 || width == 0) {
        throw ContourletError("resize target must be non-empty");
    }
    if (x.height() == height && x.width() == width) {
        return x;
    }
    const double sy = static_cast<double>(x.height()) / static_cast<double>(height);
    const double sx = static_cast<double>(x.width()) / static_cast<double>(width);
    const auto max_y = static_cast<double>(x.height() - 1);
    const auto max_x = static_cast<double>(x.width() - 1);
    std::vector<float> out(x.channels() * height * width);
    for (std::size_t c = 0; c < x.channels(); ++c) {
        for (std::size_t y = 0; y < height; ++y) {
            const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
            const auto y0 = static_cast<std::size_t>(fy);
            const auto y1 = std::min(y0 + 1, x.height() - 1);
            const double wy = fy - static_cast<double>(y0);
            for (std::size_t xx = 0; xx < width; ++xx) {
                const double fx =
                    std::clamp((static_cast<double>(xx) + 0.5) * sx - 0.5, 0.0, max_x);
                const auto x0 = static_cast<std::size_t>(fx);
                const auto x1 = std::min(x0 + 1, x.width() - 1);
                const double wx = fx - static_cast<double>(x0);
                const double top = (1 - wx) * x.at(c, y0, x0) + wx * x.at(c, y0, x1);
                const double bottom = (1 - wx) * x.at(c, y1, x0) + wx * x.at(c, y1, x1);
                out[(c * height + y) * width + xx] =
                    static_cast<float>((1 - wy) * top + wy * bottom);
            }
        }
    }
    return FeatureMap({x.channels(), height, width}, std::move(out));
}

FeatureMap flatten_bands(const std::vector<std::vector<FeatureMap>>& bands_per_level,
                         std::size_t height, std::size_t width) {
    std::vector<float> out;
    std::size_t channels = 0;
    for (const auto& level : bands_per_level) {
        for (const auto& band : level) {
            const auto resized = resize_bilinear(band, height, width);
            const auto d = resized.data();
            out.insert(out.end(), d.begin(), d.end());
            channels += resized.channels();
        }
    }
    if (channels == 0) {
        throw ContourletError("no bands to flatten");
    }
    return FeatureMap({channels, height, width}, std::move(out));
}

FeatureMap flatten_structural(const ContourletSet& cs) {
    if (cs.levels.empty()) {
        throw ContourletError("empty contourlet set");
    }
    std::vector<std::vector<FeatureMap>> bands;
    bands.reserve(cs.levels.size());
    for (const auto& level : cs.levels) {
        bands.push_back(level.directional.bands);
    }
    const auto& top = cs.levels.front().lp.high;
    return flatten_bands(bands, top.height(), top.width());
}

}  // namespace texkd
