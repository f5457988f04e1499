#include <algorithm>
#include <array>

#include "texkd/contourlet.hpp"

namespace texkd {

namespace {

constexpr std::array<double, 5> kBinomial = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
constexpr std::ptrdiff_t kRadius = 2;

// Reflect-101 (mirror without repeating the edge sample), e.g. -1 -> 1.
std::size_t reflect101(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) {
        return 0;
    }
    const std::ptrdiff_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) {
        i += period;
    }
    return static_cast<std::size_t>(i < n ? i : period - i);
}

// Separable binomial blur of one H x W plane, scaled by `gain` per axis.
std::vector<double> blur_plane(std::span<const double> in, std::size_t h, std::size_t w,
                               double gain) {
    std::vector<double> tmp(h * w);
    std::vector<double> out(h * w);
    const auto sh = static_cast<std::ptrdiff_t>(h);
    const auto sw = static_cast<std::ptrdiff_t>(w);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < sw; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t k = -kRadius; k <= kRadius; ++k) {
                acc += kBinomial[k + kRadius] * in[y * w + reflect101(x + k, sw)];
            }
            tmp[y * w + x] = gain * acc;
        }
    }
    for (std::ptrdiff_t y = 0; y < sh; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t k = -kRadius; k <= kRadius; ++k) {
                acc += kBinomial[k + kRadius] * tmp[reflect101(y + k, sh) * w + x];
            }
            out[y * w + x] = gain * acc;
        }
    }
    return out;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void check_factor(std::size_t p) {
    if (p < 2) {
        throw ContourletError("downsampling factor must be at least 2");
    }
}

}  // namespace

FeatureMap lp_analysis(const FeatureMap& x, std::size_t p) {
    check_factor(p);
    const auto h = x.height();
    const auto w = x.width();
    if (h < p || w < p) {
        throw ContourletError("spatial size " + to_string(x.shape()) +
                              " is smaller than the downsampling factor");
    }
    const auto lh = ceil_div(h, p);
    const auto lw = ceil_div(w, p);
    std::vector<float> low(x.channels() * lh * lw);
    std::vector<double> plane(h * w);
    for (std::size_t c = 0; c < x.channels(); ++c) {
        const auto src = x.channel(c);
        std::copy(src.begin(), src.end(), plane.begin());
        const auto blurred = blur_plane(plane, h, w, 1.0);
        for (std::size_t y = 0; y < lh; ++y) {
            for (std::size_t xx = 0; xx < lw; ++xx) {
                low[(c * lh + y) * lw + xx] = static_cast<float>(blurred[(y * p) * w + xx * p]);
            }
        }
    }
    return FeatureMap({x.channels(), lh, lw}, std::move(low));
}

FeatureMap lp_synthesis(const FeatureMap& low, std::size_t height, std::size_t width,
                        std::size_t p) {
    check_factor(p);
    if (low.height() != ceil_div(height, p) || low.width() != ceil_div(width, p)) {
        throw ContourletError("low-pass shape " + to_string(low.shape()) +
                              " is inconsistent with target size " + std::to_string(height) +
                              "x" + std::to_string(width));
    }
    const auto uh = low.height() * p;
    const auto uw = low.width() * p;
    std::vector<float> out(low.channels() * height * width);
    std::vector<double> up(uh * uw);
    for (std::size_t c = 0; c < low.channels(); ++c) {
        std::fill(up.begin(), up.end(), 0.0);
        for (std::size_t y = 0; y < low.height(); ++y) {
            for (std::size_t x = 0; x < low.width(); ++x) {
                up[(y * p) * uw + x * p] = low.at(c, y, x);
            }
        }
        const auto smooth = blur_plane(up, uh, uw, static_cast<double>(p));
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                out[(c * height + y) * width + x] = static_cast<float>(smooth[y * uw + x]);
            }
        }
    }
    return FeatureMap({low.channels(), height, width}, std::move(out));
}

LpPair lp_decompose(const FeatureMap& x, std::size_t p) {
    auto low = lp_analysis(x, p);
    const auto predicted = lp_synthesis(low, x.height(), x.width(), p);
    std::vector<float> high(x.data().size());
    const auto xs = x.data();
    const auto ps = predicted.data();
    for (std::size_t i = 0; i < high.size(); ++i) {
        high[i] = xs[i] - ps[i];
    }
    return {std::move(low), FeatureMap(x.shape(), std::move(high))};
}

FeatureMap lp_reconstruct(const LpPair& pair, std::size_t p) {
    if (pair.low.channels() != pair.high.channels()) {
        throw ContourletError("low/high channel mismatch");
    }
    const auto predicted = lp_synthesis(pair.low, pair.high.height(), pair.high.width(), p);
    std::vector<float> out(pair.high.data().size());
    const auto hs = pair.high.data();
    const auto ps = predicted.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ps[i] + hs[i];
    }
    return FeatureMap(pair.high.shape(), std::move(out));
}

}  // namespace texkd
