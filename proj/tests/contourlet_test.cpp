#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "texkd/contourlet.hpp"
#include "texkd/oracles.hpp"
#include "texkd/synth.hpp"

namespace texkd {
namespace {

using testing::max_abs_diff;
using testing::random_map;

// Direct 5x5 convolution with the outer-product binomial kernel and mirrored
// borders, written independently of the separable implementation.
double mirrored(const std::vector<double>& plane, long h, long w, long y, long x) {
    auto fold = [](long i, long n) {
        if (n == 1) return 0L;
        while (i < 0 || i >= n) {
            if (i < 0) i = -i;
            if (i >= n) i = 2 * (n - 1) - i;
        }
        return i;
    };
    return plane[fold(y, h) * w + fold(x, w)];
}

std::vector<double> direct_blur(const std::vector<double>& plane, long h, long w, double gain) {
    static const double k[5] = {1, 4, 6, 4, 1};
    std::vector<double> out(plane.size());
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            double acc = 0.0;
            for (long dy = -2; dy <= 2; ++dy)
                for (long dx = -2; dx <= 2; ++dx)
                    acc += k[dy + 2] * k[dx + 2] * mirrored(plane, h, w, y + dy, x + dx);
            out[y * w + x] = acc * gain * gain / 256.0;
        }
    return out;
}

FeatureMap reference_analysis(const FeatureMap& x, std::size_t p) {
    const long h = static_cast<long>(x.height());
    const long w = static_cast<long>(x.width());
    const std::size_t lh = (x.height() + p - 1) / p;
    const std::size_t lw = (x.width() + p - 1) / p;
    std::vector<float> out;
    for (std::size_t c = 0; c < x.channels(); ++c) {
        std::vector<double> plane(x.channel(c).begin(), x.channel(c).end());
        const auto blurred = direct_blur(plane, h, w, 1.0);
        for (std::size_t y = 0; y < lh; ++y)
            for (std::size_t xx = 0; xx < lw; ++xx)
                out.push_back(static_cast<float>(blurred[y * p * w + xx * p]));
    }
    return FeatureMap({x.channels(), lh, lw}, out);
}

FeatureMap reference_synthesis(const FeatureMap& low, std::size_t h, std::size_t w,
                               std::size_t p) {
    const long uh = static_cast<long>(low.height() * p);
    const long uw = static_cast<long>(low.width() * p);
    std::vector<float> out;
    for (std::size_t c = 0; c < low.channels(); ++c) {
        std::vector<double> up(uh * uw, 0.0);
        for (std::size_t y = 0; y < low.height(); ++y)
            for (std::size_t x = 0; x < low.width(); ++x)
                up[y * p * uw + x * p] = low.at(c, y, x);
        const auto smooth = direct_blur(up, uh, uw, static_cast<double>(p));
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) out.push_back(static_cast<float>(smooth[y * uw + x]));
    }
    return FeatureMap({low.channels(), h, w}, out);
}

TEST(LaplacianPyramid, ConstantHasNoDetail) {
    const auto x = FeatureMap::filled({2, 16, 12}, 3.25f);
    const auto pair = lp_decompose(x);
    for (float v : pair.high.data()) EXPECT_LT(std::abs(v), 1e-5);
    for (float v : pair.low.data()) EXPECT_NEAR(v, 3.25f, 1e-5);
}

TEST(LaplacianPyramid, RampShapesAndReferenceValues) {
    std::vector<float> ramp(64);
    std::iota(ramp.begin(), ramp.end(), 0.0f);
    const FeatureMap x({1, 8, 8}, ramp);
    const auto pair = lp_decompose(x, 2);
    EXPECT_EQ(pair.low.shape(), (Shape{1, 4, 4}));
    EXPECT_EQ(pair.high.shape(), (Shape{1, 8, 8}));
    EXPECT_LT(max_abs_diff(pair.low, reference_analysis(x, 2)), 1e-5);
}

TEST(LaplacianPyramid, MatchesDirectConvolution) {
    for (std::size_t p : {2u, 3u}) {
        for (const Shape s : {Shape{1, 9, 7}, Shape{2, 16, 16}, Shape{3, 11, 20}}) {
            const auto x = random_map(s, 100 + s.height + p);
            const auto low = lp_analysis(x, p);
            EXPECT_LT(max_abs_diff(low, reference_analysis(x, p)), 1e-5);
            const auto up = lp_synthesis(low, s.height, s.width, p);
            EXPECT_LT(max_abs_diff(up, reference_synthesis(low, s.height, s.width, p)), 1e-5);
        }
    }
}

TEST(LaplacianPyramid, OddSizesUseCeilingDimensions) {
    const auto pair = lp_decompose(random_map({1, 9, 5}, 4), 2);
    EXPECT_EQ(pair.low.shape(), (Shape{1, 5, 3}));
}

TEST(LaplacianPyramid, SynthesisEdgeCases) {
    const auto c = lp_synthesis(FeatureMap::filled({1, 4, 4}, 2.0f), 8, 8, 2);
    for (float v : c.data()) EXPECT_NEAR(v, 2.0f, 1e-6);
    const auto z = lp_reconstruct({FeatureMap::filled({1, 4, 4}, 0.0f),
                                   FeatureMap::filled({1, 8, 8}, 0.0f)});
    for (float v : z.data()) EXPECT_EQ(v, 0.0f);
}

TEST(LaplacianPyramid, PerfectReconstructionOnRandomMaps) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const Shape s{1 + rng() % 3, 2 + rng() % 63, 2 + rng() % 63};
        const auto x = random_map(s, rng());
        EXPECT_LT(max_abs_diff(lp_reconstruct(lp_decompose(x)), x), 1e-5) << to_string(s);
    }
}

TEST(LaplacianPyramid, RejectsBadArguments) {
    EXPECT_THROW(lp_analysis(random_map({1, 4, 4}, 1), 1), ContourletError);
    EXPECT_THROW(lp_analysis(random_map({1, 1, 4}, 1), 2), ContourletError);
    EXPECT_THROW(lp_synthesis(random_map({1, 3, 3}, 1), 8, 8, 2), ContourletError);
}

TEST(DirectionalFilterBank, BandCountsAndPartition) {
    for (int m = 1; m <= 5; ++m) {
        const auto x = random_map({2, 16, 24}, 30 + m);
        const auto bands = dfb_decompose(x, m);
        EXPECT_EQ(bands.bands.size(), std::size_t{1} << m);
        EXPECT_LT(max_abs_diff(dfb_reconstruct(bands), x), 1e-4);
    }
    EXPECT_EQ(dfb_decompose(random_map({1, 8, 8}, 1), 3).bands.size(), 8u);
}

TEST(DirectionalFilterBank, MasksArePartitionOfUnity) {
    const auto masks = wedge_masks(12, 10, 3);
    for (std::size_t k = 0; k < 120; ++k) {
        double sum = 0.0;
        for (const auto& m : masks) {
            EXPECT_GE(m[k], 0.0);
            sum += m[k];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(DirectionalFilterBank, IsLinear) {
    const auto a = random_map({1, 16, 16}, 1);
    const auto b = random_map({1, 16, 16}, 2);
    std::vector<float> mix(a.data().size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0f * a.data()[i] - 0.5f * b.data()[i];
    const auto ba = dfb_decompose(a, 2);
    const auto bb = dfb_decompose(b, 2);
    const auto bm = dfb_decompose(FeatureMap(a.shape(), mix), 2);
    for (std::size_t band = 0; band < 4; ++band)
        for (std::size_t i = 0; i < mix.size(); ++i)
            EXPECT_NEAR(bm.bands[band].data()[i],
                        2.0f * ba.bands[band].data()[i] - 0.5f * bb.bands[band].data()[i], 1e-5);
}

double group_share(const DirectionalSubbands& bands, const FeatureMap& x, bool vertical) {
    const auto e = band_energies(bands, x);
    const auto half = bands.vertical_group_size();
    const double total = std::accumulate(e.begin(), e.end(), 0.0);
    const double part = vertical ? std::accumulate(e.begin(), e.begin() + half, 0.0)
                                 : std::accumulate(e.begin() + half, e.end(), 0.0);
    return part / total;
}

TEST(DirectionalFilterBank, GratingsLandInTheirGroup) {
    for (int m : {2, 3, 4}) {
        synth::SynthSpec spec;
        spec.dims = {1, 64, 64};
        spec.angle_deg = 90.0;
        const auto vertical = synth::generate_pattern(spec);
        EXPECT_GE(group_share(dfb_decompose(vertical, m), vertical, true), 0.9);
        spec.angle_deg = 0.0;
        const auto horizontal = synth::generate_pattern(spec);
        EXPECT_GE(group_share(dfb_decompose(horizontal, m), horizontal, false), 0.9);
    }
}

TEST(DirectionalFilterBank, EnergiesMatchNaiveDft) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = random_map({2, 16, 16}, seed);
        for (int m : {1, 3}) {
            const auto fast = band_energies(dfb_decompose(x, m), x);
            const auto slow = oracle::dft_energy(x, wedge_masks(16, 16, m));
            ASSERT_EQ(fast.size(), slow.size());
            for (std::size_t b = 0; b < fast.size(); ++b)
                EXPECT_NEAR(fast[b], slow[b], 1e-3 * std::abs(slow[b]) + 1e-9);
        }
    }
}

TEST(DirectionalFilterBank, Parseval) {
    const auto x = random_map({3, 20, 14}, 77);
    const auto e = band_energies(dfb_decompose(x, 3), x);
    const double total = oracle::signal_energy(x);
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), total, 1e-3 * total);
}

TEST(DirectionalFilterBank, ConstantEnergySitsAtDc) {
    const auto x = FeatureMap::filled({1, 8, 8}, 1.5f);
    const auto spectrum = oracle::dft2(x.channel(0), 8, 8);
    for (std::size_t k = 1; k < spectrum.size(); ++k) EXPECT_LT(std::abs(spectrum[k]), 1e-9);
    const auto e = band_energies(dfb_decompose(x, 2), x);
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), oracle::signal_energy(x), 1e-3);
}

TEST(DirectionalFilterBank, RejectsBadDepth) {
    EXPECT_THROW(dfb_decompose(random_map({1, 8, 8}, 1), 0), ContourletError);
    EXPECT_THROW(dfb_decompose(random_map({1, 8, 8}, 1), 13), ContourletError);
    EXPECT_THROW(dfb_decompose(random_map({1, 1, 8}, 1), 1), ContourletError);
}

TEST(Contourlet, LevelShapes) {
    const auto cs = cdm_forward(random_map({1, 64, 64}, 3), {4, 3});
    ASSERT_EQ(cs.levels.size(), 2u);
    EXPECT_EQ(cs.levels[0].directional.bands.size(), 16u);
    EXPECT_EQ(cs.levels[0].directional.bands[0].shape(), (Shape{1, 64, 64}));
    EXPECT_EQ(cs.levels[1].directional.bands.size(), 8u);
    EXPECT_EQ(cs.levels[1].directional.bands[0].shape(), (Shape{1, 32, 32}));
    EXPECT_EQ(cdm_forward(random_map({1, 8, 8}, 3), {1}).levels[0].directional.bands.size(), 2u);
}

TEST(Contourlet, ShapeGrid) {
    for (std::size_t c : {1u, 3u})
        for (std::size_t h : {17u, 32u})
            for (std::size_t w : {16u, 23u}) {
                const auto x = random_map({c, h, w}, c * h * w);
                const auto cs = cdm_forward(x, {3, 2});
                EXPECT_EQ(cs.levels[1].lp.high.shape(), (Shape{c, (h + 1) / 2, (w + 1) / 2}));
                EXPECT_EQ(flatten_structural(cs).shape(), (Shape{12 * c, h, w}));
                EXPECT_LT(max_abs_diff(cdm_reconstruct(cs), x), 1e-4);
            }
}

TEST(Contourlet, FlattenCounts) {
    const auto x = random_map({1, 32, 32}, 8);
    const auto flat = flatten_structural(cdm_forward(x, {4, 3}));
    EXPECT_EQ(flat.shape(), (Shape{24, 32, 32}));
    const auto single = flatten_structural(cdm_forward(x, {1}));
    EXPECT_EQ(single.shape(), (Shape{2, 32, 32}));
    EXPECT_EQ(flatten_structural(cdm_forward(x, {4, 3})), flat);
}

TEST(Contourlet, ResizeIdentityAndConstant) {
    const auto x = random_map({2, 5, 7}, 1);
    EXPECT_EQ(resize_bilinear(x, 5, 7), x);
    const auto c = resize_bilinear(FeatureMap::filled({1, 3, 3}, 0.5f), 8, 5);
    for (float v : c.data()) EXPECT_NEAR(v, 0.5f, 1e-7);
}

}  // namespace
}  // namespace texkd
