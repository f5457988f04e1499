#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "texkd/distill_loss.hpp"

namespace texkd {
namespace {

using testing::random_map;

StatTexture texture(float fill, std::uint64_t seed = 1, std::size_t regions = 1) {
    StatTexture t;
    t.samples.height = 8;
    t.samples.width = 8;
    t.samples.m_total = regions;
    t.samples.candidates = 3 * regions;
    t.samples.seed = seed;
    for (std::size_t i = 0; i < regions; ++i) {
        SampledPoint p;
        p.index = i;
        p.region.box = {0, i, 2, 2};
        t.samples.importance.push_back(p);
        t.descriptors.push_back(FeatureMap::filled({1, 4, 8}, fill));
    }
    return t;
}

TEST(Structural, HandCases) {
    const auto x = random_map({3, 5, 7}, 1);
    EXPECT_EQ(loss_structural(x, x), 0.0);
    EXPECT_DOUBLE_EQ(loss_structural(FeatureMap::filled({1, 4, 6}, 1.0f),
                                     FeatureMap::filled({1, 4, 6}, 0.0f)),
                     1.0);
}

TEST(Structural, SingleEntryPerturbation) {
    const auto t = FeatureMap::filled({2, 4, 5}, 0.0f);
    std::vector<float> d(t.data().size(), 0.0f);
    d[13] = 0.5f;
    EXPECT_DOUBLE_EQ(loss_structural(t, FeatureMap(t.shape(), d)), 0.25 / 20.0);
}

TEST(Structural, ShapeMismatch) {
    EXPECT_THROW(loss_structural(random_map({1, 4, 4}, 1), random_map({2, 4, 4}, 1)), LossError);
}

TEST(Statistical, HandCases) {
    EXPECT_EQ(loss_statistical(texture(0.3f), texture(0.3f)), 0.0);
    EXPECT_DOUBLE_EQ(loss_statistical(texture(1.0f), texture(3.0f)), 4.0);
    EXPECT_DOUBLE_EQ(loss_statistical(texture(1.0f, 1, 3), texture(2.0f, 1, 3)), 1.0);
}

TEST(Statistical, ProvenanceChecked) {
    EXPECT_THROW(loss_statistical(texture(0.0f, 1), texture(0.0f, 2)), LossError);
    auto moved = texture(0.0f);
    moved.samples.importance[0].region.box.top = 3;
    EXPECT_THROW(loss_statistical(texture(0.0f), moved), LossError);
}

TEST(Response, HandCases) {
    const ProbMap t(2, 1, 1, {1.0f, 0.0f});
    const ProbMap s(2, 1, 1, {0.5f, 0.5f});
    EXPECT_NEAR(loss_response(t, s), std::log(2.0), 1e-6);
    EXPECT_EQ(loss_response(t, t), 0.0);
    EXPECT_NEAR(loss_response(s, t), 0.5 * std::log(0.5 / 1e-12) + 0.5 * std::log(0.5), 1e-6);
    EXPECT_NE(loss_response(s, t), loss_response(t, s));
}

TEST(Response, ShapeMismatch) {
    EXPECT_THROW(loss_response(ProbMap(2, 1, 1, {1, 0}), ProbMap(2, 1, 2, {1, 0, 0, 1})),
                 LossError);
}

TEST(Adversarial, Plumbing) {
    const ProbMap seg(2, 2, 2, {0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f});
    const auto image = random_map({3, 2, 2}, 4);
    EXPECT_EQ(loss_adversarial(seg, image, [](const ProbMap&, const FeatureMap&) { return 2.5; }),
              2.5);
    const ProjectionDiscriminator d;
    EXPECT_EQ(loss_adversarial(seg, image, d), loss_adversarial(seg, image, d));
    const std::vector<float> zeros(12, 0.0f);
    const std::span<const float> z(zeros);
    EXPECT_EQ(d.score(z.first(8), 2, z.first(4), 1, 4), 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_GE(d.weight(i), -1.0);
        EXPECT_LE(d.weight(i), 1.0);
    }
    EXPECT_NE(ProjectionDiscriminator(1).weight(0), ProjectionDiscriminator(2).weight(0));
}

TEST(Segmentation, HandCases) {
    const ProbMap onehot(2, 1, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    EXPECT_EQ(loss_segmentation(onehot, LabelMap(1, 2, {0, 1})), 0.0);
    const ProbMap half(2, 1, 1, {0.5f, 0.5f});
    EXPECT_NEAR(loss_segmentation(half, LabelMap(1, 1, {0})), std::log(2.0), 1e-6);
    const ProbMap mixed(2, 1, 2, {0.5f, 1.0f, 0.5f, 0.0f});
    EXPECT_NEAR(loss_segmentation(mixed, LabelMap(1, 2, {0, 255})), std::log(2.0), 1e-6);
    EXPECT_THROW(loss_segmentation(half, LabelMap(1, 1, {7})), LossError);
}

TEST(Total, Combination) {
    EXPECT_EQ(loss_total({}).total, 0.0);
    EXPECT_EQ(loss_total({1, 0, 0, 0, 0}).total, 1.0);
    EXPECT_NEAR(loss_total({1, 1, 1, 1, 1}).total, 8.04, 1e-9);
    LossWeights w;
    w.adversarial = -1;
    EXPECT_THROW(loss_total({}, w), LossError);
}

TEST(Response, SoftmaxAndArgmax) {
    const auto p = softmax_response(FeatureMap({2, 1, 2}, {0.0f, 3.0f, 0.0f, 1.0f}));
    EXPECT_NEAR(p.prob(0, 0), 0.5, 1e-7);
    EXPECT_NEAR(p.prob(0, 1) + p.prob(1, 1), 1.0, 1e-6);
    const auto labels = argmax_labels(p);
    EXPECT_EQ(labels.labels()[0], 0);
    EXPECT_EQ(labels.labels()[1], 0);
}

}  // namespace
}  // namespace texkd
