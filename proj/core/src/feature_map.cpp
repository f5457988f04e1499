#include "texkd/feature_map.hpp"

#include <cmath>
#include <limits>

namespace texkd {

std::string to_string(const Shape& s) {
    return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
           std::to_string(s.width);
}

namespace {

std::size_t checked_volume(std::size_t a, std::size_t b, std::size_t c) {
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    if (a == 0 || b == 0 || c == 0) {
        throw InvalidTensor("tensor dimensions must be positive");
    }
    if (a > kMax / b || a * b > kMax / c) {
        throw InvalidTensor("tensor dimensions overflow");
    }
    return a * b * c;
}

}  // namespace

FeatureMap::FeatureMap(Shape shape, std::vector<float> data)
    : shape_(shape), data_(std::move(data)) {
    const auto n = checked_volume(shape_.channels, shape_.height, shape_.width);
    if (data_.size() != n) {
        throw InvalidTensor("data length " + std::to_string(data_.size()) +
                            " does not match shape " + to_string(shape_));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(data_[i])) {
            throw InvalidTensor("non-finite value at index " + std::to_string(i));
        }
    }
}

FeatureMap FeatureMap::filled(Shape shape, float value) {
    return FeatureMap(shape, std::vector<float>(checked_volume(shape.channels, shape.height,
                                                               shape.width),
                                                value));
}

std::span<const float> FeatureMap::channel(std::size_t c) const {
    if (c >= shape_.channels) {
        throw std::out_of_range("channel index out of range");
    }
    return std::span<const float>(data_).subspan(c * shape_.plane(), shape_.plane());
}

ProbMap::ProbMap(std::size_t classes, std::size_t height, std::size_t width,
                 std::vector<float> data)
    : classes_(classes), height_(height), width_(width), data_(std::move(data)) {
    const auto n = checked_volume(classes, height, width);
    if (data_.size() != n) {
        throw InvalidTensor("probability data length does not match shape");
    }
    const auto px = pixels();
    for (std::size_t i = 0; i < px; ++i) {
        double sum = 0.0;
        for (std::size_t c = 0; c < classes_; ++c) {
            const float v = data_[c * px + i];
            if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
                throw InvalidTensor("probability outside [0,1] at pixel " + std::to_string(i));
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw InvalidTensor("class probabilities at pixel " + std::to_string(i) +
                                " sum to " + std::to_string(sum));
        }
    }
}

ProbMap ProbMap::from_feature_map(const FeatureMap& map) {
    auto d = map.data();
    return ProbMap(map.channels(), map.height(), map.width(),
                   std::vector<float>(d.begin(), d.end()));
}

FeatureMap ProbMap::to_feature_map() const {
    return FeatureMap({classes_, height_, width_}, data_);
}

LabelMap::LabelMap(std::size_t height, std::size_t width, std::vector<std::int32_t> labels,
                   std::int32_t ignore_index)
    : height_(height), width_(width), labels_(std::move(labels)), ignore_index_(ignore_index) {
    if (labels_.size() != checked_volume(1, height, width)) {
        throw InvalidTensor("label count does not match shape");
    }
    for (auto l : labels_) {
        if (l < 0 && l != ignore_index_) {
            throw InvalidTensor("negative class label");
        }
    }
}

LabelMap LabelMap::from_feature_map(const FeatureMap& map, std::int32_t ignore_index) {
    if (map.channels() != 1) {
        throw InvalidTensor("label maps must have exactly one channel");
    }
    std::vector<std::int32_t> labels;
    labels.reserve(map.data().size());
    for (float v : map.data()) {
        if (v != std::nearbyint(v)) {
            throw InvalidTensor("label map holds a non-integral value");
        }
        labels.push_back(static_cast<std::int32_t>(v));
    }
    return LabelMap(map.height(), map.width(), std::move(labels), ignore_index);
}

FeatureMap LabelMap::to_feature_map() const {
    std::vector<float> v(labels_.begin(), labels_.end());
    return FeatureMap({1, height_, width_}, std::move(v));
}

}  // namespace texkd
