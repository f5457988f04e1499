#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace texkd {

/// Raised when a tensor is built from inconsistent or invalid data.
class InvalidTensor : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Extent of a channel-major C x H x W array.
struct Shape {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    [[nodiscard]] std::size_t plane() const noexcept { return height * width; }
    [[nodiscard]] std::size_t size() const noexcept { return channels * height * width; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Immutable C x H x W array of finite 32-bit activations, channel-major then
/// row-major. Every value is checked for finiteness at construction.
class FeatureMap {
public:
    FeatureMap(Shape shape, std::vector<float> data);

    static FeatureMap filled(Shape shape, float value);

    [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t channels() const noexcept { return shape_.channels; }
    [[nodiscard]] std::size_t height() const noexcept { return shape_.height; }
    [[nodiscard]] std::size_t width() const noexcept { return shape_.width; }

    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }
    [[nodiscard]] std::span<const float> channel(std::size_t c) const;

    [[nodiscard]] float at(std::size_t c, std::size_t y, std::size_t x) const {
        return data_[(c * shape_.height + y) * shape_.width + x];
    }

    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

private:
    Shape shape_;
    std::vector<float> data_;
};

/// Per-pixel class probabilities, stored class-major like a FeatureMap.
class ProbMap {
public:
    static constexpr double kSumTolerance = 1e-5;

    ProbMap(std::size_t classes, std::size_t height, std::size_t width, std::vector<float> data);

    /// Reinterprets a FeatureMap whose channels are classes.
    static ProbMap from_feature_map(const FeatureMap& map);
    [[nodiscard]] FeatureMap to_feature_map() const;

    [[nodiscard]] std::size_t classes() const noexcept { return classes_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t pixels() const noexcept { return height_ * width_; }
    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }

    [[nodiscard]] float prob(std::size_t cls, std::size_t pixel) const {
        return data_[cls * pixels() + pixel];
    }

private:
    std::size_t classes_;
    std::size_t height_;
    std::size_t width_;
    std::vector<float> data_;
};

/// Per-pixel class indices; pixels equal to ignore_index are excluded from
/// losses.
class LabelMap {
public:
    static constexpr std::int32_t kDefaultIgnore = 255;

    LabelMap(std::size_t height, std::size_t width, std::vector<std::int32_t> labels,
             std::int32_t ignore_index = kDefaultIgnore);

    /// Reads labels from a single-channel FeatureMap holding integral values.
    static LabelMap from_feature_map(const FeatureMap& map,
                                     std::int32_t ignore_index = kDefaultIgnore);
    [[nodiscard]] FeatureMap to_feature_map() const;

    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::int32_t ignore_index() const noexcept { return ignore_index_; }
    [[nodiscard]] std::span<const std::int32_t> labels() const noexcept { return labels_; }

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<std::int32_t> labels_;
    std::int32_t ignore_index_;
};

}  // namespace texkd
