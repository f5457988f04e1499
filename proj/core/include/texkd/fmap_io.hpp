#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkd/feature_map.hpp"

namespace texkd {

// FMAP layout: "FMAP", then C, H, W as little-endian u32, then C*H*W
// little-endian IEEE-754 binary32 values, channel-major.
inline constexpr std::size_t kFmapHeaderBytes = 16;

class FormatError : public std::runtime_error {
public:
    enum class Kind {
        Io,
        BadMagic,
        BadDimensions,
        DimensionOverflow,
        TruncatedPayload,
        TrailingData,
        NonFiniteValue,
        UnsupportedFormat,
        MalformedHeader,
    };

    FormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

std::vector<std::uint8_t> encode_fmap(const FeatureMap& map);
FeatureMap decode_fmap(std::span<const std::uint8_t> bytes);

FeatureMap read_fmap(const std::filesystem::path& path);
void write_fmap(const FeatureMap& map, const std::filesystem::path& path);

/// Binary PGM (P5) or PPM (P6), 8-bit, scaled to [0,1].
FeatureMap read_image(const std::filesystem::path& path);
FeatureMap decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace texkd
