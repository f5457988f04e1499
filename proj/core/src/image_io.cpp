#include <cctype>

#include "texkd/fmap_io.hpp"

namespace texkd {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t next_uint() {
        skip_space_and_comments();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (++digits > 9) {
                malformed("header number too long");
            }
            ++pos_;
        }
        if (digits == 0) {
            malformed("expected a number in image header");
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            malformed("missing whitespace before raster");
        }
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    [[noreturn]] static void malformed(const std::string& what) {
        throw FormatError(FormatError::Kind::MalformedHeader, what);
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

FeatureMap decode_image(std::span<const std::uint8_t> bytes) {
    using Kind = FormatError::Kind;
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw FormatError(Kind::UnsupportedFormat, "not a PGM/PPM file");
    }
    std::size_t channels = 0;
    if (bytes[1] == '5') {
        channels = 1;
    } else if (bytes[1] == '6') {
        channels = 3;
    } else {
        throw FormatError(Kind::UnsupportedFormat, "only binary P5/P6 images are supported");
    }
    HeaderReader header(bytes);
    const auto width = header.next_uint();
    const auto height = header.next_uint();
    const auto maxval = header.next_uint();
    if (width == 0 || height == 0) {
        throw FormatError(Kind::MalformedHeader, "zero image dimension");
    }
    if (maxval == 0) {
        throw FormatError(Kind::MalformedHeader, "maxval must be positive");
    }
    if (maxval > 255) {
        throw FormatError(Kind::UnsupportedFormat, "only 8-bit images are supported");
    }
    const auto offset = header.raster_offset();
    const std::size_t plane = width * height;
    if (bytes.size() - offset < plane * channels) {
        throw FormatError(Kind::TruncatedPayload, "truncated image raster");
    }
    std::vector<float> data(plane * channels);
    for (std::size_t i = 0; i < plane; ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            data[c * plane + i] = static_cast<float>(bytes[offset + i * channels + c]) / 255.0f;
        }
    }
    return FeatureMap({channels, height, width}, std::move(data));
}

FeatureMap read_image(const std::filesystem::path& path) {
    return decode_image(read_file_bytes(path));
}

}  // namespace texkd
