#include "texkd/fmap_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

namespace texkd {

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'M', 'A', 'P'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
    }
    return v;
}

std::uint32_t narrow_dim(std::size_t d) {
    if (d > std::numeric_limits<std::uint32_t>::max()) {
        throw FormatError(FormatError::Kind::DimensionOverflow,
                          "dimension does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(d);
}

}  // namespace

std::vector<std::uint8_t> encode_fmap(const FeatureMap& map) {
    std::vector<std::uint8_t> out;
    out.reserve(kFmapHeaderBytes + 4 * map.data().size());
    for (auto b : kMagic) {
        out.push_back(b);
    }
    put_u32(out, narrow_dim(map.channels()));
    put_u32(out, narrow_dim(map.height()));
    put_u32(out, narrow_dim(map.width()));
    for (float v : map.data()) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    return out;
}

FeatureMap decode_fmap(std::span<const std::uint8_t> bytes) {
    using Kind = FormatError::Kind;
    if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw FormatError(Kind::BadMagic, "bad magic");
    }
    if (bytes.size() < kFmapHeaderBytes) {
        throw FormatError(Kind::TruncatedPayload, "truncated header");
    }
    const std::uint64_t c = get_u32(bytes, 4);
    const std::uint64_t h = get_u32(bytes, 8);
    const std::uint64_t w = get_u32(bytes, 12);
    if (c == 0 || h == 0 || w == 0) {
        throw FormatError(Kind::BadDimensions, "zero dimension in header");
    }
    // c*h fits in 64 bits; guard the second product and the byte count.
    constexpr std::uint64_t kMaxElems = std::numeric_limits<std::uint64_t>::max() / 4;
    const std::uint64_t ch = c * h;
    if (ch > kMaxElems / w) {
        throw FormatError(Kind::DimensionOverflow, "dimension overflow");
    }
    const std::uint64_t n = ch * w;
    if (n > std::numeric_limits<std::size_t>::max() / 4) {
        throw FormatError(Kind::DimensionOverflow, "dimension overflow");
    }
    const std::uint64_t payload = bytes.size() - kFmapHeaderBytes;
    if (payload < 4 * n) {
        throw FormatError(Kind::TruncatedPayload, "truncated payload");
    }
    if (payload > 4 * n) {
        throw FormatError(Kind::TrailingData, "trailing bytes after payload");
    }
    std::vector<float> data(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = std::bit_cast<float>(get_u32(bytes, kFmapHeaderBytes + 4 * i));
        if (!std::isfinite(data[i])) {
            throw FormatError(Kind::NonFiniteValue,
                              "non-finite value at index " + std::to_string(i));
        }
    }
    return FeatureMap({static_cast<std::size_t>(c), static_cast<std::size_t>(h),
                       static_cast<std::size_t>(w)},
                      std::move(data));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError(FormatError::Kind::Io, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw FormatError(FormatError::Kind::Io, "read failed: " + path.string());
    }
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "write failed: " + path.string());
    }
}

FeatureMap read_fmap(const std::filesystem::path& path) {
    return decode_fmap(read_file_bytes(path));
}

void write_fmap(const FeatureMap& map, const std::filesystem::path& path) {
    write_file_bytes(path, encode_fmap(map));
}

}  // namespace texkd
