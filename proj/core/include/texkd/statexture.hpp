#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkd/feature_map.hpp"

namespace texkd {

class StatTextureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cosine similarity of every pixel's channel vector to the spatial mean
/// vector. Values lie in [-1, 1]; zero-norm vectors map to 0.
struct SimilarityMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t y, std::size_t x) const { return values[y * width + x]; }
};

SimilarityMap self_similarity(const FeatureMap& a);

// ---------------------------------------------------------------------------
// Anchor-based adaptive importance sampling

/// Axis-aligned box, top-left anchored, fully inside the map.
struct Rect {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct RegionProposal {
    std::size_t center_row = 0;
    std::size_t center_col = 0;
    Rect box;
    double score = 0.0;  // population std of the similarity values in `box`
};

enum class PointKind { Importance, Coverage };

struct SampledPoint {
    std::size_t index = 0;  // linear pixel index, row-major
    PointKind kind = PointKind::Importance;
    RegionProposal region;
};

struct SamplerConfig {
    std::size_t regions = 16;  // M
    double oversample = 3.0;   // k
    double beta = 0.75;
    std::vector<double> anchor_scales = {0.05, 0.1, 0.2};  // fractions of min(H, W)
    std::vector<double> aspect_ratios = {0.5, 1.0, 2.0};   // height / width
    std::uint64_t seed = 0;

    void validate() const;
};

struct SampleSet {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t m_total = 0;
    std::size_t candidates = 0;
    std::uint64_t seed = 0;
    std::vector<SampledPoint> importance;
    std::vector<SampledPoint> coverage;

    /// Importance points first, then coverage points.
    [[nodiscard]] std::vector<SampledPoint> ordered() const;
    /// FNV-1a over geometry and selection; scores are excluded.
    [[nodiscard]] std::uint64_t digest() const;
};

/// Over-generates floor(k*M) uniform candidates, scores every candidate by its
/// best anchor, keeps the top floor(beta*M) (ties by lower pixel index) and
/// fills the rest uniformly from the leftover candidates.
SampleSet sample_regions(const SimilarityMap& s, const SamplerConfig& cfg);

/// Population standard deviation of the similarity values inside a box.
double region_std(const SimilarityMap& s, const Rect& box);
std::vector<double> region_values(const SimilarityMap& s, const Rect& box);

std::string format_sample_set(const SampleSet& set);
SampleSet parse_sample_set(const std::string& text);
SampleSet read_sample_set(const std::filesystem::path& path);
void write_sample_set(const SampleSet& set, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Quantization and counting

struct QuantLevels {
    std::vector<double> levels;      // ascending
    std::vector<double> peak_width;  // window of level n is [-0.5/w_n, 0.5/w_n)
    std::vector<int> group;          // heuristic split: 0 sparse, 1 dense; empty otherwise
    bool fallback = false;           // heuristic split degenerated to uniform levels

    [[nodiscard]] std::size_t size() const noexcept { return levels.size(); }
};

/// N x P soft assignment, row-major by level.
struct EncodingMatrix {
    std::size_t n_levels = 0;
    std::size_t n_pixels = 0;
    std::vector<double> values;
    std::vector<double> counts;

    [[nodiscard]] double at(std::size_t level, std::size_t pixel) const {
        return values[level * n_pixels + pixel];
    }
};

/// L_n = (max - min) / N * n + min for n = 1..N, all with peak width N.
QuantLevels uniform_levels(std::span<const double> s_values, std::size_t n);

/// E[n][i] = 1 - |L_n - S_i| inside level n's window. A pixel only ever
/// activates the levels bracketing it: the highest level <= S_i and the
/// lowest level > S_i. Runs of equal levels therefore act as one level.
EncodingMatrix quantize(std::span<const double> s_values, const QuantLevels& levels);

/// Over-quantizes into 2N uniform levels, splits them by count ratio against
/// delta, and redistributes alpha*N levels over the sparse group's bins and
/// the remainder over the dense group's bins. Each new level's peak width is
/// its group's level count.
QuantLevels heuristic_levels(std::span<const double> s_values, std::size_t n, double alpha,
                             double delta, int iterations = 1);

/// Intensity-limited count transform: clip at theta * max, then spread the
/// clipped excess evenly over all levels.
std::vector<double> denoise_counts(std::span<const double> counts, double theta);

/// Applies denoise_counts and rescales each row to its new count. Rows that
/// were empty receive the additive share as a uniform offset.
EncodingMatrix denoise(const EncodingMatrix& e, double theta);

inline constexpr std::size_t kDescriptorWidth = 8;

/// One propagation step over the fully connected level graph followed by a
/// fixed affine lift. Returns N x kDescriptorWidth values, row-major.
std::vector<double> graph_enhance(const EncodingMatrix& e, const QuantLevels& levels,
                                  double tau = 0.1);

// ---------------------------------------------------------------------------
// Full statistical branch

struct StatConfig {
    SamplerConfig sampler;
    std::size_t n_levels = 50;
    double alpha = 0.3;
    double theta = 0.9;
    std::optional<double> delta;  // defaults to 1 / (2N)
    int iterations = 1;
    double tau = 0.1;

    [[nodiscard]] double effective_delta() const {
        return delta.value_or(1.0 / (2.0 * static_cast<double>(n_levels)));
    }
    void validate() const;
};

struct RegionHistogram {
    std::vector<double> levels;
    std::vector<double> counts_before;
    std::vector<double> counts_after;
    bool fallback = false;
};

struct StatTexture {
    SampleSet samples;
    std::vector<FeatureMap> descriptors;   // one 1 x N x 8 map per region
    std::vector<RegionHistogram> histograms;  // empty when loaded from disk
};

/// self_similarity -> sampling (or the shared teacher SampleSet) -> per region
/// heuristic_levels -> quantize -> denoise -> graph_enhance.
StatTexture extract_statistical(const FeatureMap& a, const StatConfig& cfg,
                                const SampleSet* shared = nullptr);

}  // namespace texkd
