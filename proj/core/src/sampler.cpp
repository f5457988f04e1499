#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "texkd/statexture.hpp"

namespace texkd {

namespace {

std::size_t anchor_side(double base, double factor, std::size_t limit) {
    const auto side = static_cast<std::size_t>(std::max(2L, std::lround(base * factor)));
    return std::min(side, limit);
}

// Centers an anchor on the point, then shifts it back inside the map.
Rect place_anchor(std::size_t row, std::size_t col, std::size_t ah, std::size_t aw,
                  std::size_t height, std::size_t width) {
    auto clamp_start = [](std::size_t center, std::size_t side, std::size_t limit) {
        const std::size_t half = side / 2;
        const std::size_t start = center >= half ? center - half : 0;
        return std::min(start, limit - side);
    };
    return {clamp_start(row, ah, height), clamp_start(col, aw, width), ah, aw};
}

struct Candidate {
    std::size_t index;
    RegionProposal best;
};

}  // namespace

void SamplerConfig::validate() const {
    if (regions < 1) {
        throw StatTextureError("M (regions) must be at least 1");
    }
    if (!(oversample > 1.0) || !std::isfinite(oversample)) {
        throw StatTextureError("k (oversample) must be greater than 1");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw StatTextureError("beta must lie in [0, 1]");
    }
    if (anchor_scales.empty() || aspect_ratios.empty()) {
        throw StatTextureError("at least one anchor scale and aspect ratio are required");
    }
    for (double s : anchor_scales) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw StatTextureError("anchor scales must be positive");
        }
    }
    for (double r : aspect_ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw StatTextureError("aspect ratios must be positive");
        }
    }
}

double region_std(const SimilarityMap& s, const Rect& box) {
    // Shifted sums: exact zero for constant regions.
    const double pivot = s.at(box.top, box.left);
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t y = box.top; y < box.top + box.height; ++y) {
        for (std::size_t x = box.left; x < box.left + box.width; ++x) {
            const double d = s.at(y, x) - pivot;
            sum += d;
            sq += d * d;
        }
    }
    const auto n = static_cast<double>(box.height * box.width);
    return std::sqrt(std::max(0.0, (sq - sum * sum / n) / n));
}

std::vector<double> region_values(const SimilarityMap& s, const Rect& box) {
    if (box.height == 0 || box.width == 0 || box.top + box.height > s.height ||
        box.left + box.width > s.width) {
        throw StatTextureError("region lies outside the similarity map");
    }
    std::vector<double> out;
    out.reserve(box.height * box.width);
    for (std::size_t y = box.top; y < box.top + box.height; ++y) {
        for (std::size_t x = box.left; x < box.left + box.width; ++x) {
            out.push_back(s.at(y, x));
        }
    }
    return out;
}

SampleSet sample_regions(const SimilarityMap& s, const SamplerConfig& cfg) {
    cfg.validate();
    const std::size_t pixels = s.height * s.width;
    const auto n_candidates =
        static_cast<std::size_t>(std::floor(cfg.oversample * static_cast<double>(cfg.regions)));
    if (n_candidates > pixels) {
        throw StatTextureError("k*M = " + std::to_string(n_candidates) +
                               " exceeds the pixel count " + std::to_string(pixels));
    }
    const auto n_importance =
        static_cast<std::size_t>(std::floor(cfg.beta * static_cast<double>(cfg.regions)));

    std::mt19937_64 rng(cfg.seed);
    // Partial Fisher-Yates: the first n_candidates slots are a uniform draw
    // without replacement.
    std::vector<std::size_t> pool(pixels);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_candidates; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pixels - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }

    const auto base = static_cast<double>(std::min(s.height, s.width));
    std::vector<Candidate> candidates;
    candidates.reserve(n_candidates);
    for (std::size_t i = 0; i < n_candidates; ++i) {
        const std::size_t idx = pool[i];
        const std::size_t row = idx / s.width;
        const std::size_t col = idx % s.width;
        Candidate cand{idx, {row, col, {}, -1.0}};
        for (double scale : cfg.anchor_scales) {
            for (double ratio : cfg.aspect_ratios) {
                const double root = std::sqrt(ratio);
                const auto ah = anchor_side(base * scale, root, s.height);
                const auto aw = anchor_side(base * scale, 1.0 / root, s.width);
                const Rect box = place_anchor(row, col, ah, aw, s.height, s.width);
                const double score = region_std(s, box);
                if (score > cand.best.score) {
                    cand.best.box = box;
                    cand.best.score = score;
                }
            }
        }
        candidates.push_back(cand);
    }

    std::vector<std::size_t> order(n_candidates);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = candidates[a];
        const auto& cb = candidates[b];
        if (ca.best.score != cb.best.score) {
            return ca.best.score > cb.best.score;
        }
        return ca.index < cb.index;
    });

    SampleSet set;
    set.height = s.height;
    set.width = s.width;
    set.m_total = cfg.regions;
    set.candidates = n_candidates;
    set.seed = cfg.seed;
    std::vector<bool> taken(n_candidates, false);
    for (std::size_t r = 0; r < n_importance; ++r) {
        const auto& c = candidates[order[r]];
        taken[order[r]] = true;
        set.importance.push_back({c.index, PointKind::Importance, c.best});
    }

    std::vector<std::size_t> rest;
    rest.reserve(n_candidates - n_importance);
    for (std::size_t i = 0; i < n_candidates; ++i) {
        if (!taken[i]) {
            rest.push_back(i);
        }
    }
    const std::size_t n_coverage = cfg.regions - n_importance;
    for (std::size_t i = 0; i < n_coverage; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, rest.size() - 1);
        std::swap(rest[i], rest[pick(rng)]);
        const auto& c = candidates[rest[i]];
        set.coverage.push_back({c.index, PointKind::Coverage, c.best});
    }
    return set;
}

std::vector<SampledPoint> SampleSet::ordered() const {
    std::vector<SampledPoint> out(importance);
    out.insert(out.end(), coverage.begin(), coverage.end());
    return out;
}

std::uint64_t SampleSet::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(height);
    mix(width);
    mix(m_total);
    mix(candidates);
    mix(seed);
    for (const auto& p : ordered()) {
        mix(p.index);
        mix(p.kind == PointKind::Importance ? 1 : 2);
        mix(p.region.box.top);
        mix(p.region.box.left);
        mix(p.region.box.height);
        mix(p.region.box.width);
    }
    return h;
}

}  // namespace texkd
