#include <algorithm>
#include <cmath>
#include <numeric>

#include "texkd/statexture.hpp"

namespace texkd {

namespace {

void require_values(std::span<const double> s_values) {
    if (s_values.empty()) {
        throw StatTextureError("cannot quantize an empty value set");
    }
}

// Re-quantizes one group: the group's bins are laid end to end and `count`
// levels are placed uniformly along that concatenated length, using the same
// "step * t" placement as the uniform formula.
std::vector<double> spread_over_bins(const std::vector<double>& bin_lo,
                                     const std::vector<double>& bin_hi,
                                     const std::vector<std::size_t>& members, std::size_t count) {
    double total = 0.0;
    for (auto j : members) {
        total += bin_hi[j] - bin_lo[j];
    }
    std::vector<double> out;
    out.reserve(count);
    if (total <= 0.0) {
        out.assign(count, bin_hi[members.front()]);
        return out;
    }
    std::size_t cursor = 0;
    double consumed = 0.0;
    for (std::size_t t = 1; t <= count; ++t) {
        const double u = total * static_cast<double>(t) / static_cast<double>(count);
        while (cursor + 1 < members.size() &&
               consumed + (bin_hi[members[cursor]] - bin_lo[members[cursor]]) < u) {
            consumed += bin_hi[members[cursor]] - bin_lo[members[cursor]];
            ++cursor;
        }
        const auto j = members[cursor];
        out.push_back(std::min(bin_hi[j], bin_lo[j] + (u - consumed)));
    }
    return out;
}

QuantLevels fallback_levels(std::span<const double> s_values, std::size_t n) {
    auto levels = uniform_levels(s_values, n);
    levels.fallback = true;
    return levels;
}

}  // namespace

QuantLevels uniform_levels(std::span<const double> s_values, std::size_t n) {
    require_values(s_values);
    if (n < 1) {
        throw StatTextureError("level count must be at least 1");
    }
    const auto [lo_it, hi_it] = std::minmax_element(s_values.begin(), s_values.end());
    const double lo = *lo_it;
    const double step = (*hi_it - lo) / static_cast<double>(n);
    QuantLevels q;
    q.levels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.levels[i] = step * static_cast<double>(i + 1) + lo;
    }
    q.peak_width.assign(n, static_cast<double>(n));
    return q;
}

EncodingMatrix quantize(std::span<const double> s_values, const QuantLevels& levels) {
    const auto n = levels.size();
    if (n == 0 || levels.peak_width.size() != n) {
        throw StatTextureError("quantization levels are empty or inconsistent");
    }
    if (!std::is_sorted(levels.levels.begin(), levels.levels.end())) {
        throw StatTextureError("quantization levels must be ascending");
    }
    EncodingMatrix e;
    e.n_levels = n;
    e.n_pixels = s_values.size();
    e.values.assign(n * e.n_pixels, 0.0);
    e.counts.assign(n, 0.0);

    auto activate = [&](std::size_t level, std::size_t pixel, double s) {
        const double diff = levels.levels[level] - s;
        const double half = 0.5 / levels.peak_width[level];
        if (-half <= diff && diff < half) {
            e.values[level * e.n_pixels + pixel] = 1.0 - std::abs(diff);
        }
    };
    for (std::size_t i = 0; i < e.n_pixels; ++i) {
        const double s = s_values[i];
        const auto upper = static_cast<std::size_t>(
            std::upper_bound(levels.levels.begin(), levels.levels.end(), s) -
            levels.levels.begin());
        if (upper > 0) {
            activate(upper - 1, i, s);
        }
        if (upper < n) {
            activate(upper, i, s);
        }
    }
    for (std::size_t l = 0; l < n; ++l) {
        const auto row = std::span<const double>(e.values).subspan(l * e.n_pixels, e.n_pixels);
        e.counts[l] = std::accumulate(row.begin(), row.end(), 0.0);
    }
    return e;
}

QuantLevels heuristic_levels(std::span<const double> s_values, std::size_t n, double alpha,
                             double delta, int iterations) {
    require_values(s_values);
    if (n < 2) {
        throw StatTextureError("heuristic initialization needs at least 2 levels");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw StatTextureError("alpha must lie in (0, 1)");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw StatTextureError("delta must be positive");
    }
    if (iterations < 1) {
        throw StatTextureError("iteration count must be at least 1");
    }
    const auto [lo_it, hi_it] = std::minmax_element(s_values.begin(), s_values.end());
    const double lo = *lo_it;
    if (*hi_it == lo) {
        return fallback_levels(s_values, n);
    }

    const auto n_sparse = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(alpha * static_cast<double>(n))), 1, n - 1);
    const std::size_t n_dense = n - n_sparse;

    QuantLevels current = uniform_levels(s_values, 2 * n);
    for (int it = 0; it < iterations; ++it) {
        const auto enc = quantize(s_values, current);
        const double total = std::accumulate(enc.counts.begin(), enc.counts.end(), 0.0);
        if (total <= 0.0) {
            return fallback_levels(s_values, n);
        }
        const auto m = current.size();
        std::vector<std::size_t> sparse;
        std::vector<std::size_t> dense;
        for (std::size_t j = 0; j < m; ++j) {
            (enc.counts[j] / total < delta ? sparse : dense).push_back(j);
        }
        if (sparse.empty() || dense.empty()) {
            return fallback_levels(s_values, n);
        }
        // Level j owns the value interval (L_{j-1}, L_j], the first one
        // starting at the minimum.
        std::vector<double> bin_lo(m);
        std::vector<double> bin_hi(current.levels);
        for (std::size_t j = 0; j < m; ++j) {
            bin_lo[j] = j == 0 ? lo : current.levels[j - 1];
        }
        const auto sparse_levels = spread_over_bins(bin_lo, bin_hi, sparse, n_sparse);
        const auto dense_levels = spread_over_bins(bin_lo, bin_hi, dense, n_dense);

        struct Entry {
            double value;
            double width;
            int group;
        };
        std::vector<Entry> merged;
        merged.reserve(n);
        for (double v : sparse_levels) {
            merged.push_back({v, static_cast<double>(n_sparse), 0});
        }
        for (double v : dense_levels) {
            merged.push_back({v, static_cast<double>(n_dense), 1});
        }
        std::stable_sort(merged.begin(), merged.end(),
                         [](const Entry& a, const Entry& b) { return a.value < b.value; });
        QuantLevels next;
        for (const auto& entry : merged) {
            next.levels.push_back(entry.value);
            next.peak_width.push_back(entry.width);
            next.group.push_back(entry.group);
        }
        current = std::move(next);
    }
    return current;
}

std::vector<double> denoise_counts(std::span<const double> counts, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw StatTextureError("theta must lie in (0, 1]");
    }
    if (counts.empty()) {
        return {};
    }
    const double clip = theta * *std::max_element(counts.begin(), counts.end());
    double extra = 0.0;
    for (double c : counts) {
        extra += std::max(c - clip, 0.0);
    }
    const double share = extra / static_cast<double>(counts.size());
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = (counts[i] > clip ? clip : counts[i]) + share;
    }
    return out;
}

EncodingMatrix denoise(const EncodingMatrix& e, double theta) {
    const auto new_counts = denoise_counts(e.counts, theta);
    EncodingMatrix out = e;
    out.counts = new_counts;
    if (e.n_levels == 0 || e.n_pixels == 0) {
        return out;
    }
    for (std::size_t l = 0; l < e.n_levels; ++l) {
        auto* row = out.values.data() + l * e.n_pixels;
        if (e.counts[l] > 0.0) {
            const double scale = new_counts[l] / e.counts[l];
            for (std::size_t i = 0; i < e.n_pixels; ++i) {
                row[i] *= scale;
            }
        } else {
            const double offset = new_counts[l] / static_cast<double>(e.n_pixels);
            for (std::size_t i = 0; i < e.n_pixels; ++i) {
                row[i] = offset;
            }
        }
    }
    return out;
}

}  // namespace texkd
