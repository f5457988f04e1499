// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "support.hpp"
#include "texkd/contourlet.hpp"
#include "texkd/distill_loss.hpp"
#include "texkd/oracles.hpp"
#include "texkd/statexture.hpp"
#include "texkd/synth.hpp"

namespace texkd {
namespace {

using testing::max_abs_diff;
using testing::random_map;
using testing::random_values;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Outcome lp_reconstruction() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Shape s{1 + rng() % 3, 2 + rng() % 63, 2 + rng() % 63};
        const auto x = random_map(s, rng());
        worst = std::max(worst, max_abs_diff(lp_reconstruct(lp_decompose(x)), x));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-5 && secs < 10.0,
            "max err " + num(worst) + " (< 1e-5), " + num(secs) + " s (< 10 s)"};
}

Outcome dfb_completeness() {
    double worst = 0.0;
    bool counts = true;
    for (int m = 1; m <= 4; ++m) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto x = random_map({2, 24 + 8 * seed, 32}, seed * 10 + m);
            const auto bands = dfb_decompose(x, m);
            counts = counts && bands.bands.size() == (std::size_t{1} << m);
            worst = std::max(worst, max_abs_diff(dfb_reconstruct(bands), x));
        }
    }
    return {counts && worst < 1e-4, std::string("2^m bands ") + (counts ? "yes" : "no") +
                                        ", max sum err " + num(worst) + " (< 1e-4)"};
}

double group_share(const FeatureMap& x, int m, bool vertical) {
    const auto bands = dfb_decompose(x, m);
    const auto e = band_energies(bands, x);
    const auto half = static_cast<std::ptrdiff_t>(bands.vertical_group_size());
    const double total = std::accumulate(e.begin(), e.end(), 0.0);
    const double part = vertical ? std::accumulate(e.begin(), e.begin() + half, 0.0)
                                 : std::accumulate(e.begin() + half, e.end(), 0.0);
    return part / total;
}

Outcome directional_selectivity() {
    double worst_v = 1.0;
    double worst_h = 1.0;
    for (int m : {2, 3, 4}) {
        synth::SynthSpec spec;
        spec.dims = {1, 64, 64};
        spec.angle_deg = 90.0;
        worst_v = std::min(worst_v, group_share(synth::generate_pattern(spec), m, true));
        spec.angle_deg = 0.0;
        worst_h = std::min(worst_h, group_share(synth::generate_pattern(spec), m, false));
    }
    return {worst_v >= 0.9 && worst_h >= 0.9,
            "vertical share " + num(worst_v) + ", horizontal share " + num(worst_h) + " (>= 0.9)"};
}

Outcome denoise_mass() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> count(0.0, 100.0);
    std::uniform_real_distribution<double> th(0.01, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> c(1 + rng() % 100);
        for (auto& v : c) v = count(rng);
        const auto out = denoise_counts(c, th(rng));
        worst = std::max(worst, std::abs(std::accumulate(c.begin(), c.end(), 0.0) -
                                         std::accumulate(out.begin(), out.end(), 0.0)));
    }
    const std::vector<double> hand = {10, 2, 2, 2};
    const std::vector<double> expect = {6.25, 3.25, 3.25, 3.25};
    const auto got = denoise_counts(hand, 0.5);
    double hand_err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) hand_err = std::max(hand_err, std::abs(got[i] - expect[i]));
    return {worst < 1e-4 && hand_err <= 1e-9,
            "max mass drift " + num(worst) + " (< 1e-4), hand case err " + num(hand_err) +
                " (<= 1e-9)"};
}

Outcome quantization_oracle() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_values(64 + seed * 7, seed, -1.0, 1.0);
        for (std::size_t n : {4u, 16u, 50u}) {
            for (const auto& levels :
                 {uniform_levels(s, n), heuristic_levels(s, n, 0.3, 1.0 / (2.0 * n))}) {
                const auto counts = quantize(s, levels).counts;
                const auto ref = oracle::histogram(s, levels.levels, levels.peak_width);
                for (std::size_t l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(counts[l] - ref[l]));
            }
        }
    }
    return {worst < 1e-4, "max count diff " + num(worst) + " (< 1e-4)"};
}

std::size_t unquantized(std::span<const double> s, const QuantLevels& levels) {
    const auto e = quantize(s, levels);
    std::size_t n = 0;
    for (std::size_t i = 0; i < e.n_pixels; ++i) {
        bool any = false;
        for (std::size_t l = 0; l < e.n_levels; ++l) any = any || e.at(l, i) != 0.0;
        n += any ? 0 : 1;
    }
    return n;
}

Outcome heuristic_improvement() {
    int wins = 0;
    double mean_h = 0.0;
    double mean_u = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = synth::bimodal_samples(4096, -0.6, 0.5, 0.05, 0.3, seed);
        const double n = static_cast<double>(s.size());
        const double h = unquantized(s, heuristic_levels(s, 50, 0.3, 0.01)) / n;
        const double u = unquantized(s, uniform_levels(s, 50)) / n;
        wins += h < u ? 1 : 0;
        mean_h += h / 20;
        mean_u += u / 20;
    }
    return {wins >= 19, std::to_string(wins) + "/20 seeds improved (>= 19), mean unquantized " +
                            num(mean_h) + " vs " + num(mean_u)};
}

Outcome sampler_contract() {
    bool counts = true;
    SimilarityMap s{64, 64, std::vector<double>(64 * 64, 0.5)};
    auto fill_quadrant = [&](std::uint64_t seed) {
        std::fill(s.values.begin(), s.values.end(), 0.5);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (std::size_t y = 0; y < 32; ++y)
            for (std::size_t x = 0; x < 32; ++x) s.values[y * 64 + x] = d(rng);
    };
    fill_quadrant(99);
    for (double k : {2.0, 3.0})
        for (std::size_t m : {8u, 16u})
            for (double beta : {0.5, 0.75}) {
                SamplerConfig cfg;
                cfg.oversample = k;
                cfg.regions = m;
                cfg.beta = beta;
                const auto set = sample_regions(s, cfg);
                const auto imp = static_cast<std::size_t>(std::floor(beta * m));
                std::set<std::size_t> unique;
                for (const auto& p : set.ordered()) unique.insert(p.index);
                counts = counts && set.candidates == static_cast<std::size_t>(k * m) &&
                         set.importance.size() == imp && set.coverage.size() == m - imp &&
                         unique.size() == m;
            }
    std::size_t inside = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        fill_quadrant(seed + 500);
        SamplerConfig cfg;
        cfg.seed = seed;
        for (const auto& p : sample_regions(s, cfg).importance) {
            inside += p.region.center_row < 32 && p.region.center_col < 32 ? 1 : 0;
            ++total;
        }
    }
    const double share = static_cast<double>(inside) / static_cast<double>(total);
    return {counts && share >= 0.8, std::string("grid counts ") + (counts ? "exact" : "WRONG") +
                                        ", quadrant share " + num(share) + " (>= 0.8)"};
}

Outcome loss_suite() {
    const auto x = random_map({3, 16, 16}, 8);
    StatConfig cfg;
    const auto st = extract_statistical(x, cfg);
    const auto probs = softmax_response(x);
    const ProbMap onehot(2, 1, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    const double identity = std::abs(loss_structural(x, x)) + std::abs(loss_statistical(st, st)) +
                            std::abs(loss_response(probs, probs)) +
                            std::abs(loss_segmentation(onehot, LabelMap(1, 2, {0, 1})));
    const double kl = loss_response(ProbMap(2, 1, 1, {1.0f, 0.0f}), ProbMap(2, 1, 1, {0.5f, 0.5f}));
    const double total = loss_total({1, 1, 1, 1, 1}, {0.9, 1.15, 5, 0.01}).total;
    const bool ok =
        identity == 0.0 && std::abs(kl - std::log(2.0)) < 1e-6 && std::abs(total - 8.04) < 1e-9;
    return {ok, "identity sum " + num(identity) + ", KL " + num(kl) + " (ln 2 +- 1e-6), total " +
                    num(total) + " (8.04 +- 1e-9)"};
}

FeatureMap pipeline_teacher(double sigma, bool student) {
    synth::SynthSpec spec;
    spec.dims = {3, 64, 64};
    spec.offset = 1.0;
    spec.sigma = sigma;
    spec.seed = 7;
    auto pair = synth::generate_pair(spec);
    return student ? pair.student : pair.teacher;
}

Outcome monotonicity() {
    cli::RunConfig cfg;
    double prev_str = -1.0;
    double prev_sta = -1.0;
    bool ok = true;
    std::string detail;
    for (double sigma : {0.01, 0.1, 1.0}) {
        const auto r = cli::cmd_pipeline(pipeline_teacher(sigma, false),
                                         pipeline_teacher(sigma, true), cfg, std::nullopt);
        ok = ok && r.parts.l_str > prev_str && r.parts.l_sta > prev_sta;
        prev_str = r.parts.l_str;
        prev_sta = r.parts.l_sta;
        detail += "sigma " + num(sigma) + ": l_str " + num(r.parts.l_str) + ", l_sta " +
                  num(r.parts.l_sta) + "; ";
    }
    return {ok, detail + "strictly increasing"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    testing::ScratchDir dir("acceptance");
    cli::RunConfig cfg;
    const auto t = pipeline_teacher(0.1, false);
    const auto s = pipeline_teacher(0.1, true);
    const auto a = cli::cmd_pipeline(t, s, cfg, dir.path() / "a");
    const auto b = cli::cmd_pipeline(t, s, cfg, dir.path() / "b");
    std::size_t files = 0;
    std::size_t diffs = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path() / "a")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto rel = std::filesystem::relative(e.path(), dir.path() / "a");
        diffs += slurp(e.path()) == slurp(dir.path() / "b" / rel) ? 0 : 1;
    }
    const bool same_report = cli::format_report(a, {}) == cli::format_report(b, {});
    return {diffs == 0 && files > 0 && same_report,
            std::to_string(files) + " files compared, " + std::to_string(diffs) +
                " differ, reports " + (same_report ? "identical" : "differ")};
}

}  // namespace
}  // namespace texkd

int main() {
    using namespace texkd;
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"LP perfect reconstruction", lp_reconstruction},
        {"DFB completeness and count", dfb_completeness},
        {"Directional selectivity", directional_selectivity},
        {"Denoise mass conservation", denoise_mass},
        {"Quantization oracle equivalence", quantization_oracle},
        {"Heuristic-init improvement", heuristic_improvement},
        {"Sampler contract", sampler_contract},
        {"Loss suite", loss_suite},
        {"End-to-end monotonicity", monotonicity},
        {"Determinism", determinism},
    };
    int failures = 0;
    int id = 1;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id++, name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
                std::size(criteria));
    return failures == 0 ? 0 : 1;
}
