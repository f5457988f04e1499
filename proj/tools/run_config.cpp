#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "texkd/fmap_io.hpp"

namespace texkd::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const auto s = trim(text);
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError(key, "cannot parse '" + text + "' as a number");
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number<T>(key, item));
    }
    if (out.empty()) {
        throw ConfigError(key, "expected a comma-separated list");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& text) {
    const double v = parse_number<double>(key, text);
    if (!std::isfinite(v)) {
        throw ConfigError(key, "must be finite");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const auto s = trim(text);
    if (!s.empty() && s.front() == '-') {
        throw ConfigError(key, "must be non-negative");
    }
    return parse_number<std::size_t>(key, s);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "n-levels",   "alpha",         "theta",         "delta",      "iterations",
        "tau",        "regions",       "oversample",    "beta",       "anchor-scales",
        "aspect-ratios", "levels-m",   "downsample",    "lambda",     "lambda-str",
        "lambda-sta", "lambda-re",     "lambda-adv",    "ignore-index", "discriminator-seed",
        "seed",
    };
    return keys;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "n-levels") {
        n_levels = parse_count(key, value);
    } else if (key == "alpha") {
        alpha = parse_real(key, value);
    } else if (key == "theta") {
        theta = parse_real(key, value);
    } else if (key == "delta") {
        delta = parse_real(key, value);
    } else if (key == "iterations") {
        iterations = parse_number<int>(key, value);
    } else if (key == "tau") {
        tau = parse_real(key, value);
    } else if (key == "regions") {
        regions = parse_count(key, value);
    } else if (key == "oversample") {
        oversample = parse_real(key, value);
    } else if (key == "beta") {
        beta = parse_real(key, value);
    } else if (key == "anchor-scales") {
        anchor_scales = parse_list<double>(key, value);
    } else if (key == "aspect-ratios") {
        aspect_ratios = parse_list<double>(key, value);
    } else if (key == "levels-m") {
        levels_m = parse_list<int>(key, value);
    } else if (key == "downsample") {
        downsample = parse_count(key, value);
    } else if (key == "lambda") {
        const auto l = parse_list<double>(key, value);
        if (l.size() != 4) {
            throw ConfigError(key, "expected four comma-separated weights");
        }
        weights = {l[0], l[1], l[2], l[3]};
    } else if (key == "lambda-str") {
        weights.structural = parse_real(key, value);
    } else if (key == "lambda-sta") {
        weights.statistical = parse_real(key, value);
    } else if (key == "lambda-re") {
        weights.response = parse_real(key, value);
    } else if (key == "lambda-adv") {
        weights.adversarial = parse_real(key, value);
    } else if (key == "ignore-index") {
        ignore_index = parse_number<std::int32_t>(key, value);
    } else if (key == "discriminator-seed") {
        discriminator_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, value);
    } else {
        throw ConfigError(key, "unknown configuration key");
    }
}

double RunConfig::effective_delta() const {
    return delta.value_or(1.0 / (2.0 * static_cast<double>(n_levels)));
}

void RunConfig::validate() const {
    if (n_levels < 2) throw ConfigError("n-levels", "must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("theta", "must lie in (0, 1]");
    if (delta && !(*delta > 0.0)) throw ConfigError("delta", "must be positive");
    if (iterations < 1) throw ConfigError("iterations", "must be at least 1");
    if (!(tau > 0.0)) throw ConfigError("tau", "must be positive");
    if (regions < 1) throw ConfigError("regions", "must be at least 1");
    if (!(oversample > 1.0)) throw ConfigError("oversample", "must be greater than 1");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in [0, 1]");
    for (double s : anchor_scales) {
        if (!(s > 0.0)) throw ConfigError("anchor-scales", "every scale must be positive");
    }
    for (double r : aspect_ratios) {
        if (!(r > 0.0)) throw ConfigError("aspect-ratios", "every ratio must be positive");
    }
    if (levels_m.empty()) throw ConfigError("levels-m", "at least one level is required");
    for (int m : levels_m) {
        if (m < 1 || m > 12) throw ConfigError("levels-m", "tree depths must lie in [1, 12]");
    }
    if (downsample < 2) throw ConfigError("downsample", "must be at least 2");
    const std::pair<const char*, double> lambdas[] = {
        {"lambda-str", weights.structural},
        {"lambda-sta", weights.statistical},
        {"lambda-re", weights.response},
        {"lambda-adv", weights.adversarial},
    };
    for (const auto& [name, w] : lambdas) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError(name, "must be non-negative");
    }
}

StatConfig RunConfig::stat_config() const {
    StatConfig cfg;
    cfg.sampler.regions = regions;
    cfg.sampler.oversample = oversample;
    cfg.sampler.beta = beta;
    cfg.sampler.anchor_scales = anchor_scales;
    cfg.sampler.aspect_ratios = aspect_ratios;
    cfg.sampler.seed = seed;
    cfg.n_levels = n_levels;
    cfg.alpha = alpha;
    cfg.theta = theta;
    cfg.delta = delta;
    cfg.iterations = iterations;
    cfg.tau = tau;
    return cfg;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config", "line " + std::to_string(lineno) + " is not 'key = value'");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError(FormatError::Kind::Io, "config file not found: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace texkd::cli
