#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkd/distill_loss.hpp"
#include "texkd/statexture.hpp"

namespace texkd::cli {

/// A tunable was given a value outside its domain, or an unknown key was used.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error("invalid value for '" + field + "': " + what),
          field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    // statistical branch
    std::size_t n_levels = 50;
    double alpha = 0.3;
    double theta = 0.9;
    std::optional<double> delta;  // 1 / (2N) unless set
    int iterations = 1;
    double tau = 0.1;
    std::size_t regions = 16;
    double oversample = 3.0;
    double beta = 0.75;
    std::vector<double> anchor_scales = {0.05, 0.1, 0.2};
    std::vector<double> aspect_ratios = {0.5, 1.0, 2.0};

    // structural branch
    std::vector<int> levels_m = {4, 3};
    std::size_t downsample = 2;

    // losses
    LossWeights weights;
    std::int32_t ignore_index = LabelMap::kDefaultIgnore;
    std::uint64_t discriminator_seed = 0x5eedULL;

    std::uint64_t seed = 0;

    /// Assigns one field from its textual form. Keys match the long flag
    /// names without the leading dashes.
    void set(const std::string& key, const std::string& value);

    /// Checks every field against its domain; throws ConfigError naming the
    /// first offending field.
    void validate() const;

    [[nodiscard]] double effective_delta() const;
    [[nodiscard]] StatConfig stat_config() const;
};

/// Every key accepted by RunConfig::set, in a stable order.
const std::vector<std::string>& config_keys();

/// Parses a line-oriented `key = value` file; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);

}  // namespace texkd::cli
