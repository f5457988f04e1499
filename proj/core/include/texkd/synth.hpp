#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "texkd/feature_map.hpp"

namespace texkd::synth {

enum class Pattern { Constant, Ramp, Grating, Bimodal, Noise };

Pattern parse_pattern(const std::string& name);
std::string pattern_name(Pattern p);

struct SynthSpec {
    Pattern pattern = Pattern::Grating;
    Shape dims{3, 64, 64};
    // Grating: stripe orientation in degrees; 90 gives vertical stripes
    // (variation along the width only), 0 gives horizontal stripes.
    double angle_deg = 90.0;
    double cycles = 4.0;   // grating periods across the image
    double offset = 0.0;   // grating DC level added to every channel
    float value = 1.0f;    // constant pattern level
    double sigma = 0.0;    // student noise scale
    std::uint64_t seed = 0;

    void validate() const;
};

struct FeaturePair {
    FeatureMap teacher;
    FeatureMap student;
};

/// Teacher is the clean pattern; student adds seeded N(0, sigma^2) noise.
/// For a fixed seed the noise field is the same for every sigma, only scaled.
FeaturePair generate_pair(const SynthSpec& spec);

FeatureMap generate_pattern(const SynthSpec& spec);

/// Two tight Gaussian clusters (means `lo`, `hi`, spread `spread`),
/// `fraction_hi` of the samples drawn from the upper one.
std::vector<double> bimodal_samples(std::size_t count, double lo, double hi, double spread,
                                    double fraction_hi, std::uint64_t seed);

}  // namespace texkd::synth
