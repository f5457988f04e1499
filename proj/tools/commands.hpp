#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "texkd/distill_loss.hpp"
#include "texkd/synth.hpp"

namespace texkd::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitMismatch = 3;

/// Raised when the teacher and student artifacts cannot be compared.
class MismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace fs = std::filesystem;

/// FMAP, or binary PGM/PPM when the extension says so.
FeatureMap load_input(const fs::path& path);

/// Writes L{level}_B{band}.fmap, lowpass.fmap and manifest.txt. Returns the
/// max-abs reconstruction residual.
double cmd_decompose(const fs::path& input, const RunConfig& cfg, const fs::path& out_dir);
double write_decomposition(const FeatureMap& x, const RunConfig& cfg, const fs::path& out_dir);

/// Writes sampleset.txt, region_{i}.fmap and histogram.txt.
StatTexture cmd_stats(const fs::path& input, const RunConfig& cfg,
                      const std::optional<fs::path>& sampleset, const fs::path& out_dir);
StatTexture write_statistics(const FeatureMap& x, const RunConfig& cfg, const SampleSet* shared,
                             const fs::path& out_dir);

/// Loads both artifact directories and evaluates every term whose inputs are
/// present. Per-term problems are appended to `problems`.
LossReport cmd_loss(const fs::path& teacher_dir, const fs::path& student_dir,
                    const RunConfig& cfg, std::vector<std::string>& problems,
                    std::vector<std::string>& evaluated);

/// Runs both branches on teacher and student (student reuses the teacher's
/// SampleSet) and computes the full report. With `out_dir`, writes
/// teacher/, student/ and report.txt beneath it.
LossReport cmd_pipeline(const FeatureMap& teacher, const FeatureMap& student,
                        const RunConfig& cfg, const std::optional<fs::path>& out_dir);

void cmd_synth(const synth::SynthSpec& spec, const fs::path& out_dir);

/// Stable key=value rendering of a report.
std::string format_report(const LossReport& report, const std::vector<std::string>& evaluated);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace texkd::cli
