#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "texkd/contourlet.hpp"
#include "texkd/fmap_io.hpp"

namespace texkd::cli {

namespace {

constexpr const char* kManifest = "manifest.txt";
constexpr const char* kLowpass = "lowpass.fmap";
constexpr const char* kSampleSet = "sampleset.txt";
constexpr const char* kHistogram = "histogram.txt";
constexpr const char* kProbs = "probs.fmap";
constexpr const char* kLabels = "labels.fmap";
constexpr const char* kImage = "image.fmap";
constexpr const char* kReport = "report.txt";

std::string band_file(std::size_t level, std::size_t band) {
    return "L" + std::to_string(level) + "_B" + std::to_string(band) + ".fmap";
}

std::string region_file(std::size_t i) { return "region_" + std::to_string(i) + ".fmap"; }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "write failed: " + path.string());
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw FormatError(FormatError::Kind::Io, "cannot create " + dir.string() + ": " +
                                                     ec.message());
    }
}

template <typename Range>
std::string join_numbers(const Range& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) {
            out += ',';
        }
        out += format_number(static_cast<double>(v));
    }
    return out;
}

void emit_structural(const ContourletSet& cs, const FeatureMap& x, const fs::path& dir,
                     double residual_max, double residual_l2) {
    std::ostringstream manifest;
    manifest << "input_shape=" << to_string(x.shape()) << '\n';
    manifest << "downsample=" << cs.p << '\n';
    manifest << "levels_m=" << join_numbers(cs.levels_m) << '\n';
    manifest << "levels=" << cs.levels.size() << '\n';
    for (std::size_t n = 0; n < cs.levels.size(); ++n) {
        const auto& level = cs.levels[n];
        const auto tag = "level" + std::to_string(n + 1);
        manifest << tag << "_high_shape=" << to_string(level.lp.high.shape()) << '\n';
        manifest << tag << "_low_shape=" << to_string(level.lp.low.shape()) << '\n';
        manifest << tag << "_bands=" << level.directional.bands.size() << '\n';
        for (std::size_t b = 0; b < level.directional.bands.size(); ++b) {
            const auto name = band_file(n + 1, b);
            write_fmap(level.directional.bands[b], dir / name);
            manifest << name << '=' << to_string(level.directional.bands[b].shape()) << '\n';
        }
    }
    write_fmap(cs.levels.back().lp.low, dir / kLowpass);
    manifest << kLowpass << '=' << to_string(cs.levels.back().lp.low.shape()) << '\n';
    manifest << "residual_max=" << format_number(residual_max) << '\n';
    manifest << "residual_l2=" << format_number(residual_l2) << '\n';
    write_text(dir / kManifest, manifest.str());
}

std::pair<double, double> residual(const FeatureMap& x, const FeatureMap& rec) {
    double mx = 0.0;
    double sq = 0.0;
    const auto a = x.data();
    const auto b = rec.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(static_cast<double>(a[i]) - b[i]);
        mx = std::max(mx, d);
        sq += d * d;
    }
    return {mx, std::sqrt(sq)};
}

void emit_statistical(const StatTexture& stat, const fs::path& dir) {
    write_sample_set(stat.samples, dir / kSampleSet);
    for (std::size_t i = 0; i < stat.descriptors.size(); ++i) {
        write_fmap(stat.descriptors[i], dir / region_file(i));
    }
    std::ostringstream report;
    const auto points = stat.samples.ordered();
    report << "regions=" << points.size() << '\n';
    report << "seed=" << stat.samples.seed << '\n';
    report << "sampleset_digest=" << stat.samples.digest() << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto tag = "region" + std::to_string(i);
        const auto& p = points[i];
        const auto& box = p.region.box;
        report << tag << "_kind=" << (p.kind == PointKind::Importance ? "importance" : "coverage")
               << '\n';
        report << tag << "_index=" << p.index << '\n';
        report << tag << "_box=" << box.top << ',' << box.left << ',' << box.height << ','
               << box.width << '\n';
        report << tag << "_score=" << format_number(p.region.score) << '\n';
        if (i < stat.histograms.size()) {
            const auto& h = stat.histograms[i];
            const auto sum = [](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) s += x;
                return s;
            };
            report << tag << "_fallback=" << (h.fallback ? 1 : 0) << '\n';
            report << tag << "_levels=" << join_numbers(h.levels) << '\n';
            report << tag << "_counts_before=" << join_numbers(h.counts_before) << '\n';
            report << tag << "_counts_after=" << join_numbers(h.counts_after) << '\n';
            report << tag << "_sum_before=" << format_number(sum(h.counts_before)) << '\n';
            report << tag << "_sum_after=" << format_number(sum(h.counts_after)) << '\n';
        }
    }
    write_text(dir / kHistogram, report.str());
}

// ---------------------------------------------------------------------------
// Artifact loading for `loss`

using BandTable = std::map<std::size_t, std::map<std::size_t, fs::path>>;

BandTable scan_bands(const fs::path& dir) {
    static const std::regex pattern(R"(L(\d+)_B(\d+)\.fmap)");
    BandTable table;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        std::smatch m;
        if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
            table[std::stoul(m[1].str())][std::stoul(m[2].str())] = entry.path();
        }
    }
    return table;
}

FeatureMap load_structural(const BandTable& table) {
    std::vector<std::vector<FeatureMap>> bands;
    for (const auto& [level, entries] : table) {
        std::vector<FeatureMap> level_bands;
        std::size_t expected = 0;
        for (const auto& [band, path] : entries) {
            if (band != expected++) {
                throw MismatchError("level " + std::to_string(level) + " is missing band " +
                                    std::to_string(expected - 1));
            }
            level_bands.push_back(read_fmap(path));
        }
        bands.push_back(std::move(level_bands));
    }
    const auto& top = bands.front().front();
    return flatten_bands(bands, top.height(), top.width());
}

StatTexture load_statistical(const fs::path& dir) {
    StatTexture stat;
    stat.samples = read_sample_set(dir / kSampleSet);
    const auto count = stat.samples.m_total;
    for (std::size_t i = 0; i < count; ++i) {
        const auto path = dir / region_file(i);
        if (!fs::exists(path)) {
            throw MismatchError("missing descriptor " + path.filename().string());
        }
        stat.descriptors.push_back(read_fmap(path));
    }
    return stat;
}

fs::path pick(const fs::path& preferred, const fs::path& fallback, const char* name) {
    return fs::exists(preferred / name) ? preferred / name : fallback / name;
}

struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

void add_config_flags(CLI::App* sub, ConfigFlags& flags) {
    sub->add_option("--config", flags.config_path, "Line-oriented 'key = value' config file");
    for (const auto& key : config_keys()) {
        flags.options[key] = sub->add_option("--" + key, flags.values[key]);
    }
}

RunConfig build_config(const ConfigFlags& flags) {
    RunConfig cfg;
    if (!flags.config_path.empty()) {
        for (const auto& [key, value] : read_config_file(flags.config_path)) {
            cfg.set(key, value);
        }
    }
    for (const auto& key : config_keys()) {
        if (flags.options.at(key)->count() > 0) {
            cfg.set(key, flags.values.at(key));
        }
    }
    cfg.validate();
    return cfg;
}

void require_input(const fs::path& p) {
    if (!fs::exists(p)) {
        throw FormatError(FormatError::Kind::Io, "input not found: " + p.string());
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

FeatureMap load_input(const fs::path& path) {
    require_input(path);
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pgm" || ext == ".ppm") {
        return read_image(path);
    }
    return read_fmap(path);
}

double write_decomposition(const FeatureMap& x, const RunConfig& cfg, const fs::path& out_dir) {
    const auto cs = cdm_forward(x, cfg.levels_m, cfg.downsample);
    const auto [mx, l2] = residual(x, cdm_reconstruct(cs));
    ensure_dir(out_dir);
    emit_structural(cs, x, out_dir, mx, l2);
    return mx;
}

double cmd_decompose(const fs::path& input, const RunConfig& cfg, const fs::path& out_dir) {
    return write_decomposition(load_input(input), cfg, out_dir);
}

StatTexture write_statistics(const FeatureMap& x, const RunConfig& cfg, const SampleSet* shared,
                             const fs::path& out_dir) {
    auto stat = extract_statistical(x, cfg.stat_config(), shared);
    ensure_dir(out_dir);
    emit_statistical(stat, out_dir);
    return stat;
}

StatTexture cmd_stats(const fs::path& input, const RunConfig& cfg,
                      const std::optional<fs::path>& sampleset, const fs::path& out_dir) {
    const auto x = load_input(input);
    if (sampleset) {
        require_input(*sampleset);
        const auto shared = read_sample_set(*sampleset);
        return write_statistics(x, cfg, &shared, out_dir);
    }
    return write_statistics(x, cfg, nullptr, out_dir);
}

LossReport cmd_loss(const fs::path& teacher_dir, const fs::path& student_dir,
                    const RunConfig& cfg, std::vector<std::string>& problems,
                    std::vector<std::string>& evaluated) {
    for (const auto& d : {teacher_dir, student_dir}) {
        if (!fs::is_directory(d)) {
            throw FormatError(FormatError::Kind::Io, "artifact directory not found: " + d.string());
        }
    }
    LossParts parts;
    std::size_t str_pixels = 0;
    std::size_t sta_regions = 0;
    std::size_t re_pixels = 0;
    std::size_t seg_pixels = 0;

    auto term = [&](const std::string& name, auto&& fn) {
        try {
            if (fn()) {
                evaluated.push_back(name);
            }
        } catch (const MismatchError& e) {
            problems.push_back(name + ": " + e.what());
        } catch (const LossError& e) {
            problems.push_back(name + ": " + e.what());
        } catch (const StatTextureError& e) {
            problems.push_back(name + ": " + e.what());
        } catch (const ContourletError& e) {
            problems.push_back(name + ": " + e.what());
        } catch (const InvalidTensor& e) {
            problems.push_back(name + ": " + e.what());
        }
    };
    // Pairwise terms need the artifact on both sides or on neither.
    auto presence = [&](bool in_teacher, bool in_student, const char* what) {
        if (in_teacher != in_student) {
            throw MismatchError(std::string(what) + " present only in the " +
                                (in_teacher ? "teacher" : "student") + " directory");
        }
        return in_teacher;
    };

    term("l_str", [&] {
        const auto tb = scan_bands(teacher_dir);
        const auto sb = scan_bands(student_dir);
        if (!presence(!tb.empty(), !sb.empty(), "subband files")) return false;
        const auto t = load_structural(tb);
        const auto s = load_structural(sb);
        parts.l_str = loss_structural(t, s);
        str_pixels = t.shape().plane();
        return true;
    });
    term("l_sta", [&] {
        if (!presence(fs::exists(teacher_dir / kSampleSet), fs::exists(student_dir / kSampleSet),
                      kSampleSet)) {
            return false;
        }
        const auto t = load_statistical(teacher_dir);
        const auto s = load_statistical(student_dir);
        parts.l_sta = loss_statistical(t, s);
        sta_regions = t.descriptors.size();
        return true;
    });
    term("l_re", [&] {
        if (!presence(fs::exists(teacher_dir / kProbs), fs::exists(student_dir / kProbs), kProbs)) {
            return false;
        }
        const auto t = ProbMap::from_feature_map(read_fmap(teacher_dir / kProbs));
        const auto s = ProbMap::from_feature_map(read_fmap(student_dir / kProbs));
        parts.l_re = loss_response(t, s);
        re_pixels = t.pixels();
        return true;
    });
    term("l_seg", [&] {
        const auto labels_path = pick(student_dir, teacher_dir, kLabels);
        if (!fs::exists(student_dir / kProbs) || !fs::exists(labels_path)) return false;
        const auto p = ProbMap::from_feature_map(read_fmap(student_dir / kProbs));
        const auto y = LabelMap::from_feature_map(read_fmap(labels_path), cfg.ignore_index);
        parts.l_seg = loss_segmentation(p, y);
        seg_pixels = p.pixels();
        return true;
    });
    term("l_adv", [&] {
        const auto image_path = pick(student_dir, teacher_dir, kImage);
        if (!fs::exists(student_dir / kProbs) || !fs::exists(image_path)) return false;
        const auto p = ProbMap::from_feature_map(read_fmap(student_dir / kProbs));
        const auto image = read_fmap(image_path);
        parts.l_adv = loss_adversarial(p, image, ProjectionDiscriminator(cfg.discriminator_seed));
        return true;
    });

    auto report = loss_total(parts, cfg.weights);
    report.str_pixels = str_pixels;
    report.sta_regions = sta_regions;
    report.re_pixels = re_pixels;
    report.seg_pixels = seg_pixels;
    return report;
}

LossReport cmd_pipeline(const FeatureMap& teacher, const FeatureMap& student,
                        const RunConfig& cfg, const std::optional<fs::path>& out_dir) {
    if (teacher.shape() != student.shape()) {
        throw MismatchError("teacher " + to_string(teacher.shape()) + " and student " +
                            to_string(student.shape()) + " feature maps differ in shape");
    }
    const auto cs_t = cdm_forward(teacher, cfg.levels_m, cfg.downsample);
    const auto cs_s = cdm_forward(student, cfg.levels_m, cfg.downsample);
    const auto str_t = flatten_structural(cs_t);
    const auto str_s = flatten_structural(cs_s);

    const auto stat_cfg = cfg.stat_config();
    const auto sta_t = extract_statistical(teacher, stat_cfg);
    const auto sta_s = extract_statistical(student, stat_cfg, &sta_t.samples);

    // No segmentation head is in scope: channel softmax of the features stands
    // in for the response, the teacher's argmax for labels, and the teacher
    // map for the input image.
    const auto probs_t = softmax_response(teacher);
    const auto probs_s = softmax_response(student);
    const auto labels = argmax_labels(probs_t, cfg.ignore_index);

    LossParts parts;
    parts.l_str = loss_structural(str_t, str_s);
    parts.l_sta = loss_statistical(sta_t, sta_s);
    parts.l_re = loss_response(probs_t, probs_s);
    parts.l_seg = loss_segmentation(probs_s, labels);
    parts.l_adv =
        loss_adversarial(probs_s, teacher, ProjectionDiscriminator(cfg.discriminator_seed));
    auto report = loss_total(parts, cfg.weights);
    report.str_pixels = str_t.shape().plane();
    report.sta_regions = sta_t.descriptors.size();
    report.re_pixels = probs_t.pixels();
    report.seg_pixels = labels.labels().size();

    if (out_dir) {
        const std::pair<const char*, std::tuple<const FeatureMap&, const ContourletSet&,
                                                const StatTexture&, const ProbMap&>>
            sides[] = {{"teacher", {teacher, cs_t, sta_t, probs_t}},
                       {"student", {student, cs_s, sta_s, probs_s}}};
        for (const auto& [name, artifacts] : sides) {
            const auto& [x, cs, sta, probs] = artifacts;
            const auto dir = *out_dir / name;
            ensure_dir(dir);
            const auto [mx, l2] = residual(x, cdm_reconstruct(cs));
            emit_structural(cs, x, dir, mx, l2);
            emit_statistical(sta, dir);
            write_fmap(probs.to_feature_map(), dir / kProbs);
            write_fmap(labels.to_feature_map(), dir / kLabels);
            write_fmap(teacher, dir / kImage);
        }
        write_text(*out_dir / kReport,
                   format_report(report, {"l_seg", "l_str", "l_sta", "l_re", "l_adv"}));
    }
    return report;
}

void cmd_synth(const synth::SynthSpec& spec, const fs::path& out_dir) {
    const auto pair = synth::generate_pair(spec);
    ensure_dir(out_dir);
    write_fmap(pair.teacher, out_dir / "teacher.fmap");
    write_fmap(pair.student, out_dir / "student.fmap");
}

std::string format_report(const LossReport& report, const std::vector<std::string>& evaluated) {
    std::ostringstream out;
    out << "l_seg=" << format_number(report.parts.l_seg) << '\n';
    out << "l_str=" << format_number(report.parts.l_str) << '\n';
    out << "l_sta=" << format_number(report.parts.l_sta) << '\n';
    out << "l_re=" << format_number(report.parts.l_re) << '\n';
    out << "l_adv=" << format_number(report.parts.l_adv) << '\n';
    out << "total=" << format_number(report.total) << '\n';
    out << "lambda_str=" << format_number(report.weights.structural) << '\n';
    out << "lambda_sta=" << format_number(report.weights.statistical) << '\n';
    out << "lambda_re=" << format_number(report.weights.response) << '\n';
    out << "lambda_adv=" << format_number(report.weights.adversarial) << '\n';
    out << "str_pixels=" << report.str_pixels << '\n';
    out << "sta_regions=" << report.sta_regions << '\n';
    out << "re_pixels=" << report.re_pixels << '\n';
    out << "seg_pixels=" << report.seg_pixels << '\n';
    std::string terms;
    for (const auto& t : evaluated) {
        terms += (terms.empty() ? "" : ",") + t;
    }
    out << "evaluated=" << terms << '\n';
    return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structural and statistical texture distillation toolkit"};
    app.name("texkd");
    app.require_subcommand(1);

    std::string input;
    std::string out_dir;

    auto* decompose = app.add_subcommand("decompose", "Contourlet-decompose a feature map");
    ConfigFlags decompose_flags;
    decompose->add_option("input", input, "Input FMAP (or PGM/PPM)")->required();
    decompose->add_option("-o,--out", out_dir, "Output directory")->required();
    add_config_flags(decompose, decompose_flags);

    auto* stats = app.add_subcommand("stats", "Extract statistical texture descriptors");
    ConfigFlags stats_flags;
    std::string sampleset;
    stats->add_option("input", input, "Input FMAP (or PGM/PPM)")->required();
    stats->add_option("-o,--out", out_dir, "Output directory")->required();
    stats->add_option("--sampleset", sampleset, "Reuse a previously emitted sampleset");
    add_config_flags(stats, stats_flags);

    auto* loss = app.add_subcommand("loss", "Compare teacher and student artifact directories");
    ConfigFlags loss_flags;
    std::string teacher_dir;
    std::string student_dir;
    loss->add_option("teacher", teacher_dir, "Teacher artifact directory")->required();
    loss->add_option("student", student_dir, "Student artifact directory")->required();
    add_config_flags(loss, loss_flags);

    auto* pipeline = app.add_subcommand("pipeline", "Run both branches and all losses");
    ConfigFlags pipeline_flags;
    std::string teacher_path;
    std::string student_path;
    std::string pipeline_out;
    pipeline->add_option("teacher", teacher_path, "Teacher feature map")->required();
    pipeline->add_option("student", student_path, "Student feature map")->required();
    pipeline->add_option("-o,--out", pipeline_out, "Emit all artifacts beneath this directory");
    add_config_flags(pipeline, pipeline_flags);

    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic teacher/student pair");
    synth::SynthSpec spec;
    std::string pattern = "grating";
    synth_cmd->add_option("--pattern", pattern, "constant|ramp|grating|bimodal|noise");
    synth_cmd->add_option("--channels", spec.dims.channels);
    synth_cmd->add_option("--height", spec.dims.height);
    synth_cmd->add_option("--width", spec.dims.width);
    synth_cmd->add_option("--angle", spec.angle_deg, "Grating orientation in degrees");
    synth_cmd->add_option("--cycles", spec.cycles, "Grating periods across the image");
    synth_cmd->add_option("--value", spec.value, "Constant pattern level");
    synth_cmd->add_option("--offset", spec.offset, "Grating DC level");
    synth_cmd->add_option("--sigma", spec.sigma, "Student noise scale");
    synth_cmd->add_option("--seed", spec.seed);
    synth_cmd->add_option("-o,--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (decompose->parsed()) {
            const auto cfg = build_config(decompose_flags);
            const double res = cmd_decompose(input, cfg, out_dir);
            out << "residual_max=" << format_number(res) << '\n';
        } else if (stats->parsed()) {
            const auto cfg = build_config(stats_flags);
            std::optional<fs::path> shared;
            if (!sampleset.empty()) {
                shared = sampleset;
            }
            const auto stat = cmd_stats(input, cfg, shared, out_dir);
            out << "regions=" << stat.descriptors.size() << '\n';
        } else if (loss->parsed()) {
            const auto cfg = build_config(loss_flags);
            std::vector<std::string> problems;
            std::vector<std::string> evaluated;
            const auto report = cmd_loss(teacher_dir, student_dir, cfg, problems, evaluated);
            if (!problems.empty()) {
                for (const auto& p : problems) {
                    err << "error: " << p << '\n';
                }
                return kExitMismatch;
            }
            out << format_report(report, evaluated);
        } else if (pipeline->parsed()) {
            const auto cfg = build_config(pipeline_flags);
            const auto teacher = load_input(teacher_path);
            const auto student = load_input(student_path);
            std::optional<fs::path> dir;
            if (!pipeline_out.empty()) {
                dir = pipeline_out;
            }
            const auto report = cmd_pipeline(teacher, student, cfg, dir);
            out << format_report(report, {"l_seg", "l_str", "l_sta", "l_re", "l_adv"});
        } else if (synth_cmd->parsed()) {
            spec.pattern = synth::parse_pattern(pattern);
            cmd_synth(spec, out_dir);
            out << "wrote " << (fs::path(out_dir) / "teacher.fmap").string() << " and "
                << (fs::path(out_dir) / "student.fmap").string() << '\n';
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        if (e.kind() == FormatError::Kind::Io && std::string(e.what()).rfind("input not found", 0) == 0) {
            err << "error: input not found (" << e.what() + 17 << ")\n";
        } else {
            err << "error: " << e.what() << '\n';
        }
        return kExitIo;
    } catch (const MismatchError& e) {
        err << "error: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const LossError& e) {
        err << "error: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const StatTextureError& e) {
        err << "error: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const ContourletError& e) {
        err << "error: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const InvalidTensor& e) {
        err << "error: " << e.what() << '\n';
        return kExitMismatch;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace texkd::cli
