#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "texkd/fmap_io.hpp"
#include "texkd/statexture.hpp"

namespace texkd {

namespace {

constexpr const char* kHeader = "texkd-sampleset 1";

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void bad(const std::string& what, std::size_t line) {
    throw StatTextureError("sampleset line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_sample_set(const SampleSet& set) {
    std::ostringstream out;
    out << kHeader << '\n';
    out << "seed " << set.seed << '\n';
    out << "size " << set.height << ' ' << set.width << '\n';
    out << "regions " << set.m_total << '\n';
    out << "candidates " << set.candidates << '\n';
    for (const auto& p : set.ordered()) {
        const auto& r = p.region;
        out << (p.kind == PointKind::Importance ? "importance " : "coverage ") << p.index << ' '
            << r.center_row << ' ' << r.center_col << ' ' << r.box.top << ' ' << r.box.left
            << ' ' << r.box.height << ' ' << r.box.width << ' ' << shortest(r.score) << '\n';
    }
    return out.str();
}

SampleSet parse_sample_set(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::istringstream {
        do {
            if (!std::getline(in, line)) {
                bad("unexpected end of file", lineno);
            }
            ++lineno;
        } while (line.empty());
        return std::istringstream(line);
    };
    auto expect_key = [&](std::istringstream& ls, const char* key) {
        std::string k;
        if (!(ls >> k) || k != key) {
            bad(std::string("expected '") + key + "'", lineno);
        }
    };

    if (!std::getline(in, line) || line != kHeader) {
        bad("missing header", 1);
    }
    lineno = 1;
    SampleSet set;
    {
        auto ls = next_line();
        expect_key(ls, "seed");
        if (!(ls >> set.seed)) bad("bad seed", lineno);
    }
    {
        auto ls = next_line();
        expect_key(ls, "size");
        if (!(ls >> set.height >> set.width) || set.height == 0 || set.width == 0) {
            bad("bad size", lineno);
        }
    }
    {
        auto ls = next_line();
        expect_key(ls, "regions");
        if (!(ls >> set.m_total) || set.m_total == 0) bad("bad region count", lineno);
    }
    {
        auto ls = next_line();
        expect_key(ls, "candidates");
        if (!(ls >> set.candidates)) bad("bad candidate count", lineno);
    }

    std::set<std::size_t> seen;
    const std::size_t pixels = set.height * set.width;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string kind;
        SampledPoint p;
        std::string score;
        auto& r = p.region;
        if (!(ls >> kind >> p.index >> r.center_row >> r.center_col >> r.box.top >> r.box.left >>
              r.box.height >> r.box.width >> score)) {
            bad("malformed point record", lineno);
        }
        const auto res = std::from_chars(score.data(), score.data() + score.size(), r.score);
        if (res.ec != std::errc() || res.ptr != score.data() + score.size()) {
            bad("bad score", lineno);
        }
        if (p.index >= pixels || r.center_row * set.width + r.center_col != p.index) {
            bad("point outside the map", lineno);
        }
        if (r.box.height == 0 || r.box.width == 0 || r.box.top + r.box.height > set.height ||
            r.box.left + r.box.width > set.width) {
            bad("region outside the map", lineno);
        }
        if (!seen.insert(p.index).second) {
            bad("duplicate point index", lineno);
        }
        if (kind == "importance") {
            if (!set.coverage.empty()) bad("importance point after coverage points", lineno);
            p.kind = PointKind::Importance;
            set.importance.push_back(p);
        } else if (kind == "coverage") {
            p.kind = PointKind::Coverage;
            set.coverage.push_back(p);
        } else {
            bad("unknown point kind '" + kind + "'", lineno);
        }
    }
    if (set.importance.size() + set.coverage.size() != set.m_total) {
        throw StatTextureError("sampleset lists " +
                               std::to_string(set.importance.size() + set.coverage.size()) +
                               " points but declares " + std::to_string(set.m_total));
    }
    return set;
}

SampleSet read_sample_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError(FormatError::Kind::Io, "cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sample_set(buf.str());
}

void write_sample_set(const SampleSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "cannot open " + path.string() + " for writing");
    }
    out << format_sample_set(set);
    if (!out) {
        throw FormatError(FormatError::Kind::Io, "write failed: " + path.string());
    }
}

}  // namespace texkd
