#include "efw/record.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

#include "efw/errors.hpp"
#include "efw/format.hpp"

namespace efw {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char ch : bytes) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string write_mixture_record(const MixtureRecord& record) {
    const auto& m = record.mixture;
    if (m.components.empty()) throw ConfigError("cannot write an empty mixture");
    const Family family = m.components.front().family();
    for (const auto& w : m.components) {
        if (w.family() != family) throw ConfigError("mixture record requires a single family");
    }
    if (family == Family::SirWave && !record.sir) {
        throw ConfigError("SirWave mixture record needs the SIR reference of its base curve");
    }
    std::ostringstream os;
    os << "efw-mixture " << kMixtureFormatVersion << " family=" << to_string(family) << " n=" << m.size()
       << " origin=" << format_iso(m.origin) << " seed=" << record.seed << " config=" << record.config_hash;
    if (family == Family::SirWave) {
        const auto& s = *record.sir;
        os << " sir=" << format_double(s.params.beta) << ',' << format_double(s.params.gamma) << ','
           << format_double(s.params.population) << ',' << format_double(s.initial.i) << ','
           << format_double(s.dt) << ',' << s.steps;
    }
    os << '\n';
    for (const auto& w : m.components) {
        os << format_double(w.amplitude()) << ' ' << format_double(w.b()) << ' ' << format_double(w.c()) << '\n';
    }
    return os.str();
}

MixtureRecord read_mixture_record(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split_on(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') lines.push_back(line);
    }
    if (lines.empty()) throw ParseError("mixture record is empty");
    const auto head = split_ws(lines.front());
    if (head.size() < 2 || head[0] != "efw-mixture") throw ParseError("not an efw-mixture record");
    if (head[1] != std::to_string(kMixtureFormatVersion)) {
        throw ParseError("unsupported mixture record version " + std::string(head[1]));
    }

    MixtureRecord rec;
    std::optional<Family> family;
    std::optional<std::size_t> n;
    std::optional<Date> origin;
    for (std::size_t i = 2; i < head.size(); ++i) {
        const auto eq = head[i].find('=');
        if (eq == std::string_view::npos) throw ParseError("bad header field '" + std::string(head[i]) + "'");
        const auto key = head[i].substr(0, eq);
        const auto value = head[i].substr(eq + 1);
        if (key == "family") {
            family = parse_family(value);
        } else if (key == "n") {
            const auto v = parse_double(value);
            if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
                throw ParseError("bad component count");
            }
            n = static_cast<std::size_t>(*v);
        } else if (key == "origin") {
            origin = parse_iso(value);
            if (!origin) throw ParseError("bad origin date");
        } else if (key == "seed") {
            rec.seed = std::stoull(std::string(value));
        } else if (key == "config") {
            rec.config_hash = std::string(value);
        } else if (key == "sir") {
            const auto parts = split_on(value, ',');
            if (parts.size() != 6) throw ParseError("sir field needs beta,gamma,N,I0,dt,steps");
            std::vector<double> v;
            for (const auto p : parts) {
                const auto d = parse_double(p);
                if (!d) throw ParseError("bad number in sir field");
                v.push_back(*d);
            }
            SirReference ref;
            ref.params = {v[0], v[1], v[2]};
            ref.initial = {v[2] - v[3], v[3], 0.0};
            ref.dt = v[4];
            ref.steps = static_cast<std::size_t>(v[5]);
            rec.sir = ref;
        }
    }
    if (!family || !n || !origin) throw ParseError("mixture header needs family, n and origin");
    if (lines.size() != *n + 1) {
        throw ParseError("mixture header announces " + std::to_string(*n) + " components, found " +
                         std::to_string(lines.size() - 1));
    }
    std::shared_ptr<const SirCurve> curve;
    if (*family == Family::SirWave) {
        if (!rec.sir) throw ParseError("SirWave record lacks the sir field");
        curve = sir_curve(integrate(*rec.sir));
    }
    rec.mixture.origin = *origin;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_ws(lines[i]);
        if (f.size() != 3) throw ParseError("component line " + std::to_string(i) + " needs three numbers");
        const auto a = parse_double(f[0]);
        const auto b = parse_double(f[1]);
        const auto c = parse_double(f[2]);
        if (!a || !b || !c) throw ParseError("component line " + std::to_string(i) + ": bad number");
        rec.mixture.components.push_back(Wavelet::make(*family, *a, *b, *c, curve));
    }
    return rec;
}

}  // namespace efw
