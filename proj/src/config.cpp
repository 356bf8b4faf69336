#include "kicktop/config.hpp"

#include "kicktop/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace kicktop {

namespace {


const std::map<std::string, std::set<std::string>, std::less<>>& known_keys() {
    static const std::map<std::string, std::set<std::string>, std::less<>> keys = {
        {"system", {"k", "J", "T", "N0", "I", "tau_eps"}},
        {"quantum", {"overlap_mode", "sigma_eps"}},
        {"classical", {"samples", "energy_jitter"}},
        {"run", {"kicks", "seed", "outdir", "scales", "edge_cutoff", "sos_seeds"}},
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line;
};

double parse_double(const std::string& key, const Entry& e) {
    double v = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError("key '" + key + "' expects a real number, got '" + e.value + "'", e.line);
    }
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const Entry& e) {
    Int v{};
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + e.value + "'", e.line);
    }
    return v;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

std::string to_string(OverlapMode mode) { return mode == OverlapMode::gaussian ? "gaussian" : "orthogonal"; }

void RunSpec::validate() const {
    const SystemParams& p = system;
    if (p.J < 1) throw ConfigError("system.J must be >= 1");
    if (p.T <= p.J) throw ConfigError("system.T must exceed system.J");
    if (p.N0 < p.T - p.J || p.N0 > p.T + p.J) throw ConfigError("system.N0 must lie in [T-J, T+J]");
    if (!(p.I > 0.0)) throw ConfigError("system.I must be positive");
    if (!(p.tau_eps > 0.0)) throw ConfigError("system.tau_eps must be positive");
    if (overlap.mode == OverlapMode::gaussian && !(overlap.sigma_eps > 0.0)) {
        throw ConfigError("quantum.sigma_eps must be positive when overlap_mode = gaussian");
    }
    if (overlap.sigma_eps < 0.0) throw ConfigError("quantum.sigma_eps must be >= 0");
    if (samples < 1) throw ConfigError("classical.samples must be >= 1");
    if (!(energy_jitter >= 0.0)) throw ConfigError("classical.energy_jitter must be >= 0");
    if (kicks < 1) throw ConfigError("run.kicks must be >= 1");
    if (outdir.empty()) throw ConfigError("run.outdir must not be empty");
    if (scales.empty()) throw ConfigError("run.scales must list at least one scale");
    for (double s : scales) {
        if (!(s > 0.0)) throw ConfigError("run.scales entries must be positive");
    }
    if (!(edge_cutoff > 0.0 && edge_cutoff <= 1.0)) throw ConfigError("run.edge_cutoff must lie in (0, 1]");
    if (sos_seeds < 1) throw ConfigError("run.sos_seeds must be >= 1");
}

RunSpec parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;  // "section.key"
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header '" + std::string(line) + "'", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_keys().contains(section)) throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty() || value.find('=') != std::string::npos) {
            throw ConfigError("malformed assignment '" + std::string(line) + "'", line_no);
        }
        if (section.empty()) throw ConfigError("key '" + key + "' appears before any section", line_no);
        if (!known_keys().at(section).contains(key)) {
            throw ConfigError("unknown key '" + section + "." + key + "'", line_no);
        }
        const std::string full = section + "." + key;
        if (const auto it = entries.find(full); it != entries.end()) {
            throw ConfigError("duplicate key '" + full + "' (first set on line " + std::to_string(it->second.line) + ")",
                              line_no);
        }
        entries.emplace(full, Entry{value, line_no});
    }

    auto find = [&](const std::string& key) -> std::optional<Entry> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) {
        auto e = find(key);
        if (!e) throw ConfigError("missing required key '" + key + "'");
        return *e;
    };

    RunSpec spec;
    spec.system.k = parse_double("system.k", require("system.k"));
    spec.system.J = parse_int<long>("system.J", require("system.J"));
    spec.system.T = parse_int<long>("system.T", require("system.T"));
    spec.system.N0 = parse_int<long>("system.N0", require("system.N0"));
    spec.system.I = parse_double("system.I", require("system.I"));
    spec.system.tau_eps = parse_double("system.tau_eps", require("system.tau_eps"));
    spec.system.hbar_eff = spec.system.J > 0 ? 1.0 / static_cast<double>(spec.system.J) : 1.0;

    if (auto e = find("quantum.overlap_mode")) {
        if (e->value == "orthogonal") {
            spec.overlap.mode = OverlapMode::orthogonal;
        } else if (e->value == "gaussian") {
            spec.overlap.mode = OverlapMode::gaussian;
        } else {
            throw ConfigError("key 'quantum.overlap_mode' must be orthogonal or gaussian, got '" + e->value + "'",
                              e->line);
        }
    }
    if (auto e = find("quantum.sigma_eps")) spec.overlap.sigma_eps = parse_double("quantum.sigma_eps", *e);
    if (auto e = find("classical.samples")) spec.samples = parse_int<std::size_t>("classical.samples", *e);
    if (auto e = find("classical.energy_jitter")) spec.energy_jitter = parse_double("classical.energy_jitter", *e);
    if (auto e = find("run.kicks")) spec.kicks = parse_int<int>("run.kicks", *e);
    if (auto e = find("run.seed")) spec.seed = parse_int<std::uint64_t>("run.seed", *e);
    if (auto e = find("run.outdir")) spec.outdir = e->value;
    if (auto e = find("run.scales")) {
        spec.scales.clear();
        std::string_view rest = e->value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string item(trim(rest.substr(0, comma)));
            spec.scales.push_back(parse_double("run.scales", Entry{item, e->line}));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    if (auto e = find("run.edge_cutoff")) spec.edge_cutoff = parse_double("run.edge_cutoff", *e);
    if (auto e = find("run.sos_seeds")) spec.sos_seeds = parse_int<std::size_t>("run.sos_seeds", *e);

    // Range errors point at the line that set the key when there is one.
    try {
        spec.validate();
    } catch (const ConfigError& err) {
        const std::string msg = err.what();
        for (const auto& [key, entry] : entries) {
            if (msg.rfind(key, 0) == 0) throw ConfigError(msg, entry.line);
        }
        throw;
    }
    return spec;
}

std::string emit_config(const RunSpec& spec) {
    std::ostringstream out;
    out << "[system]\n"
        << "k = " << format_double(spec.system.k) << "\n"
        << "J = " << spec.system.J << "\n"
        << "T = " << spec.system.T << "\n"
        << "N0 = " << spec.system.N0 << "\n"
        << "I = " << format_double(spec.system.I) << "\n"
        << "tau_eps = " << format_double(spec.system.tau_eps) << "\n"
        << "\n[quantum]\n"
        << "overlap_mode = " << to_string(spec.overlap.mode) << "\n"
        << "sigma_eps = " << format_double(spec.overlap.sigma_eps) << "\n"
        << "\n[classical]\n"
        << "samples = " << spec.samples << "\n"
        << "energy_jitter = " << format_double(spec.energy_jitter) << "\n"
        << "\n[run]\n"
        << "kicks = " << spec.kicks << "\n"
        << "seed = " << spec.seed << "\n"
        << "outdir = " << spec.outdir << "\n"
        << "scales = ";
    for (std::size_t i = 0; i < spec.scales.size(); ++i) out << (i ? ", " : "") << format_double(spec.scales[i]);
    out << "\n"
        << "edge_cutoff = " << format_double(spec.edge_cutoff) << "\n"
        << "sos_seeds = " << spec.sos_seeds << "\n";
    return out.str();
}

}  // namespace kicktop
