// config.hpp: run specification and its plain-text configuration format
//
//   [system]    k, J, T, N0, I, tau_eps            (all required)
//   [quantum]   overlap_mode = orthogonal|gaussian, sigma_eps
//   [classical] samples, energy_jitter
//   [run]       kicks, seed, outdir, scales, edge_cutoff, sos_seeds
//
// One `key = value` per line, `#` starts a comment.
#pragma once

#include "kicktop/params.hpp"
#include "kicktop/quantum_channel.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kicktop {

struct RunSpec {
    SystemParams system;  // hbar_eff is set to 1/J
    OverlapModel overlap;
    std::size_t samples{100000};
    double energy_jitter{0.0};
    int kicks{25};
    std::uint64_t seed{0};
    std::string outdir{"run"};
    std::vector<double> scales{1.0};
    double edge_cutoff{0.8};
    std::size_t sos_seeds{50};

    // Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

inline bool operator==(const OverlapModel& a, const OverlapModel& b) {
    return a.mode == b.mode && a.sigma_eps == b.sigma_eps;
}

// Throws ConfigError (with line number where one applies).
RunSpec parse_config(std::string_view text);

// Every key, defaults included; parse_config(emit_config(s)) == s.
std::string emit_config(const RunSpec& spec);

std::string to_string(OverlapMode mode);

}  // namespace kicktop
