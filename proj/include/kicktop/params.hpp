// params.hpp: system parameters, channel indexing and the hbar_eff rescaling
#pragma once

#include <cstddef>

namespace kicktop {

// Physical parameters in atomic units (hbar = 1). hbar_eff is a label only.
struct SystemParams {
    double k{0.0};         // torsion strength
    long J{1};             // light-particle angular momentum
    long T{2};             // total angular momentum
    long N0{2};            // initial top channel
    double I{1.0};         // moment of inertia
    double tau_eps{1.0};   // period of the mean-energy orbit
    double hbar_eff{1.0};  // effective Planck constant (label)

    std::size_t n() const noexcept { return static_cast<std::size_t>(2 * J + 1); }
    long n_min() const noexcept { return T - J; }
    long n_max() const noexcept { return T + J; }

    // Vector index of channel N: channels are stored in ascending N.
    std::size_t index_of(long N) const noexcept { return static_cast<std::size_t>(N - n_min()); }
    long channel_at(std::size_t i) const noexcept { return n_min() + static_cast<long>(i); }

    // Classical precession angle tau_eps * N / I for a (real) top angular momentum N.
    double precession_angle(double N) const noexcept { return tau_eps * N / I; }

    // Throws InputError on J < 1, T <= J, I <= 0, tau_eps <= 0 or N0 outside [T-J, T+J].
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// m = T - N, so the channel basis is the J_z eigenbasis with eigenvalue m.
struct ChannelIndex {
    long m;
    long N;
    friend bool operator==(const ChannelIndex&, const ChannelIndex&) = default;
};

ChannelIndex channel_of(long N, const SystemParams& params);

// Multiplies the actions J, T, N0 (rounded) and I by s; hbar_eff -> hbar_eff / s.
// Keeps k, tau_eps and the classical map unchanged.
SystemParams rescale(const SystemParams& params, double s);

}  // namespace kicktop
