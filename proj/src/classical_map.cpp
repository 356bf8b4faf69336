#include "kicktop/classical_map.hpp"

#include "kicktop/errors.hpp"

#include <numbers>

namespace kicktop {

namespace {

SpinVector rotate_x(const SpinVector& u, double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {u.x, c * u.y - s * u.z, s * u.y + c * u.z};
}

SpinVector rotate_z(const SpinVector& u, double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * u.x - s * u.y, s * u.x + c * u.y, u.z};
}

double precession_angle(const SpinVector& u, const SystemParams& params, double tau_scale) noexcept {
    const double N = static_cast<double>(params.T) - static_cast<double>(params.J) * u.z;
    return std::fmod(tau_scale * params.precession_angle(N), 2.0 * std::numbers::pi);
}

}  // namespace

SpinVector kick(const SpinVector& u, double k) noexcept { return rotate_x(u, k * u.x); }

SpinVector precess(const SpinVector& u, const SystemParams& params, double tau_scale) noexcept {
    return rotate_z(u, precession_angle(u, params, tau_scale));
}

SpinVector period_map(const SpinVector& u, const SystemParams& params, double tau_scale) noexcept {
    return precess(kick(u, params.k), params, tau_scale);
}

SpinVector inverse_period_map(const SpinVector& v, const SystemParams& params, double tau_scale) noexcept {
    // z is untouched by the precession, so beta is recomputed from v; x is untouched by the kick.
    const SpinVector w = rotate_z(v, -precession_angle(v, params, tau_scale));
    return rotate_x(w, -params.k * w.x);
}

std::vector<SectionPoint> surface_of_section(std::span<const SpinVector> seeds, int q_max,
                                             const SystemParams& params) {
    if (q_max < 1) throw InputError("surface_of_section: q_max must be >= 1");
    std::vector<SectionPoint> out;
    out.reserve(seeds.size() * static_cast<std::size_t>(q_max));
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        SpinVector u = seeds[s];
        for (int q = 1; q <= q_max; ++q) {
            u = period_map(u, params);
            out.push_back({s, q, u});
        }
    }
    return out;
}

std::vector<SpinVector> spiral_seeds(std::size_t count) {
    std::vector<SpinVector> out;
    out.reserve(count);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * static_cast<double>(i);
        out.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
}

}  // namespace kicktop
