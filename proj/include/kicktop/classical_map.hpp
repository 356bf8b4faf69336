// classical_map.hpp: the classical kicked-sphere map for the direction of J
//
// Lab frame: the torsion axis is x, the top's axis is z, and the top's angular
// momentum is N = T - J*u_z. One period is a torsion kick about x by k*u_x
// followed by a precession about z by tau_eps*N/I.
#pragma once

#include "kicktop/params.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace kicktop {

struct SpinVector {
    double x{0.0};
    double y{0.0};
    double z{1.0};

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    SpinVector normalized() const noexcept {
        const double r = norm();
        return {x / r, y / r, z / r};
    }
    friend bool operator==(const SpinVector&, const SpinVector&) = default;
};

// Rotation about x by k*u_x. Leaves u_x unchanged.
SpinVector kick(const SpinVector& u, double k) noexcept;

// Rotation about z by beta = tau_scale * tau_eps * (T - J*u_z) / I. Leaves u_z unchanged.
// tau_scale != 1 carries a per-sample orbital-period perturbation.
SpinVector precess(const SpinVector& u, const SystemParams& params, double tau_scale = 1.0) noexcept;

// One stroboscopic period: precess(kick(u)).
SpinVector period_map(const SpinVector& u, const SystemParams& params, double tau_scale = 1.0) noexcept;

// Exact inverse of period_map.
SpinVector inverse_period_map(const SpinVector& v, const SystemParams& params, double tau_scale = 1.0) noexcept;

struct SectionPoint {
    std::size_t seed;  // index into the seed list
    int q;             // kick number, 1..q_max
    SpinVector u;
};

// Orbit of every seed for q = 1..q_max kicks, seed-major order.
std::vector<SectionPoint> surface_of_section(std::span<const SpinVector> seeds, int q_max,
                                             const SystemParams& params);

// n points spread quasi-uniformly on the sphere (Fibonacci spiral); used as section seeds.
std::vector<SpinVector> spiral_seeds(std::size_t count);

}  // namespace kicktop
