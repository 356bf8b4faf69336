#include "kicktop/classical_map.hpp"
#include "kicktop/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

using namespace kicktop;

namespace {

SystemParams base_params() {
    SystemParams p;
    p.k = 0.25;
    p.J = 10;
    p.T = 50;
    p.N0 = 50;
    p.I = 100.0;
    p.tau_eps = std::numbers::pi;  // tau_eps / I = pi/100
    p.hbar_eff = 0.1;
    return p;
}

void check_close(const SpinVector& a, const Eigen::Vector3d& b, double tol) {
    CHECK(std::abs(a.x - b.x()) < tol);
    CHECK(std::abs(a.y - b.y()) < tol);
    CHECK(std::abs(a.z - b.z()) < tol);
}

}  // namespace

TEST_CASE("kick fixes the torsion axis and the pole") {
    for (const double k : {0.0, 0.25, 1.0, 10.0}) {
        CHECK(kick({1.0, 0.0, 0.0}, k) == SpinVector{1.0, 0.0, 0.0});
        const SpinVector pole = kick({0.0, 0.0, 1.0}, k);
        CHECK(pole.x == 0.0);
        CHECK(pole.y == doctest::Approx(0.0));
        CHECK(pole.z == doctest::Approx(1.0));
    }
}

TEST_CASE("kick matches the axis-angle oracle") {
    const double h = 1.0 / std::sqrt(2.0);
    const SpinVector u{h, 0.0, h};
    const Eigen::Vector3d expected = oracle::rotation(Eigen::Vector3d::UnitX(), h) * oracle::vec(u);
    check_close(kick(u, 1.0), expected, 1e-14);
}

TEST_CASE("precess leaves the pole fixed and rotates by tau_eps N / I") {
    const SystemParams p = base_params();
    const SpinVector pole = precess({0.0, 0.0, 1.0}, p);
    CHECK(pole.z == 1.0);
    CHECK(std::abs(pole.x) < 1e-15);

    // u_z = 0 -> N = T = 50 -> beta = pi/2.
    const SpinVector r = precess({1.0, 0.0, 0.0}, p);
    check_close(r, Eigen::Vector3d(0.0, 1.0, 0.0), 1e-15);
}

TEST_CASE("precess with a full-turn angle is the identity") {
    SystemParams p = base_params();
    p.tau_eps = 2.0 * std::numbers::pi * p.I / static_cast<double>(p.T);  // beta(N=T) = 2 pi
    const SpinVector u{0.6, -0.8, 0.0};
    const SpinVector r = precess(u, p);
    check_close(r, oracle::vec(u), 1e-13);
}

TEST_CASE("period_map composes kick and precession") {
    SystemParams p = base_params();
    p.k = 0.0;
    p.tau_eps = 2.0 * std::numbers::pi * p.I / static_cast<double>(p.T);
    // k = 0 and beta = 2 pi on the equator: identity there.
    const SpinVector eq{0.6, 0.8, 0.0};
    check_close(period_map(eq, p), oracle::vec(eq), 1e-13);

    SystemParams half = base_params();
    half.k = 0.7;
    half.tau_eps = std::numbers::pi * half.I / static_cast<double>(half.T);  // beta(N=T) = pi
    const Eigen::Vector3d expected = oracle::precess(oracle::kick(Eigen::Vector3d::UnitX(), half.k), half);
    check_close(period_map({1.0, 0.0, 0.0}, half), expected, 1e-15);
    check_close(period_map({1.0, 0.0, 0.0}, half), Eigen::Vector3d(-1.0, 0.0, 0.0), 1e-15);
}

TEST_CASE("kick and precess agree with the rotation-matrix oracle on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> kd(-10.0, 10.0);
    const SystemParams p = base_params();
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const SpinVector u = oracle::random_unit(rng);
        const double k = kd(rng);
        worst = std::max(worst, (oracle::vec(kick(u, k)) - oracle::kick(oracle::vec(u), k)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (oracle::vec(precess(u, p)) - oracle::precess(oracle::vec(u), p)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("isometry and axis invariants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> kd(-10.0, 10.0);
    SystemParams p = base_params();
    for (int i = 0; i < 100000; ++i) {
        const SpinVector u = oracle::random_unit(rng);
        const double k = kd(rng);
        const SpinVector a = kick(u, k);
        const SpinVector b = precess(u, p);
        REQUIRE(std::abs(a.norm() - 1.0) < 1e-12);
        REQUIRE(std::abs(b.norm() - 1.0) < 1e-12);
        REQUIRE(a.x == u.x);
        REQUIRE(b.z == u.z);
    }
}

TEST_CASE("norm is preserved over 1e4 periods") {
    SystemParams p = base_params();
    p.k = 10.0;
    SpinVector u = SpinVector{0.3, 0.5, 0.7}.normalized();
    for (int i = 0; i < 10000; ++i) u = period_map(u, p);
    CHECK(std::abs(u.norm() - 1.0) < 1e-12);
}

TEST_CASE("inverse_period_map undoes period_map") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> kd(-10.0, 10.0);
    SystemParams p = base_params();
    for (int i = 0; i < 10000; ++i) {
        p.k = kd(rng);
        const SpinVector u = oracle::random_unit(rng);
        const SpinVector back = inverse_period_map(period_map(u, p), p);
        REQUIRE((oracle::vec(back) - oracle::vec(u)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("surface_of_section basic contracts") {
    const SystemParams p = base_params();
    const std::vector<SpinVector> none;
    CHECK(surface_of_section(none, 5, p).empty());
    CHECK_THROWS_AS(surface_of_section(none, 0, p), InputError);

    const std::vector<SpinVector> one{SpinVector{0.2, 0.3, 0.9}.normalized()};
    const auto pts = surface_of_section(one, 1, p);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].q == 1);
    CHECK(pts[0].u == period_map(one[0], p));

    const auto seeds = spiral_seeds(7);
    CHECK(surface_of_section(seeds, 4, p).size() == 28);
}

TEST_CASE("k = 0.01 gives near-horizontal invariant circles") {
    SystemParams p = base_params();
    p.k = 0.01;
    const auto seeds = spiral_seeds(40);
    const auto pts = surface_of_section(seeds, 500, p);
    // Each orbit stays within a thin band of u_z.
    double widest = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        double lo = 2.0, hi = -2.0;
        for (const auto& pt : pts) {
            if (pt.seed != s) continue;
            lo = std::min(lo, pt.u.z);
            hi = std::max(hi, pt.u.z);
        }
        widest = std::max(widest, hi - lo);
    }
    CHECK(widest < 0.1);
}

TEST_CASE("k = 10 orbits fill the sphere") {
    SystemParams p = base_params();
    p.k = 10.0;
    const std::vector<SpinVector> seed{SpinVector{0.3, 0.1, 0.95}.normalized()};
    const auto pts = surface_of_section(seed, 20000, p);
    // Cover 20 equal-area u_z bands.
    std::vector<int> bands(20, 0);
    for (const auto& pt : pts) ++bands[std::min(19, static_cast<int>((pt.u.z + 1.0) * 10.0))];
    CHECK(*std::min_element(bands.begin(), bands.end()) > 0);
}
