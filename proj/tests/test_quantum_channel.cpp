#include "kicktop/errors.hpp"
#include "kicktop/quantum_channel.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <limits>
#include <numbers>
#include <random>

using namespace kicktop;

namespace {

SystemParams params(long J, double k, double tau_over_I = std::numbers::pi / 100.0) {
    SystemParams p;
    p.k = k;
    p.J = J;
    p.T = 5 * J;
    p.N0 = 5 * J;
    p.I = 100.0;
    p.tau_eps = tau_over_I * p.I;
    p.hbar_eff = 1.0 / static_cast<double>(J);
    return p;
}

ChannelState random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd c(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = cplx(g(rng), g(rng));
    return {c / c.norm()};
}

}  // namespace

TEST_CASE("spin_x_matrix has the J_x spectrum") {
    for (const long J : {1L, 2L, 5L}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spin_x_matrix(J));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            CHECK(es.eigenvalues()(i) == doctest::Approx(static_cast<double>(i - J)).epsilon(1e-12));
        }
    }
}

TEST_CASE("torsion S-matrix for k = 0 is the identity") {
    const SMatrix S = build_torsion_smatrix(params(10, 0.0));
    CHECK((S.S - Eigen::MatrixXcd::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("torsion S-matrix equals the dense matrix exponential of the generator") {
    for (const long J : {1L, 2L, 3L, 5L, 10L}) {
        for (const double k : {0.25, 1.0, 10.0}) {
            const SMatrix S = build_torsion_smatrix(params(J, k));
            const Eigen::MatrixXd Jx = spin_x_matrix(J);
            const Eigen::MatrixXcd G = cplx(0.0, k / (2.0 * static_cast<double>(J))) * (Jx * Jx).cast<cplx>();
            const Eigen::MatrixXcd E = G.exp();
            CHECK((S.S - E).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("torsion S-matrix is unitary, symmetric and |S|^2 is doubly stochastic") {
    for (const long J : {1L, 10L, 37L, 100L}) {
        for (const double k : {0.01, 0.25, 1.0, 10.0}) {
            const SMatrix S = build_torsion_smatrix(params(J, k));
            const auto n = S.S.rows();
            CHECK((S.S.adjoint() * S.S - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((S.S - S.S.transpose()).cwiseAbs().maxCoeff() < 1e-10);
            const Eigen::MatrixXd P = S.S.cwiseAbs2();
            CHECK((P.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
            CHECK((P.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("rotor phases") {
    SystemParams p = params(10, 0.25);
    const Eigen::VectorXcd R = build_rotor_phases(p);
    // tau/I = pi/100: phase -pi/100 * N(N+1)/2 reduced mod 2 pi by hand.
    auto at = [&](long N) { return R(static_cast<Eigen::Index>(p.index_of(N))); };
    CHECK(std::abs(at(40) - std::polar(1.0, -0.2 * std::numbers::pi)) < 1e-12);
    CHECK(std::abs(at(50) - std::polar(1.0, -0.75 * std::numbers::pi)) < 1e-12);
    CHECK(std::abs(at(60) - std::polar(1.0, -0.3 * std::numbers::pi)) < 1e-12);

    p.tau_eps = 0.0;
    CHECK((build_rotor_phases(p).array() - cplx(1.0, 0.0)).abs().maxCoeff() == 0.0);
    p.tau_eps = 1.0;
    p.I = 1e300;
    CHECK((build_rotor_phases(p).array() - cplx(1.0, 0.0)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("evolve with k = 0 keeps the channel distribution") {
    const SystemParams p = params(10, 0.0);
    const auto states = evolve(ChannelState::delta(p, 47), 20, p, build_torsion_smatrix(p));
    for (const auto& s : states) {
        CHECK((channel_probabilities(s).p - Eigen::VectorXd::Unit(21, 7)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("one kick selects a column of |S|^2") {
    const SystemParams p = params(10, 1.0);
    const SMatrix S = build_torsion_smatrix(p);
    const auto states = evolve(ChannelState::delta(p, p.N0), 1, p, S);
    const Eigen::VectorXd col = S.S.col(static_cast<Eigen::Index>(p.index_of(p.N0))).cwiseAbs2();
    CHECK((channel_probabilities(states[0]).p - col).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("evolve conserves the norm over 1000 kicks") {
    const SystemParams p = params(50, 10.0);
    const auto states = evolve(ChannelState::delta(p, 240), 1000, p, build_torsion_smatrix(p));
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, std::abs(channel_probabilities(s).p.sum() - 1.0));
    CHECK(worst < 1e-10);
}

TEST_CASE("evolve rejects mismatched shapes") {
    const SystemParams p = params(10, 1.0);
    const SMatrix S = build_torsion_smatrix(params(5, 1.0));
    CHECK_THROWS_AS(evolve(ChannelState::delta(p, p.N0), 1, p, S), ShapeError);
}

TEST_CASE("channel_probabilities") {
    const SystemParams p = params(10, 0.25);
    CHECK(channel_probabilities(ChannelState::delta(p, 45)).p == Eigen::VectorXd::Unit(21, 5));
    Eigen::VectorXcd equal(21);
    for (Eigen::Index i = 0; i < 21; ++i) equal(i) = std::polar(1.0 / std::sqrt(21.0), 0.3 * static_cast<double>(i));
    CHECK((channel_probabilities({equal}).p.array() - 1.0 / 21.0).abs().maxCoeff() < 1e-15);
    std::mt19937_64 rng(4);
    CHECK(std::abs(channel_probabilities(random_state(21, rng)).p.sum() - 1.0) < 1e-12);
}

TEST_CASE("reduced_density modes") {
    const SystemParams p = params(10, 0.25);
    std::mt19937_64 rng(9);
    const ChannelState c = random_state(21, rng);
    const Eigen::VectorXd probs = channel_probabilities(c).p;

    const ReducedDensity orth = reduced_density(c, {}, p);
    CHECK(orth.is_valid());
    CHECK((orth.rho - Eigen::MatrixXcd(probs.cast<cplx>().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    const ReducedDensity full =
        reduced_density(c, {OverlapMode::gaussian, std::numeric_limits<double>::infinity()}, p);
    CHECK((full.rho - c.c * c.c.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(linear_entropy(full, 21) == doctest::Approx(0.0).epsilon(1e-12));

    const ReducedDensity none = reduced_density(c, {OverlapMode::gaussian, 1e-6}, p);
    CHECK((none.rho - orth.rho).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(reduced_density(c, {OverlapMode::gaussian, 0.0}, p), InputError);
}

TEST_CASE("linear_entropy of the two reduced-density paths agrees with the probability formula") {
    const SystemParams p = params(10, 0.25);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const ChannelState c = random_state(21, rng);
        const double H = linear_entropy(reduced_density(c, {}, p), 21);
        const Eigen::VectorXd probs = channel_probabilities(c).p;
        const double direct = 21.0 / 20.0 * (1.0 - probs.squaredNorm());
        REQUIRE(std::abs(H - direct) < 1e-12);
    }
}

TEST_CASE("linear_entropy examples") {
    const SystemParams p = params(10, 0.25);
    const ChannelState d = ChannelState::delta(p, 50);
    CHECK(linear_entropy(reduced_density(d, {}, p), 21) == 0.0);
    const ReducedDensity mixed{Eigen::MatrixXcd::Identity(21, 21) / 21.0};
    CHECK(linear_entropy(mixed, 21) == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::VectorXd half = Eigen::VectorXd::Zero(21);
    half(0) = half(1) = 0.5;
    CHECK(linear_entropy(build_rho_cc({half}), 21) == doctest::Approx(0.525).epsilon(1e-14));
    CHECK_THROWS_AS(linear_entropy(ReducedDensity{Eigen::MatrixXcd::Ones(1, 1)}, 1), DegenerateSystemError);
    CHECK_THROWS_AS(linear_entropy(mixed, 20), ShapeError);
}

TEST_CASE("gaussian overlap: entropy decreases as the wavepacket width grows") {
    const SystemParams p = params(10, 0.25);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelState c = random_state(21, rng);
        double previous = linear_entropy(reduced_density(c, {}, p), 21);
        for (const double sigma : {0.05, 0.2, 0.5, 1.0, 5.0}) {
            const ReducedDensity rho = reduced_density(c, {OverlapMode::gaussian, sigma}, p);
            REQUIRE(rho.is_valid());
            const double H = linear_entropy(rho, 21);
            REQUIRE(H <= previous + 1e-14);
            previous = H;
        }
    }
}

TEST_CASE("purity_scaling examples") {
    CHECK(purity_scaling(1.0, 0.5, 0.01).value == 1.0);
    CHECK(purity_scaling(0.37, 0.1, 0.1).value == doctest::Approx(0.37).epsilon(1e-15));
    const ScaledEntropy s = purity_scaling(0.9, 0.25, 0.1);
    CHECK(s.value == doctest::Approx(0.96).epsilon(1e-14));
    CHECK_FALSE(s.clamped);
    const ScaledEntropy c = purity_scaling(0.2, 0.1, 0.5);
    CHECK(c.clamped);
    CHECK(c.value == 0.0);
    CHECK_THROWS_AS(purity_scaling(0.5, 0.0, 0.1), DomainError);
    CHECK_THROWS_AS(purity_scaling(0.5, 0.1, -1.0), DomainError);
}

TEST_CASE("quantum_discord equals the linear entropy") {
    const SystemParams p = params(10, 0.25);
    CHECK(quantum_discord(reduced_density(ChannelState::delta(p, 50), {}, p), 21) == 0.0);
    const ReducedDensity mixed{Eigen::MatrixXcd::Identity(21, 21) / 21.0};
    CHECK(quantum_discord(mixed, 21) == doctest::Approx(1.0).epsilon(1e-14));
    std::mt19937_64 rng(30);
    const ReducedDensity rho = reduced_density(random_state(21, rng), {OverlapMode::gaussian, 0.3}, p);
    CHECK(quantum_discord(rho, 21) == linear_entropy(rho, 21));
}

TEST_CASE("build_rho_cc") {
    const ReducedDensity u = build_rho_cc(ChannelDistribution::uniform(21));
    CHECK((u.rho - Eigen::MatrixXcd::Identity(21, 21) / 21.0).cwiseAbs().maxCoeff() < 1e-16);
    const SystemParams p = params(10, 0.25);
    const ReducedDensity d = build_rho_cc(ChannelDistribution::delta(p, 52));
    CHECK((d.rho * d.rho - d.rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.is_valid());
    std::mt19937_64 rng(1);
    const ReducedDensity r = build_rho_cc(channel_probabilities(random_state(21, rng)));
    CHECK(std::abs(r.rho.trace() - cplx(1.0, 0.0)) < 1e-12);
}
