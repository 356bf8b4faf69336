#include "kicktop/quantum_channel.hpp"

#include "kicktop/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace kicktop {

ChannelState ChannelState::delta(const SystemParams& params, long N) {
    const ChannelIndex idx = channel_of(N, params);
    ChannelState s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(params.n()))};
    s.c(static_cast<Eigen::Index>(params.index_of(idx.N))) = 1.0;
    return s;
}

bool ReducedDensity::is_valid(double herm_tol, double trace_tol, double eig_tol) const {
    if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > trace_tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return false;
    return solver.eigenvalues().minCoeff() >= -eig_tol;
}

Eigen::MatrixXd spin_x_matrix(long J) {
    const auto n = static_cast<Eigen::Index>(2 * J + 1);
    const double jj = static_cast<double>(J) * static_cast<double>(J + 1);
    Eigen::MatrixXd Jx = Eigen::MatrixXd::Zero(n, n);
    // Index i holds m = J - i; <m-1|J_x|m> = sqrt(J(J+1) - m(m-1)) / 2.
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double m = static_cast<double>(J - i);
        const double v = 0.5 * std::sqrt(jj - m * (m - 1.0));
        Jx(i, i + 1) = v;
        Jx(i + 1, i) = v;
    }
    return Jx;
}

SMatrix build_torsion_smatrix(const SystemParams& params) {
    params.validate();
    const long J = params.J;
    const auto n = static_cast<Eigen::Index>(params.n());
    const double jj = static_cast<double>(J) * static_cast<double>(J + 1);

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double m = static_cast<double>(J - i);
        sub(i) = 0.5 * std::sqrt(jj - m * (m - 1.0));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "build_torsion_smatrix: tridiagonal eigensolver failed for J=" << J << " (info=" << solver.info()
            << ")";
        throw NumericalError(msg.str());
    }

    // The spectrum of J_x is m' = -J..J; use the exact integers in the phases.
    SMatrix out;
    out.k = params.k;
    out.eigenphases.resize(n);
    Eigen::VectorXcd phase(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ev = solver.eigenvalues()(i);
        const double mp = std::round(ev);
        if (std::abs(ev - mp) > 1e-8) {
            std::ostringstream msg;
            msg << "build_torsion_smatrix: J_x eigenvalue " << ev << " is not an integer (J=" << J << ")";
            throw NumericalError(msg.str());
        }
        out.eigenphases(i) = params.k * mp * mp / (2.0 * static_cast<double>(J));
        phase(i) = std::polar(1.0, out.eigenphases(i));
    }
    const Eigen::MatrixXd& V = solver.eigenvectors();
    const Eigen::MatrixXcd Vc = V.cast<cplx>();
    out.S.noalias() = (Vc * phase.asDiagonal()) * Vc.transpose();
    return out;
}

Eigen::VectorXcd build_rotor_phases(const SystemParams& params) {
    const auto n = static_cast<Eigen::Index>(params.n());
    Eigen::VectorXcd R(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double N = static_cast<double>(params.channel_at(static_cast<std::size_t>(i)));
        const double energy = N * (N + 1.0) / (2.0 * params.I);
        R(i) = std::polar(1.0, -std::fmod(params.tau_eps * energy, 2.0 * std::numbers::pi));
    }
    return R;
}

std::vector<ChannelState> evolve(const ChannelState& c0, int q, const SystemParams& params, const SMatrix& S) {
    if (q < 1) throw InputError("evolve: q must be >= 1");
    const auto n = static_cast<Eigen::Index>(params.n());
    if (c0.c.size() != n || S.S.rows() != n || S.S.cols() != n) {
        throw ShapeError("evolve: state has " + std::to_string(c0.c.size()) + " channels, S-matrix is " +
                         std::to_string(S.S.rows()) + "x" + std::to_string(S.S.cols()) + ", expected n=" +
                         std::to_string(n));
    }
    const Eigen::VectorXcd R = build_rotor_phases(params);
    std::vector<ChannelState> out;
    out.reserve(static_cast<std::size_t>(q));
    Eigen::VectorXcd c = c0.c;
    Eigen::VectorXcd tmp(n);
    for (int step = 0; step < q; ++step) {
        tmp = R.cwiseProduct(c);
        c.noalias() = S.S * tmp;
        out.push_back({c});
    }
    return out;
}

ChannelDistribution channel_probabilities(const ChannelState& c) { return {c.c.cwiseAbs2()}; }

ReducedDensity reduced_density(const ChannelState& c, const OverlapModel& overlap, const SystemParams& params) {
    const auto n = static_cast<Eigen::Index>(params.n());
    if (c.c.size() != n) throw ShapeError("reduced_density: state size does not match channel count");

    if (overlap.mode == OverlapMode::orthogonal) {
        return {c.c.cwiseAbs2().cast<cplx>().asDiagonal()};
    }
    if (!(overlap.sigma_eps > 0.0)) throw InputError("reduced_density: sigma_eps must be > 0 in gaussian mode");

    Eigen::VectorXd energy(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double N = static_cast<double>(params.channel_at(static_cast<std::size_t>(i)));
        energy(i) = N * (N + 1.0) / (2.0 * params.I);
    }
    const double denom = 8.0 * overlap.sigma_eps * overlap.sigma_eps;
    ReducedDensity out{Eigen::MatrixXcd(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dE = energy(i) - energy(j);
            // denom may be +inf (full overlap); dE^2/inf = 0.
            const double kernel = (i == j) ? 1.0 : std::exp(-(dE * dE) / denom);
            out.rho(i, j) = c.c(i) * std::conj(c.c(j)) * kernel;
        }
    }
    // A Hadamard product of PSD matrices is PSD; a failure here means broken arithmetic.
    if (!out.is_valid(1e-12, 1e-10, 1e-10)) {
        throw NumericalError("reduced_density: overlap kernel produced an invalid density matrix");
    }
    return out;
}

double linear_entropy(const ReducedDensity& rho, std::size_t n) {
    if (n < 2) throw DegenerateSystemError("linear_entropy: need at least 2 channels");
    if (rho.rho.rows() != static_cast<Eigen::Index>(n) || rho.rho.cols() != static_cast<Eigen::Index>(n)) {
        throw ShapeError("linear_entropy: density matrix is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    const double nd = static_cast<double>(n);
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
    return nd / (nd - 1.0) * (1.0 - rho.rho.squaredNorm());
}

ScaledEntropy purity_scaling(double H, double hbar_from, double hbar_to) {
    if (!(hbar_from > 0.0) || !(hbar_to > 0.0)) throw DomainError("purity_scaling: hbar values must be positive");
    if (!(H >= 0.0 && H <= 1.0)) throw DomainError("purity_scaling: H must lie in [0, 1]");
    const double raw = 1.0 - (hbar_to / hbar_from) * (1.0 - H);
    if (raw < 0.0) return {0.0, true};
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

double quantum_discord(const ReducedDensity& rho, std::size_t n) { return linear_entropy(rho, n); }

ReducedDensity build_rho_cc(const ChannelDistribution& p_cl) { return {p_cl.p.cast<cplx>().asDiagonal()}; }

}  // namespace kicktop
