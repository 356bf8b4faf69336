// quantum_channel.hpp: exact stroboscopic quantum evolution on the n = 2J+1 channels
//
// One period is c -> S R c: the rotor phases R_N = exp(-i tau_eps E_N), E_N = N(N+1)/2I,
// followed by the torsion S-matrix S = exp(i k J_x^2 / 2J). Amplitudes are stored in
// ascending N, i.e. descending m = T - N.
#pragma once

#include "kicktop/classical_ensemble.hpp"
#include "kicktop/params.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace kicktop {

using cplx = std::complex<double>;

struct ChannelState {
    Eigen::VectorXcd c;

    static ChannelState delta(const SystemParams& params, long N);
    double norm() const { return c.norm(); }
};

struct SMatrix {
    Eigen::MatrixXcd S;
    double k{0.0};
    Eigen::VectorXd eigenphases;  // k m'^2 / 2J for m' = -J..J in eigenvector order
};

struct ReducedDensity {
    Eigen::MatrixXcd rho;

    // Hermitian, unit trace and positive semidefinite within the given tolerances.
    bool is_valid(double herm_tol = 1e-12, double trace_tol = 1e-10, double eig_tol = 1e-10) const;
};

enum class OverlapMode { orthogonal, gaussian };

// Overlap between channel wavepackets: O_{NN'} = exp(-(E_N - E_N')^2 / (8 sigma_eps^2)).
struct OverlapModel {
    OverlapMode mode{OverlapMode::orthogonal};
    double sigma_eps{0.0};
};

// Spin-J x-component in the channel basis (real symmetric tridiagonal).
Eigen::MatrixXd spin_x_matrix(long J);

SMatrix build_torsion_smatrix(const SystemParams& params);

Eigen::VectorXcd build_rotor_phases(const SystemParams& params);

// One state per kick 1..q.
std::vector<ChannelState> evolve(const ChannelState& c0, int q, const SystemParams& params, const SMatrix& S);

ChannelDistribution channel_probabilities(const ChannelState& c);

ReducedDensity reduced_density(const ChannelState& c, const OverlapModel& overlap, const SystemParams& params);

// H = n/(n-1) (1 - Tr rho^2).
double linear_entropy(const ReducedDensity& rho, std::size_t n);

struct ScaledEntropy {
    double value;
    bool clamped;  // raw mapping fell outside [0, 1]
};

// H' = 1 - (hbar_to / hbar_from)(1 - H). Meaningful only for saturated (uniform) spreading.
ScaledEntropy purity_scaling(double H, double hbar_from, double hbar_to);

// In this model the reduced state comes from a pure bipartite state whose
// pointer-basis coherences are unobservable, and the discord reduces to H.
// Not a general discord algorithm.
double quantum_discord(const ReducedDensity& rho, std::size_t n);

// Top-side reduced matrix of the classically-correlated state: diag(p_cl).
ReducedDensity build_rho_cc(const ChannelDistribution& p_cl);

}  // namespace kicktop
