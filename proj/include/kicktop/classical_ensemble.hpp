// classical_ensemble.hpp: ring ensembles, channel binning, Monte-Carlo transition
// matrices, direct ensemble evolution, the Markov recursion and the linearized
// mutual information M.
#pragma once

#include "kicktop/classical_map.hpp"
#include "kicktop/params.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace kicktop {

struct RingEnsemble {
    std::vector<SpinVector> samples;
    std::vector<double> weights;     // non-negative, sum to 1
    std::vector<double> tau_scale;   // per-sample orbital-period factor; empty means all 1
    std::uint64_t rng_seed{0};
};

// p(i) is the probability of channel N = T - J + i.
struct ChannelDistribution {
    Eigen::VectorXd p;

    std::size_t size() const noexcept { return static_cast<std::size_t>(p.size()); }
    static ChannelDistribution delta(const SystemParams& params, long N);
    static ChannelDistribution uniform(std::size_t n);
};

// P(i, j) = P^cl(channel j -> channel i); columns are stochastic.
struct TransitionMatrix {
    Eigen::MatrixXd P;
    std::int64_t sample_count{0};  // samples per source ring
};

// Samples of the slice of channel N0: azimuth uniform, u_z uniform in
// [(m0 - 1/2)/J, (m0 + 1/2)/J] clipped to [-1, 1], m0 = T - N0. Uniform weights.
// energy_jitter > 0 attaches a Gaussian relative energy offset to every sample,
// which rescales its orbital period as (1 + delta)^(-3/2).
RingEnsemble init_ring(long N0, std::size_t samples, const SystemParams& params, std::uint64_t seed,
                       double energy_jitter = 0.0);

// Channel whose slice contains u_z: N = T - round(J*u_z), clamped to the channel range.
// Slices are half-open in m: [m - 1/2, m + 1/2).
long bin_channel(const SpinVector& u, const SystemParams& params) noexcept;

// One ring per source channel, kicked once and binned. Deterministic in seed.
TransitionMatrix estimate_transition_matrix(const SystemParams& params, std::size_t samples_per_ring,
                                            std::uint64_t seed, unsigned workers = 0);

// Direct evolution of every sample under period_map; one distribution per kick 1..q.
std::vector<ChannelDistribution> evolve_ensemble(const RingEnsemble& ring, int q, const SystemParams& params,
                                                 unsigned workers = 0);

// p(q) = P p(q-1), q times; one distribution per step 1..q.
std::vector<ChannelDistribution> markov_evolve(const ChannelDistribution& p0, const TransitionMatrix& P, int q);

// M = n/(n-1) (1 - sum p^2).
double mutual_information(const ChannelDistribution& p);

// Half the L1 distance.
double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace kicktop
