// semiclassics.hpp: quantitative quantum/classical comparison harness
#pragma once

#include "kicktop/classical_ensemble.hpp"
#include "kicktop/params.hpp"
#include "kicktop/quantum_channel.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace kicktop {

// Quantum run from the delta state at N0: channel probabilities and H per kick 1..q.
struct QuantumRun {
    std::vector<ChannelDistribution> p;
    std::vector<double> H;
};

QuantumRun run_quantum(const SystemParams& params, int q, const OverlapModel& overlap = {});
QuantumRun run_quantum(const SystemParams& params, int q, const SMatrix& S, const OverlapModel& overlap = {});

// Direct ensemble run from the ring at N0: distributions and M per kick 1..q.
struct ClassicalRun {
    std::vector<ChannelDistribution> p;
    std::vector<double> M;
};

ClassicalRun run_classical(const SystemParams& params, int q, std::size_t samples, std::uint64_t seed,
                           double energy_jitter = 0.0, unsigned workers = 0);

struct SMatrixComparison {
    std::vector<long> source;       // N' per column
    std::vector<double> distance;   // TV between column N' of |S|^2 and of P^cl
    std::vector<bool> interior;     // |m'| <= edge_cutoff * J
    double max_interior{0.0};
    double mean_interior{0.0};
    // Same distance after summing both columns over blocks of coarse_width channels.
    long coarse_width{1};
    double max_interior_coarse{0.0};
};

SMatrixComparison smatrix_vs_classical(const SystemParams& params, std::size_t samples_per_ring, std::uint64_t seed,
                                       double edge_cutoff = 0.8, unsigned workers = 0);
SMatrixComparison smatrix_vs_classical(const SMatrix& S, const TransitionMatrix& P, const SystemParams& params,
                                       double edge_cutoff = 0.8);

struct HMComparison {
    std::vector<double> H;
    std::vector<double> M;
    std::vector<double> deviation;           // |H - M| per kick
    double sup_deviation{0.0};
    std::vector<double> trace_distance;      // between quantum rho_N and rho_cc per kick
    double sup_trace_distance{0.0};
    QuantumRun quantum;
    ClassicalRun classical;
};

// Throws ConsistencyError unless both parameter sets describe the same system.
HMComparison compare_H_M(const SystemParams& quantum, const SystemParams& classical, int q_max,
                         std::size_t ensemble_size, std::uint64_t seed, const OverlapModel& overlap = {},
                         double energy_jitter = 0.0, unsigned workers = 0);
HMComparison compare_H_M(const SystemParams& params, int q_max, std::size_t ensemble_size, std::uint64_t seed,
                         const OverlapModel& overlap = {}, double energy_jitter = 0.0, unsigned workers = 0);

struct SweepCurve {
    double scale{1.0};
    SystemParams params;
    std::vector<double> H;
};

// Purity-scaling prediction from curve `from` to curve `to` and its residual on 1 - H
// over the last `segment` kicks.
struct ScalingResidual {
    std::size_t from{0};
    std::size_t to{0};
    std::vector<double> predicted;   // predicted H for curve `to`, every kick
    bool clamped{false};
    double mean_relative{0.0};       // |<1-H_pred> - <1-H>| / <1-H> over the segment
    double max_relative{0.0};        // pointwise maximum over the segment
};

struct HbarSweep {
    std::vector<SweepCurve> curves;
    std::vector<ScalingResidual> residuals;  // consecutive pairs in input order
    int segment{10};
};

HbarSweep hbar_sweep(const SystemParams& base, std::span<const double> scales, int q_max, int segment = 10,
                     const OverlapModel& overlap = {});

// min over q >= q_from and consecutive curve pairs (ordered by decreasing hbar_eff)
// of H_finer(q) - H_coarser(q). Non-negative iff the curves are pointwise ordered.
double ordering_margin(const HbarSweep& sweep, int q_from);

}  // namespace kicktop
