#include "kicktop/semiclassics.hpp"

#include "kicktop/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kicktop {

QuantumRun run_quantum(const SystemParams& params, int q, const OverlapModel& overlap) {
    return run_quantum(params, q, build_torsion_smatrix(params), overlap);
}

QuantumRun run_quantum(const SystemParams& params, int q, const SMatrix& S, const OverlapModel& overlap) {
    const auto states = evolve(ChannelState::delta(params, params.N0), q, params, S);
    QuantumRun run;
    run.p.reserve(states.size());
    run.H.reserve(states.size());
    for (const auto& c : states) {
        run.p.push_back(channel_probabilities(c));
        run.H.push_back(linear_entropy(reduced_density(c, overlap, params), params.n()));
    }
    return run;
}

ClassicalRun run_classical(const SystemParams& params, int q, std::size_t samples, std::uint64_t seed,
                           double energy_jitter, unsigned workers) {
    const RingEnsemble ring = init_ring(params.N0, samples, params, seed, energy_jitter);
    ClassicalRun run;
    run.p = evolve_ensemble(ring, q, params, workers);
    run.M.reserve(run.p.size());
    for (const auto& p : run.p) run.M.push_back(mutual_information(p));
    return run;
}

SMatrixComparison smatrix_vs_classical(const SystemParams& params, std::size_t samples_per_ring, std::uint64_t seed,
                                       double edge_cutoff, unsigned workers) {
    return smatrix_vs_classical(build_torsion_smatrix(params),
                                estimate_transition_matrix(params, samples_per_ring, seed, workers), params,
                                edge_cutoff);
}

SMatrixComparison smatrix_vs_classical(const SMatrix& S, const TransitionMatrix& P, const SystemParams& params,
                                       double edge_cutoff) {
    const auto n = static_cast<Eigen::Index>(params.n());
    if (S.S.rows() != n || P.P.rows() != n || P.P.cols() != n) {
        throw ShapeError("smatrix_vs_classical: matrix sizes do not match the channel count");
    }
    if (!(edge_cutoff > 0.0 && edge_cutoff <= 1.0)) throw InputError("smatrix_vs_classical: edge_cutoff must be in (0, 1]");

    SMatrixComparison out;
    out.coarse_width = std::max(1L, std::lround(std::sqrt(static_cast<double>(params.J))));
    const Eigen::Index blocks = (n + out.coarse_width - 1) / out.coarse_width;

    auto coarse = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(blocks);
        for (Eigen::Index i = 0; i < n; ++i) c(i / out.coarse_width) += v(i);
        return c;
    };

    const Eigen::MatrixXd quantum = S.S.cwiseAbs2();
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const long N = params.channel_at(static_cast<std::size_t>(j));
        const double m = static_cast<double>(params.T - N);
        const Eigen::VectorXd qcol = quantum.col(j);
        const Eigen::VectorXd ccol = P.P.col(j);
        const double d = total_variation(qcol, ccol);
        const bool interior = std::abs(m) <= edge_cutoff * static_cast<double>(params.J);
        out.source.push_back(N);
        out.distance.push_back(d);
        out.interior.push_back(interior);
        if (interior) {
            out.max_interior = std::max(out.max_interior, d);
            out.max_interior_coarse = std::max(out.max_interior_coarse, total_variation(coarse(qcol), coarse(ccol)));
            sum += d;
            ++count;
        }
    }
    out.mean_interior = count > 0 ? sum / static_cast<double>(count) : 0.0;
    return out;
}

namespace {

void check_same_system(const SystemParams& a, const SystemParams& b) {
    auto fail = [](const char* what) {
        throw ConsistencyError(std::string("compare_H_M: quantum and classical runs differ in ") + what);
    };
    if (a.k != b.k) fail("k");
    if (a.N0 != b.N0) fail("N0");
    if (a.J != b.J) fail("J");
    if (a.T != b.T) fail("T");
    if (a.I != b.I) fail("I");
    if (a.tau_eps != b.tau_eps) fail("tau_eps");
}

double trace_distance(const ReducedDensity& a, const ReducedDensity& b) {
    const Eigen::MatrixXcd diff = a.rho - b.rho;
    const bool diagonal = (diff - Eigen::MatrixXcd(diff.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    if (diagonal) return 0.5 * diff.diagonal().cwiseAbs().sum();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("trace_distance: eigensolver failed");
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace

HMComparison compare_H_M(const SystemParams& quantum, const SystemParams& classical, int q_max,
                         std::size_t ensemble_size, std::uint64_t seed, const OverlapModel& overlap,
                         double energy_jitter, unsigned workers) {
    check_same_system(quantum, classical);
    if (q_max < 1) throw InputError("compare_H_M: q_max must be >= 1");

    HMComparison out;
    const SMatrix S = build_torsion_smatrix(quantum);
    const auto states = evolve(ChannelState::delta(quantum, quantum.N0), q_max, quantum, S);
    out.classical = run_classical(classical, q_max, ensemble_size, seed, energy_jitter, workers);

    for (std::size_t i = 0; i < states.size(); ++i) {
        const ReducedDensity rho = reduced_density(states[i], overlap, quantum);
        const double H = linear_entropy(rho, quantum.n());
        out.quantum.p.push_back(channel_probabilities(states[i]));
        out.quantum.H.push_back(H);

        const double M = out.classical.M[i];
        out.H.push_back(H);
        out.M.push_back(M);
        out.deviation.push_back(std::abs(H - M));
        out.sup_deviation = std::max(out.sup_deviation, out.deviation.back());

        out.trace_distance.push_back(trace_distance(rho, build_rho_cc(out.classical.p[i])));
        out.sup_trace_distance = std::max(out.sup_trace_distance, out.trace_distance.back());
    }
    return out;
}

HMComparison compare_H_M(const SystemParams& params, int q_max, std::size_t ensemble_size, std::uint64_t seed,
                         const OverlapModel& overlap, double energy_jitter, unsigned workers) {
    return compare_H_M(params, params, q_max, ensemble_size, seed, overlap, energy_jitter, workers);
}

HbarSweep hbar_sweep(const SystemParams& base, std::span<const double> scales, int q_max, int segment,
                     const OverlapModel& overlap) {
    if (scales.empty()) throw InputError("hbar_sweep: at least one scale required");
    if (segment < 1 || segment > q_max) throw InputError("hbar_sweep: segment must lie in [1, q_max]");

    HbarSweep out;
    out.segment = segment;
    for (const double s : scales) {
        SweepCurve curve;
        curve.scale = s;
        curve.params = rescale(base, s);
        curve.H = run_quantum(curve.params, q_max, overlap).H;
        out.curves.push_back(std::move(curve));
    }

    const auto first = static_cast<std::size_t>(q_max - segment);
    for (std::size_t c = 0; c + 1 < out.curves.size(); ++c) {
        const SweepCurve& from = out.curves[c];
        const SweepCurve& to = out.curves[c + 1];
        ScalingResidual r;
        r.from = c;
        r.to = c + 1;
        for (const double H : from.H) {
            const ScaledEntropy scaled = purity_scaling(std::clamp(H, 0.0, 1.0), from.params.hbar_eff, to.params.hbar_eff);
            r.predicted.push_back(scaled.value);
            r.clamped = r.clamped || scaled.clamped;
        }
        double pred_mean = 0.0;
        double actual_mean = 0.0;
        for (std::size_t q = first; q < to.H.size(); ++q) {
            const double purity_pred = 1.0 - r.predicted[q];
            const double purity = 1.0 - to.H[q];
            pred_mean += purity_pred;
            actual_mean += purity;
            const double rel = purity > 0.0 ? std::abs(purity_pred - purity) / purity
                                             : std::numeric_limits<double>::infinity();
            r.max_relative = std::max(r.max_relative, rel);
        }
        r.mean_relative = actual_mean > 0.0 ? std::abs(pred_mean - actual_mean) / actual_mean
                                            : std::numeric_limits<double>::infinity();
        out.residuals.push_back(std::move(r));
    }
    return out;
}

double ordering_margin(const HbarSweep& sweep, int q_from) {
    std::vector<std::size_t> order(sweep.curves.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sweep.curves[a].params.hbar_eff > sweep.curves[b].params.hbar_eff;
    });
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c + 1 < order.size(); ++c) {
        const auto& coarse = sweep.curves[order[c]].H;
        const auto& fine = sweep.curves[order[c + 1]].H;
        for (std::size_t q = static_cast<std::size_t>(std::max(q_from, 1)) - 1; q < std::min(coarse.size(), fine.size());
             ++q) {
            margin = std::min(margin, fine[q] - coarse[q]);
        }
    }
    return margin;
}

}  // namespace kicktop
