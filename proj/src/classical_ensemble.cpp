#include "kicktop/classical_ensemble.hpp"

#include "kicktop/errors.hpp"
#include "kicktop/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kicktop {

namespace {

// Offsets the RNG streams of transition-matrix rings from those of evolution rings.
constexpr std::uint64_t kTransitionSeedSalt = 0x9E3779B97F4A7C15ull;

}  // namespace

ChannelDistribution ChannelDistribution::delta(const SystemParams& params, long N) {
    const ChannelIndex idx = channel_of(N, params);
    ChannelDistribution d{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.n()))};
    d.p(static_cast<Eigen::Index>(params.index_of(idx.N))) = 1.0;
    return d;
}

ChannelDistribution ChannelDistribution::uniform(std::size_t n) {
    return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n))};
}

long bin_channel(const SpinVector& u, const SystemParams& params) noexcept {
    const double m_cont = static_cast<double>(params.J) * u.z;
    long m = static_cast<long>(std::floor(m_cont + 0.5));
    m = std::clamp(m, -params.J, params.J);
    return params.T - m;
}

RingEnsemble init_ring(long N0, std::size_t samples, const SystemParams& params, std::uint64_t seed,
                       double energy_jitter) {
    const ChannelIndex idx = channel_of(N0, params);
    if (samples < 1) throw InputError("init_ring: at least one sample required");
    if (!(energy_jitter >= 0.0)) throw InputError("init_ring: energy_jitter must be >= 0");

    const double J = static_cast<double>(params.J);
    const double lo = std::max(-1.0, (static_cast<double>(idx.m) - 0.5) / J);
    const double hi = std::min(1.0, (static_cast<double>(idx.m) + 0.5) / J);
    if (!(hi > lo)) throw ChannelRangeError("init_ring: empty slice for N0=" + std::to_string(N0));

    RingEnsemble ring;
    ring.rng_seed = seed;
    ring.samples.resize(samples);
    ring.weights.assign(samples, 1.0 / static_cast<double>(samples));
    if (energy_jitter > 0.0) ring.tau_scale.resize(samples);

    const auto stream = static_cast<std::uint64_t>(N0);
    for (std::size_t b = 0; b < block_count(samples); ++b) {
        auto engine = block_engine(seed, stream, b);
        std::uniform_real_distribution<double> uz(lo, hi);
        std::uniform_real_distribution<double> az(0.0, 2.0 * std::numbers::pi);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t end = std::min(samples, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) {
            SpinVector u;
            do {
                const double z = uz(engine);
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = az(engine);
                u = {r * std::cos(phi), r * std::sin(phi), z};
            } while (bin_channel(u, params) != N0);  // rejects draws rounding onto a slice edge
            ring.samples[i] = u;
            if (energy_jitter > 0.0) {
                const double delta = std::max(-0.9, energy_jitter * gauss(engine));
                ring.tau_scale[i] = std::pow(1.0 + delta, -1.5);
            }
        }
    }
    return ring;
}

TransitionMatrix estimate_transition_matrix(const SystemParams& params, std::size_t samples_per_ring,
                                            std::uint64_t seed, unsigned workers) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.n());
    TransitionMatrix tm{Eigen::MatrixXd::Zero(n, n), static_cast<std::int64_t>(samples_per_ring)};

    // The precession is a z-rotation and cannot change the bin, so the kick alone decides the column.
    parallel_for(params.n(), workers, [&](std::size_t col) {
        const long source = params.channel_at(col);
        const RingEnsemble ring = init_ring(source, samples_per_ring, params, seed + kTransitionSeedSalt);
        std::vector<std::int64_t> counts(params.n(), 0);
        for (const SpinVector& u : ring.samples) {
            ++counts[params.index_of(bin_channel(kick(u, params.k), params))];
        }
        for (Eigen::Index row = 0; row < n; ++row) {
            tm.P(row, static_cast<Eigen::Index>(col)) =
                static_cast<double>(counts[static_cast<std::size_t>(row)]) / static_cast<double>(samples_per_ring);
        }
    });
    for (Eigen::Index col = 0; col < n; ++col) tm.P.col(col) /= tm.P.col(col).sum();
    return tm;
}

std::vector<ChannelDistribution> evolve_ensemble(const RingEnsemble& ring, int q, const SystemParams& params,
                                                 unsigned workers) {
    if (q < 1) throw InputError("evolve_ensemble: q must be >= 1");
    if (ring.weights.size() != ring.samples.size()) throw ShapeError("evolve_ensemble: weights/samples size mismatch");
    if (!ring.tau_scale.empty() && ring.tau_scale.size() != ring.samples.size()) {
        throw ShapeError("evolve_ensemble: tau_scale/samples size mismatch");
    }
    params.validate();

    const std::size_t n = params.n();
    const std::size_t samples = ring.samples.size();
    const std::size_t blocks = block_count(samples);
    const auto kicks = static_cast<std::size_t>(q);

    // Per-block tallies [kick][channel], merged afterwards in block order.
    std::vector<std::vector<double>> tallies(blocks);
    parallel_for(blocks, workers, [&](std::size_t b) {
        std::vector<double>& tally = tallies[b];
        tally.assign(kicks * n, 0.0);
        const std::size_t end = std::min(samples, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) {
            const double tau_scale = ring.tau_scale.empty() ? 1.0 : ring.tau_scale[i];
            const double w = ring.weights[i];
            SpinVector u = ring.samples[i];
            for (std::size_t step = 0; step < kicks; ++step) {
                u = period_map(u, params, tau_scale);
                tally[step * n + params.index_of(bin_channel(u, params))] += w;
            }
        }
    });

    std::vector<double> merged(kicks * n, 0.0);
    for (const auto& tally : tallies) {
        for (std::size_t i = 0; i < merged.size(); ++i) merged[i] += tally[i];
    }

    std::vector<ChannelDistribution> out;
    out.reserve(kicks);
    for (std::size_t step = 0; step < kicks; ++step) {
        Eigen::VectorXd p(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = merged[step * n + i];
        p /= p.sum();
        out.push_back({std::move(p)});
    }
    return out;
}

std::vector<ChannelDistribution> markov_evolve(const ChannelDistribution& p0, const TransitionMatrix& P, int q) {
    if (q < 1) throw InputError("markov_evolve: q must be >= 1");
    if (P.P.rows() != P.P.cols() || P.P.cols() != p0.p.size()) {
        throw ShapeError("markov_evolve: transition matrix is " + std::to_string(P.P.rows()) + "x" +
                         std::to_string(P.P.cols()) + " but distribution has " + std::to_string(p0.p.size()) +
                         " channels");
    }
    std::vector<ChannelDistribution> out;
    out.reserve(static_cast<std::size_t>(q));
    Eigen::VectorXd p = p0.p;
    for (int step = 0; step < q; ++step) {
        p = P.P * p;
        out.push_back({p});
    }
    return out;
}

double mutual_information(const ChannelDistribution& p) {
    const auto n = static_cast<double>(p.size());
    if (p.size() < 2) throw DegenerateSystemError("mutual_information: need at least 2 channels");
    return n / (n - 1.0) * (1.0 - p.p.squaredNorm());
}

double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ShapeError("total_variation: size mismatch");
    return 0.5 * (a - b).cwiseAbs().sum();
}

}  // namespace kicktop
