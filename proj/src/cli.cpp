#include "kicktop/cli.hpp"

#include "kicktop/classical_ensemble.hpp"
#include "kicktop/classical_map.hpp"
#include "kicktop/config.hpp"
#include "kicktop/csv.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/quantum_channel.hpp"
#include "kicktop/semiclassics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <vector>

namespace kicktop::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string config;
    std::optional<int> kicks;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> outdir;
    unsigned threads{0};
    bool dump_smatrix{false};
};

// Shared state of one invocation: resolved spec, output location, summary document.
struct Context {
    std::string command;
    RunSpec spec;
    fs::path outdir;
    std::string prefix;
    unsigned threads{0};
    json summary;
    std::vector<std::string> files;

    fs::path file(const std::string& role) {
        const std::string name = prefix + "_" + role + ".csv";
        files.push_back(name);
        return outdir / name;
    }
};

using Cell = CsvWriter::Cell;

long long as_int(auto v) { return static_cast<long long>(v); }

json params_json(const SystemParams& p) {
    return json{{"k", p.k},   {"J", p.J},         {"T", p.T},
                {"N0", p.N0}, {"I", p.I},         {"tau_eps", p.tau_eps},
                {"n", p.n()}, {"hbar_eff", p.hbar_eff}};
}

void write_curve(const fs::path& path, const char* name, const std::vector<double>& values) {
    CsvWriter csv(path, {"q", name});
    for (std::size_t i = 0; i < values.size(); ++i) csv.row({as_int(i + 1), values[i]});
}

void write_distributions(const fs::path& path, const SystemParams& p, const std::vector<ChannelDistribution>& dists) {
    CsvWriter csv(path, {"q", "N", "p"});
    for (std::size_t q = 0; q < dists.size(); ++q) {
        for (std::size_t i = 0; i < p.n(); ++i) {
            csv.row({as_int(q + 1), as_int(p.channel_at(i)), dists[q].p(static_cast<Eigen::Index>(i))});
        }
    }
}

std::string run_sos(Context& ctx) {
    const SystemParams& p = ctx.spec.system;
    const auto seeds = spiral_seeds(ctx.spec.sos_seeds);
    const auto points = surface_of_section(seeds, ctx.spec.kicks, p);
    CsvWriter csv(ctx.file("sos"), {"q", "ux", "uy", "uz"});
    double drift = 0.0;
    for (const auto& pt : points) {
        csv.row({as_int(pt.q), pt.u.x, pt.u.y, pt.u.z});
        drift = std::max(drift, std::abs(pt.u.norm() - 1.0));
    }
    ctx.summary["metrics"] = {{"seeds", seeds.size()}, {"points", points.size()}, {"max_norm_drift", drift}};
    return "sos: " + std::to_string(points.size()) + " points from " + std::to_string(seeds.size()) + " seeds";
}

std::string run_classical_cmd(Context& ctx) {
    const SystemParams& p = ctx.spec.system;
    const RunSpec& s = ctx.spec;
    const RingEnsemble ring = init_ring(p.N0, s.samples, p, s.seed, s.energy_jitter);
    const auto direct = evolve_ensemble(ring, s.kicks, p, ctx.threads);
    const TransitionMatrix tm = estimate_transition_matrix(p, s.samples, s.seed, ctx.threads);
    const auto markov = markov_evolve(ChannelDistribution::delta(p, p.N0), tm, s.kicks);

    std::vector<double> M, M_markov;
    for (const auto& d : direct) M.push_back(mutual_information(d));
    for (const auto& d : markov) M_markov.push_back(mutual_information(d));

    write_curve(ctx.file("M"), "M", M);
    write_curve(ctx.file("M_markov"), "M", M_markov);
    write_distributions(ctx.file("p_classical"), p, direct);

    {
        std::vector<std::string> header{"N"};
        for (std::size_t i = 0; i < p.n(); ++i) header.push_back(std::to_string(p.channel_at(i)));
        CsvWriter csv(ctx.file("transition"), header);
        for (Eigen::Index r = 0; r < tm.P.rows(); ++r) {
            std::vector<Cell> cells{as_int(p.channel_at(static_cast<std::size_t>(r)))};
            for (Eigen::Index c = 0; c < tm.P.cols(); ++c) cells.emplace_back(tm.P(r, c));
            csv.row(cells);
        }
    }

    {
        // Sphere snapshots of a subsample for plotting; same trajectories as the ensemble run.
        const std::size_t shown = std::min<std::size_t>(ring.samples.size(), 2000);
        CsvWriter csv(ctx.file("snapshots"), {"q", "ux", "uy", "uz"});
        for (std::size_t i = 0; i < shown; ++i) {
            SpinVector u = ring.samples[i];
            const double tau_scale = ring.tau_scale.empty() ? 1.0 : ring.tau_scale[i];
            csv.row({as_int(0), u.x, u.y, u.z});
            for (int q = 1; q <= s.kicks; ++q) {
                u = period_map(u, p, tau_scale);
                csv.row({as_int(q), u.x, u.y, u.z});
            }
        }
    }

    const double tv = total_variation(direct.back().p, markov.back().p);
    ctx.summary["metrics"] = {{"M_final", M.back()},
                              {"M_markov_final", M_markov.back()},
                              {"markov_direct_tv_final", tv}};
    return "classical: M(" + std::to_string(s.kicks) + ") = " + format_real(M.back()) +
           ", Markov TV = " + format_real(tv);
}

std::string run_quantum_cmd(Context& ctx, bool dump_smatrix) {
    const SystemParams& p = ctx.spec.system;
    const SMatrix S = build_torsion_smatrix(p);
    const QuantumRun run = run_quantum(p, ctx.spec.kicks, S, ctx.spec.overlap);

    write_curve(ctx.file("H"), "H", run.H);
    write_distributions(ctx.file("p_quantum"), p, run.p);
    if (dump_smatrix) {
        CsvWriter csv(ctx.file("smatrix"), {"N", "N_prime", "re", "im"});
        for (Eigen::Index c = 0; c < S.S.cols(); ++c) {
            for (Eigen::Index r = 0; r < S.S.rows(); ++r) {
                csv.row({as_int(p.channel_at(static_cast<std::size_t>(r))),
                         as_int(p.channel_at(static_cast<std::size_t>(c))), S.S(r, c).real(), S.S(r, c).imag()});
            }
        }
    }

    const auto n = S.S.rows();
    const double unitarity = (S.S.adjoint() * S.S - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    double norm_drift = 0.0;
    for (const auto& d : run.p) norm_drift = std::max(norm_drift, std::abs(d.p.sum() - 1.0));
    ctx.summary["metrics"] = {{"H_final", run.H.back()},
                              {"unitarity_error", unitarity},
                              {"max_norm_drift", norm_drift}};
    return "quantum: H(" + std::to_string(ctx.spec.kicks) + ") = " + format_real(run.H.back());
}

std::string run_compare(Context& ctx) {
    const RunSpec& s = ctx.spec;
    const HMComparison cmp =
        compare_H_M(s.system, s.kicks, s.samples, s.seed, s.overlap, s.energy_jitter, ctx.threads);
    write_curve(ctx.file("H"), "H", cmp.H);
    write_curve(ctx.file("M"), "M", cmp.M);
    CsvWriter csv(ctx.file("compare"), {"q", "H", "M", "abs_diff", "trace_distance"});
    for (std::size_t i = 0; i < cmp.H.size(); ++i) {
        csv.row({as_int(i + 1), cmp.H[i], cmp.M[i], cmp.deviation[i], cmp.trace_distance[i]});
    }
    ctx.summary["metrics"] = {{"sup_deviation", cmp.sup_deviation},
                              {"sup_trace_distance", cmp.sup_trace_distance},
                              {"H_final", cmp.H.back()},
                              {"M_final", cmp.M.back()}};
    return "compare: sup|H-M| = " + format_real(cmp.sup_deviation);
}

std::string run_sweep(Context& ctx) {
    const RunSpec& s = ctx.spec;
    const int segment = std::min(10, s.kicks);
    const HbarSweep sweep = hbar_sweep(s.system, s.scales, s.kicks, segment, s.overlap);

    json curves = json::array();
    for (const auto& c : sweep.curves) {
        write_curve(ctx.file("J" + std::to_string(c.params.J) + "_H"), "H", c.H);
        curves.push_back({{"scale", c.scale}, {"params", params_json(c.params)}, {"H_final", c.H.back()}});
    }
    json residuals = json::array();
    if (!sweep.residuals.empty()) {
        CsvWriter csv(ctx.file("scaling"), {"q", "from_J", "to_J", "H_predicted", "H_actual"});
        for (const auto& r : sweep.residuals) {
            const auto& from = sweep.curves[r.from];
            const auto& to = sweep.curves[r.to];
            for (std::size_t q = 0; q < r.predicted.size(); ++q) {
                csv.row({as_int(q + 1), as_int(from.params.J), as_int(to.params.J), r.predicted[q], to.H[q]});
            }
            residuals.push_back({{"from_J", from.params.J},
                                 {"to_J", to.params.J},
                                 {"mean_relative", r.mean_relative},
                                 {"max_relative", r.max_relative},
                                 {"clamped", r.clamped}});
        }
    }
    ctx.summary["metrics"] = {{"segment", segment}, {"curves", curves}, {"residuals", residuals}};
    if (s.kicks >= 5) ctx.summary["metrics"]["ordering_margin_q5"] = ordering_margin(sweep, 5);
    return "sweep: " + std::to_string(sweep.curves.size()) + " curves";
}

std::string run_smatrix_check(Context& ctx) {
    const RunSpec& s = ctx.spec;
    const SMatrixComparison cmp = smatrix_vs_classical(s.system, s.samples, s.seed, s.edge_cutoff, ctx.threads);
    CsvWriter csv(ctx.file("smatrix_check"), {"N_prime", "m_prime", "distance", "interior"});
    for (std::size_t i = 0; i < cmp.source.size(); ++i) {
        csv.row({as_int(cmp.source[i]), as_int(s.system.T - cmp.source[i]), cmp.distance[i],
                 as_int(cmp.interior[i] ? 1 : 0)});
    }
    ctx.summary["metrics"] = {{"max_interior", cmp.max_interior},
                              {"mean_interior", cmp.mean_interior},
                              {"coarse_width", cmp.coarse_width},
                              {"max_interior_coarse", cmp.max_interior_coarse}};
    return "smatrix-check: max interior TV = " + format_real(cmp.max_interior);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string output_prefix(const std::string& config_stem) {
    static const std::regex fig(R"(fig(\d+)([a-z]))");
    std::smatch m;
    if (std::regex_match(config_stem, m, fig)) return "fig" + m[1].str() + "_" + m[2].str();
    return config_stem;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum/classical kicked-top co-simulator", "kicktop"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"sos", "classical surface of section"},
        {"classical", "ring-ensemble evolution, transition matrix and Markov recursion"},
        {"quantum", "exact channel evolution and linear entropy H"},
        {"compare", "quantum H(q) against classical M(q)"},
        {"sweep", "H curves across hbar_eff scales and the purity scaling check"},
        {"smatrix-check", "|S|^2 columns against Monte-Carlo kick transitions"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opt.config, "configuration file")->required();
        sub->add_option("--kicks", opt.kicks, "override run.kicks");
        sub->add_option("--seed", opt.seed, "override run.seed");
        sub->add_option("--outdir", opt.outdir, "override run.outdir");
        sub->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        if (name == "quantum") sub->add_flag("--dump-smatrix", opt.dump_smatrix, "also write S as (re, im) pairs");
    }

    std::vector<const char*> argv{"kicktop"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.threads = opt.threads;
    try {
        ctx.spec = parse_config(read_file(opt.config));
        if (opt.kicks) {
            if (*opt.kicks < 1) throw ConfigError("run.kicks must be >= 1 (from --kicks)");
            ctx.spec.kicks = *opt.kicks;
        }
        if (opt.seed) ctx.spec.seed = *opt.seed;
        if (opt.outdir) ctx.spec.outdir = *opt.outdir;
        ctx.spec.validate();

        ctx.outdir = ctx.spec.outdir;
        ctx.prefix = output_prefix(fs::path(opt.config).stem().string());
        fs::create_directories(ctx.outdir);
        {
            std::ofstream resolved(ctx.outdir / "resolved.cfg", std::ios::binary | std::ios::trunc);
            resolved << emit_config(ctx.spec);
        }

        ctx.summary["command"] = ctx.command;
        ctx.summary["config"] = fs::path(opt.config).filename().string();
        ctx.summary["prefix"] = ctx.prefix;
        ctx.summary["params"] = params_json(ctx.spec.system);
        ctx.summary["run"] = {{"kicks", ctx.spec.kicks},
                              {"seed", ctx.spec.seed},
                              {"samples", ctx.spec.samples},
                              {"overlap_mode", to_string(ctx.spec.overlap.mode)},
                              {"sigma_eps", ctx.spec.overlap.sigma_eps},
                              {"energy_jitter", ctx.spec.energy_jitter}};

        std::string line;
        if (ctx.command == "sos") line = run_sos(ctx);
        else if (ctx.command == "classical") line = run_classical_cmd(ctx);
        else if (ctx.command == "quantum") line = run_quantum_cmd(ctx, opt.dump_smatrix);
        else if (ctx.command == "compare") line = run_compare(ctx);
        else if (ctx.command == "sweep") line = run_sweep(ctx);
        else line = run_smatrix_check(ctx);

        ctx.summary["files"] = ctx.files;
        std::ofstream summary(ctx.outdir / (ctx.prefix + "_summary.json"), std::ios::binary | std::ios::trunc);
        summary << ctx.summary.dump(2) << '\n';
        out << line << " [" << ctx.outdir.string() << "]\n";
        return kExitOk;
    } catch (const InputError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace kicktop::cli
