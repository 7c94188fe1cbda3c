#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pushsim/bounds.hpp"
#include "pushsim/config_model.hpp"
#include "pushsim/experiment.hpp"
#include "pushsim/graph.hpp"
#include "pushsim/graph_io.hpp"
#include "pushsim/push_engine.hpp"
#include "pushsim/rng.hpp"
#include "pushsim/spectral.hpp"
#include "pushsim/theory.hpp"

namespace {

using namespace pushsim;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string bound_line(const TailBound& b, bool with_applicable) {
    std::ostringstream o;
    o << "bound=" << std::setprecision(12) << b.value << " informative=" << (b.informative ? 1 : 0);
    if (with_applicable) o << " applicable=" << (b.applicable ? 1 : 0);
    return o.str();
}

int cmd_gen(std::uint32_t n, std::uint32_t d, std::uint64_t seed, bool multigraph,
            const std::string& out) {
    Rng rng(seed);
    Graph g;
    int attempts = 1;
    if (multigraph) {
        std::vector<CloneId> universe(std::size_t(n) * d);
        for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = CloneId(i);
        g = project(sample_matching(universe, rng), n, d);
    } else {
        SimpleSampleReport rep = sample_simple_regular(n, d, rng);
        g = std::move(rep.graph);
        attempts = rep.attempts;
    }
    write_file(out, to_edge_csv(g));
    std::cerr << "attempts=" << attempts << " simple=" << (g.is_simple() ? 1 : 0) << "\n";
    return 0;
}

int cmd_run(std::optional<std::uint32_t> n, std::optional<std::uint32_t> d, std::uint64_t seed,
            const std::string& mode, const std::string& graph_file, std::uint32_t start_1based,
            const std::string& trace_out) {
    if (start_1based < 1) throw CLI::ValidationError("--start", "vertex ids are 1-based");
    Vertex start = start_1based - 1;

    ProtocolTrace trace;
    if (mode == "incremental") {
        if (!graph_file.empty()) {
            throw CLI::ValidationError("--graph",
                                       "incremental mode generates its own pairing; drop --graph");
        }
        if (!n || !d) throw CLI::ValidationError("--n/--d", "required in incremental mode");
        trace = run_incremental(*n, *d, seed, start).trace;
    } else {
        Graph g;
        if (!graph_file.empty()) {
            g = load_graph(graph_file);
        } else {
            if (!n || !d) throw CLI::ValidationError("--n/--d", "required without --graph");
            Rng rng(seed);
            g = sample_simple_regular(*n, *d, rng).graph;
        }
        if (start >= g.num_vertices()) {
            throw CLI::ValidationError("--start", "start vertex out of range");
        }
        trace = run_static(g, start, seed);
    }

    if (!trace_out.empty()) write_file(trace_out, trace_json(trace));

    std::string why;
    bool ok = trace.check_identities(&why);
    std::cout << "T=" << (trace.T ? std::to_string(*trace.T) : "null")
              << " T0=" << (trace.T0 ? std::to_string(*trace.T0) : "null")
              << " T1=" << (trace.T1 ? std::to_string(*trace.T1) : "null")
              << " coverage=" << trace.coverage << "/" << trace.n
              << " identities=" << (ok ? "ok" : why) << "\n";
    return ok ? 0 : 3;
}

int cmd_theory(std::uint32_t n, std::uint32_t d, double p0, double u0, const std::string& out) {
    TheoryParams params;
    params.d = d;
    params.n = n;
    params.p_start = p0;
    params.u_start = u0;
    TheoryTrajectory traj = integrate(params);
    PredictedT pred = predict_T(n, d);

    std::ostringstream o;
    o << std::setprecision(15);
    o << "# C_d = " << traj.c << "\n";
    o << "# q = " << traj.q << "\n";
    o << "# t1 = " << traj.t1 << "\n";
    o << "# t2 = " << (traj.t2 ? std::to_string(*traj.t2) : "none") << "\n";
    o << "# middle_rounds = "
      << (traj.middle_rounds ? std::to_string(*traj.middle_rounds) : "none") << "\n";
    o << "# predicted_T = " << pred.leading << " +- " << pred.early_band + pred.late_band << "\n";
    o << "t,p,u,f,r\n";
    for (std::size_t t = 0; t < traj.p.size(); ++t) {
        o << t << ',' << traj.p[t] << ',' << traj.u[t] << ',' << traj.f[t] << ',' << traj.r[t]
          << "\n";
    }
    write_file(out, o.str());
    if (traj.drift_alarm) std::cerr << "warning: extended-precision drift detected\n";
    return 0;
}

int cmd_spectral(const std::string& graph_file, const std::string& out) {
    Graph g = load_graph(graph_file);
    SpectrumResult sp = spectrum(g);
    nlohmann::json j;
    j["n"] = g.num_vertices();
    j["d"] = g.degree();
    j["lambda1"] = sp.lambda1;
    j["lambda"] = sp.lambda;
    j["alon_boppana"] = sp.alon_boppana;
    j["slack"] = sp.lambda - sp.alon_boppana;
    j["eigenvalues"] = sp.eigenvalues;
    write_file(out, j.dump(2) + "\n");
    std::cout << "lambda=" << std::setprecision(12) << sp.lambda
              << " alon_boppana=" << sp.alon_boppana << "\n";
    return 0;
}

int cmd_typicality(const std::string& graph_file, double eps, std::uint32_t budget,
                   std::uint64_t seed, const std::string& out) {
    Graph g = load_graph(graph_file);
    TypicalityReport rep = typicality_check(g, eps, budget, seed);
    nlohmann::json j;
    j["n"] = g.num_vertices();
    j["d"] = g.degree();
    j["eps"] = rep.eps;
    j["p"] = rep.p;
    j["exhaustive"] = rep.exhaustive;
    j["samples"] = rep.samples;
    j["cond1_pass"] = rep.cond1_pass;
    j["cond2_pass"] = rep.cond2_pass;
    j["cond3_pass"] = rep.cond3_pass;
    j["pass"] = rep.pass;
    nlohmann::json detail = nlohmann::json::array();
    for (const TypicalitySample& s : rep.detail) {
        nlohmann::json e;
        e["size"] = s.size;
        e["condition"] = s.condition;
        e["x_count"] = s.x_count;
        e["x_bound"] = s.x_bound;
        e["cut"] = s.cut;
        e["cut_lo"] = s.cut_lo;
        e["cut_hi"] = s.cut_hi;
        e["per_vertex_pass"] = s.per_vertex_pass;
        e["cut_pass"] = s.cut_pass;
        detail.push_back(std::move(e));
    }
    j["detail"] = std::move(detail);
    write_file(out, j.dump(2) + "\n");
    std::cout << (rep.pass ? "typical" : "not typical") << " (cond1=" << rep.cond1_pass
              << " cond2=" << rep.cond2_pass << " cond3=" << rep.cond3_pass << ")\n";
    return rep.pass ? 0 : 4;
}

int cmd_sweep(const std::string& spec_file, unsigned workers, const std::string& out_dir) {
    std::ifstream in(spec_file);
    if (!in) throw std::runtime_error("cannot read " + spec_file);
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentSpec spec = parse_experiment_spec(buf.str());

    SweepResult result = sweep(spec, workers);

    std::filesystem::create_directories(out_dir);
    std::string csv = summary_csv(result);
    write_file(out_dir + "/summary.csv", csv);
    if (result.retain != TraceRetention::kNone) {
        write_file(out_dir + "/runs.jsonl", runs_jsonl(result));
    }
    std::cout << csv;

    if (!result.identities_all_ok) {
        for (const RunRecord& rec : result.records) {
            if (!rec.identities_ok) {
                std::cerr << "identity violation: cell=" << rec.cell_id << " run=" << rec.run
                          << " seed=" << rec.seed << ": " << rec.identity_error << "\n";
            }
        }
        return 5;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"push rumor spreading on random regular graphs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a d-regular graph, write edge-list CSV");
    std::uint32_t gen_n = 0, gen_d = 3;
    std::uint64_t gen_seed = 1;
    bool gen_multi = false;
    std::string gen_out;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--d", gen_d, "degree (>= 3)")->required()->check(CLI::Range(3u, 1000000u));
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_flag("--multigraph", gen_multi, "keep loops and parallel edges (no rejection)");
    gen->add_option("--out", gen_out, "output CSV path")->required();

    // run
    auto* run = app.add_subcommand("run", "run the push protocol once, write a trace");
    std::optional<std::uint32_t> run_n, run_d;
    std::uint64_t run_seed = 1;
    std::string run_mode = "static", run_graph, run_trace;
    std::uint32_t run_start = 1;
    run->add_option("--n", run_n, "vertex count (when sampling)");
    run->add_option("--d", run_d, "degree (when sampling)");
    run->add_option("--seed", run_seed, "rng seed");
    run->add_option("--mode", run_mode, "static or incremental")
        ->check(CLI::IsMember({"static", "incremental"}));
    run->add_option("--graph", run_graph, "run on this .adj/.csv graph instead of sampling");
    run->add_option("--start", run_start, "start vertex, 1-based");
    run->add_option("--trace", run_trace, "trace JSON output path");

    // theory
    auto* theory = app.add_subcommand("theory", "integrate the two-variable recursion");
    std::uint32_t th_n = 0, th_d = 3;
    double th_p0 = 0, th_u0 = 0;
    std::string th_out;
    theory->add_option("--n", th_n, "vertex count")->required();
    theory->add_option("--d", th_d, "degree (>= 3)")->required()->check(CLI::Range(3u, 1000000u));
    theory->add_option("--p0", th_p0, "seed pool size (default: d * phase threshold)");
    theory->add_option("--u0", th_u0, "seed uninformed count (default: n - phase threshold)");
    theory->add_option("--out", th_out, "output CSV path")->required();

    // spectral
    auto* spectral = app.add_subcommand("spectral", "dense spectrum and second eigenvalue");
    std::string sp_graph, sp_out;
    spectral->add_option("--graph", sp_graph, "graph file (.adj/.csv)")->required();
    spectral->add_option("--out", sp_out, "output JSON path")->required();

    // typicality
    auto* typ = app.add_subcommand("typicality", "audit the three regularity conditions");
    std::string ty_graph, ty_out;
    double ty_eps = 0.1;
    std::uint32_t ty_budget = 1000;
    std::uint64_t ty_seed = 1;
    typ->add_option("--graph", ty_graph, "graph file (.adj/.csv)")->required();
    typ->add_option("--eps", ty_eps, "regularity parameter")->required();
    typ->add_option("--budget", ty_budget, "sampled subsets per stratum bundle");
    typ->add_option("--seed", ty_seed, "rng seed");
    typ->add_option("--out", ty_out, "output JSON path")->required();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate tail bounds");
    bounds->require_subcommand(1);
    auto* chern = bounds->add_subcommand("chernoff", "two-sided Chernoff tail");
    double ch_mu = 0, ch_t = 0;
    chern->add_option("--mu", ch_mu, "mean")->required();
    chern->add_option("--t", ch_t, "deviation")->required();
    auto* tala = bounds->add_subcommand("talagrand", "certifiable-deviation tail");
    double ta_m = 0, ta_t = 0, ta_r = 0, ta_c = 0;
    tala->add_option("--m", ta_m, "permutation length")->required();
    tala->add_option("--t", ta_t, "deviation")->required();
    tala->add_option("--r", ta_r, "certificate rate")->required();
    tala->add_option("--c", ta_c, "Lipschitz constant")->required();
    auto* match = bounds->add_subcommand("matching", "relative-deviation tail for pairing stats");
    double ma_mu = 0, ma_eps = 0;
    std::uint32_t ma_d = 3;
    std::uint64_t ma_n = 0;
    match->add_option("--mu", ma_mu, "mean")->required();
    match->add_option("--eps", ma_eps, "relative deviation")->required();
    match->add_option("--d", ma_d, "degree")->required();
    match->add_option("--n", ma_n, "vertex count (applicability regime)")->required();

    // sweep
    auto* sw = app.add_subcommand("sweep", "run an experiment grid, write summary + run records");
    std::string sw_spec, sw_dir = ".";
    unsigned sw_workers = 1;
    sw->add_option("--spec", sw_spec, "experiment spec JSON")->required();
    sw->add_option("--workers", sw_workers, "worker threads");
    sw->add_option("--out-dir", sw_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_n, gen_d, gen_seed, gen_multi, gen_out);
        if (run->parsed()) {
            return cmd_run(run_n, run_d, run_seed, run_mode, run_graph, run_start, run_trace);
        }
        if (theory->parsed()) return cmd_theory(th_n, th_d, th_p0, th_u0, th_out);
        if (spectral->parsed()) return cmd_spectral(sp_graph, sp_out);
        if (typ->parsed()) return cmd_typicality(ty_graph, ty_eps, ty_budget, ty_seed, ty_out);
        if (bounds->parsed()) {
            if (chern->parsed()) {
                std::cout << bound_line(chernoff_tail(ch_mu, ch_t), false) << "\n";
            } else if (tala->parsed()) {
                std::cout << bound_line(talagrand_tail(ta_m, ta_t, ta_r, ta_c), false) << "\n";
            } else {
                std::cout << bound_line(matching_stat_tail(ma_mu, ma_eps, ma_d, ma_n), true)
                          << "\n";
            }
            return 0;
        }
        if (sw->parsed()) return cmd_sweep(sw_spec, sw_workers, sw_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
