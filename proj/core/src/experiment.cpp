#include "pushsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pushsim/bounds.hpp"
#include "pushsim/config_model.hpp"
#include "pushsim/graph_io.hpp"
#include "pushsim/rng.hpp"
#include "pushsim/spectral.hpp"

namespace pushsim {

namespace {

constexpr std::uint64_t kResampleSalt = 0x632be59bd9b4e019ull;
constexpr int kMaxCoverageAttempts = 100;
constexpr std::uint32_t kFullTracesPerCell = 50;

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0;
    double s = 0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2.0;
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0;
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / double(xs.size() - 1));
}

RunRecord run_one(const ExperimentSpec& spec, std::uint32_t ci, std::uint32_t ri,
                  const Graph* fixture) {
    const CellSpec& cell = spec.cells[ci];
    RunRecord rec;
    rec.cell_index = ci;
    rec.cell_id = cell.id();
    rec.run = ri;
    rec.seed = derive_seed(spec.master_seed, ci, ri);
    rec.mode = spec.mode;

    auto t_begin = std::chrono::steady_clock::now();

    ProtocolTrace trace;
    Graph sampled;
    const Graph* graph = fixture;

    if (cell.kind == CellKind::kRandomRegular) {
        std::uint64_t s = rec.seed;
        for (int a = 1;; ++a) {
            if (a > kMaxCoverageAttempts) {
                throw SamplingError(rec.cell_id + ": no full-coverage run in " +
                                        std::to_string(kMaxCoverageAttempts) + " attempts",
                                    kMaxCoverageAttempts);
            }
            if (spec.mode == PushMode::kIncremental) {
                IncrementalRun r = run_incremental(cell.n, cell.d, s, 0);
                if (r.trace.coverage == cell.n) {
                    trace = std::move(r.trace);
                    sampled = std::move(r.graph);
                    rec.attempts = a;
                    break;
                }
            } else {
                Rng rng(s);
                SimpleSampleReport rep = sample_simple_regular(cell.n, cell.d, rng);
                ProtocolTrace t = run_static(rep.graph, 0, rng.u64());
                if (t.coverage == cell.n) {
                    trace = std::move(t);
                    sampled = std::move(rep.graph);
                    rec.attempts = a;
                    break;
                }
            }
            s = mix64(s ^ kResampleSalt);
        }
        graph = &sampled;
    } else {
        trace = run_static(*fixture, 0, rec.seed);
    }

    rec.n = trace.n;
    rec.d = trace.d;
    rec.T = trace.T;
    rec.T0 = trace.T0;
    rec.T1 = trace.T1;
    rec.coverage = trace.coverage;

    std::string why;
    rec.identities_ok = trace.check_identities(&why);
    if (!rec.identities_ok) rec.identity_error = why;

    FinalPhaseReport phase = final_phase_diagnostics(trace, *graph);
    if (phase.applicable) {
        bool dense = false, expansion = false;
        for (const FinalPhaseRound& r : phase.rounds) {
            dense = dense || r.dense_flag;
            expansion = expansion || r.expansion_flag;
        }
        rec.dense_ok = !dense;
        rec.expansion_ok = !expansion;
    }

    if (spec.retain == TraceRetention::kFull && ri < kFullTracesPerCell) {
        rec.trace = std::move(trace);
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t_begin)
                      .count();
    return rec;
}

}  // namespace

std::string CellSpec::id() const {
    std::ostringstream o;
    switch (kind) {
        case CellKind::kRandomRegular:
            o << "random-regular-n" << n << "-d" << d;
            break;
        case CellKind::kComplete:
            o << "complete-n" << n;
            break;
        case CellKind::kPaley:
            o << "paley-q" << q;
            break;
        case CellKind::kFile:
            o << "file-" << std::filesystem::path(path).stem().string();
            break;
    }
    return o.str();
}

void ExperimentSpec::validate() const {
    if (cells.empty()) throw std::invalid_argument("sweep spec: no cells");
    if (runs < 1) throw std::invalid_argument("sweep spec: runs must be >= 1");
    for (const CellSpec& cell : cells) {
        switch (cell.kind) {
            case CellKind::kRandomRegular:
                if (cell.n < 2 || cell.d < 1) {
                    throw std::invalid_argument(cell.id() + ": need n >= 2 and d >= 1");
                }
                if ((std::uint64_t(cell.n) * cell.d) % 2 != 0) {
                    throw std::invalid_argument(cell.id() + ": n*d must be even");
                }
                break;
            case CellKind::kComplete:
                if (cell.n < 2) throw std::invalid_argument(cell.id() + ": need n >= 2");
                break;
            case CellKind::kPaley:
                if (cell.q < 5 || cell.q % 4 != 1) {
                    throw std::invalid_argument(cell.id() +
                                                ": q must be a prime congruent to 1 mod 4");
                }
                break;
            case CellKind::kFile:
                if (cell.path.empty()) throw std::invalid_argument("file cell: empty path");
                break;
        }
        if (mode == PushMode::kIncremental && cell.kind != CellKind::kRandomRegular) {
            throw std::invalid_argument(cell.id() +
                                        ": incremental mode needs random-regular cells");
        }
    }
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("sweep spec: top level must be an object");
    if (!j.contains("cells") || !j["cells"].is_array()) {
        throw std::invalid_argument("sweep spec: missing \"cells\" array");
    }

    ExperimentSpec spec;
    for (const nlohmann::json& c : j["cells"]) {
        if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string()) {
            throw std::invalid_argument("sweep spec: each cell needs a \"kind\" string");
        }
        CellSpec cell;
        std::string kind = c["kind"].get<std::string>();
        if (kind == "random-regular") {
            cell.kind = CellKind::kRandomRegular;
            if (!c.contains("n") || !c.contains("d")) {
                throw std::invalid_argument("random-regular cell: need \"n\" and \"d\"");
            }
            cell.n = c["n"].get<std::uint32_t>();
            cell.d = c["d"].get<std::uint32_t>();
        } else if (kind == "complete") {
            cell.kind = CellKind::kComplete;
            if (!c.contains("n")) throw std::invalid_argument("complete cell: need \"n\"");
            cell.n = c["n"].get<std::uint32_t>();
        } else if (kind == "paley") {
            cell.kind = CellKind::kPaley;
            if (!c.contains("q")) throw std::invalid_argument("paley cell: need \"q\"");
            cell.q = c["q"].get<std::uint32_t>();
        } else if (kind == "file") {
            cell.kind = CellKind::kFile;
            if (!c.contains("path") || !c["path"].is_string()) {
                throw std::invalid_argument("file cell: need \"path\"");
            }
            cell.path = c["path"].get<std::string>();
        } else {
            throw std::invalid_argument("sweep spec: unknown cell kind \"" + kind + "\"");
        }
        spec.cells.push_back(std::move(cell));
    }

    spec.runs = j.value("runs", 1u);
    spec.master_seed = j.value("seed", std::uint64_t{1});

    std::string mode = j.value("mode", "static");
    if (mode == "static") {
        spec.mode = PushMode::kStatic;
    } else if (mode == "incremental") {
        spec.mode = PushMode::kIncremental;
    } else {
        throw std::invalid_argument("sweep spec: unknown mode \"" + mode + "\"");
    }

    std::string retain = j.value("retain", "summary");
    if (retain == "none") {
        spec.retain = TraceRetention::kNone;
    } else if (retain == "summary") {
        spec.retain = TraceRetention::kSummary;
    } else if (retain == "full") {
        spec.retain = TraceRetention::kFull;
    } else {
        throw std::invalid_argument("sweep spec: unknown retention \"" + retain + "\"");
    }

    spec.validate();
    return spec;
}

SweepResult sweep(const ExperimentSpec& spec, unsigned workers) {
    spec.validate();
    if (workers == 0) workers = 1;

    std::vector<std::unique_ptr<Graph>> fixtures(spec.cells.size());
    for (std::size_t i = 0; i < spec.cells.size(); ++i) {
        const CellSpec& cell = spec.cells[i];
        switch (cell.kind) {
            case CellKind::kRandomRegular:
                break;
            case CellKind::kComplete:
                fixtures[i] = std::make_unique<Graph>(complete_graph(cell.n));
                break;
            case CellKind::kPaley:
                fixtures[i] = std::make_unique<Graph>(paley_graph(cell.q));
                break;
            case CellKind::kFile:
                fixtures[i] = std::make_unique<Graph>(load_graph(cell.path));
                break;
        }
    }

    const std::size_t total = spec.cells.size() * std::size_t(spec.runs);
    SweepResult result;
    result.retain = spec.retain;
    result.records.resize(total);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mu;
    std::exception_ptr first_error;

    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= total || failed.load()) return;
            std::uint32_t ci = std::uint32_t(i / spec.runs);
            std::uint32_t ri = std::uint32_t(i % spec.runs);
            try {
                result.records[i] = run_one(spec, ci, ri, fixtures[ci].get());
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    unsigned nthreads = unsigned(std::min<std::size_t>(workers, total));
    if (nthreads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::size_t ci = 0; ci < spec.cells.size(); ++ci) {
        CellSummary s;
        s.cell_id = spec.cells[ci].id();

        std::vector<double> ts;
        std::uint32_t violations = 0;
        for (std::uint32_t ri = 0; ri < spec.runs; ++ri) {
            const RunRecord& rec = result.records[ci * spec.runs + ri];
            if (ri == 0) {
                s.n = rec.n;
                s.d = rec.d;
            }
            if (!rec.identities_ok) {
                ++violations;
                result.identities_all_ok = false;
            }
            if (rec.T) ts.push_back(double(*rec.T));
        }

        s.runs = std::uint32_t(ts.size());
        s.mean_t = mean_of(ts);
        s.median_t = median_of(ts);
        s.std_t = sample_std(ts, s.mean_t);
        double ln_n = std::log(double(s.n));
        s.c_hat = ln_n > 0 ? s.mean_t / ln_n : 0;
        s.c_d = s.d >= 3 ? c_d(double(s.d)) : std::numeric_limits<double>::quiet_NaN();
        s.rel_gap = (s.c_hat - s.c_d) / s.c_d;
        s.violation_fraction = double(violations) / double(spec.runs);
        if (s.std_t > 0) {
            TailBound b = chernoff_tail(s.mean_t, 3 * s.std_t);
            char buf[160];
            std::snprintf(buf, sizeof buf, "chernoff_tail(%.6f, %.6f) = %.6g, informative=%d",
                          s.mean_t, 3 * s.std_t, b.value, b.informative ? 1 : 0);
            s.bound_note = buf;
        }
        result.summaries.push_back(std::move(s));
    }
    return result;
}

std::string summary_csv(const SweepResult& result) {
    std::ostringstream o;
    o << "n,d,runs,meanT,medianT,stdT,C_hat,C_d,rel_gap\n";
    o << std::fixed << std::setprecision(6);
    for (const CellSummary& s : result.summaries) {
        o << s.n << ',' << s.d << ',' << s.runs << ',' << s.mean_t << ',' << s.median_t << ','
          << s.std_t << ',' << s.c_hat << ',' << s.c_d << ',' << s.rel_gap << '\n';
    }
    return o.str();
}

std::string runs_jsonl(const SweepResult& result) {
    if (result.retain == TraceRetention::kNone) return "";
    std::ostringstream o;
    for (const RunRecord& rec : result.records) {
        nlohmann::json j;
        j["cell"] = rec.cell_id;
        j["cell_index"] = rec.cell_index;
        j["run"] = rec.run;
        j["seed"] = rec.seed;
        j["mode"] = rec.mode == PushMode::kIncremental ? "incremental" : "static";
        j["n"] = rec.n;
        j["d"] = rec.d;
        j["attempts"] = rec.attempts;
        j["T"] = rec.T ? nlohmann::json(*rec.T) : nlohmann::json(nullptr);
        j["T0"] = rec.T0 ? nlohmann::json(*rec.T0) : nlohmann::json(nullptr);
        j["T1"] = rec.T1 ? nlohmann::json(*rec.T1) : nlohmann::json(nullptr);
        j["coverage"] = rec.coverage;
        j["identities_ok"] = rec.identities_ok;
        j["dense_ok"] = rec.dense_ok ? nlohmann::json(*rec.dense_ok) : nlohmann::json(nullptr);
        j["expansion_ok"] =
            rec.expansion_ok ? nlohmann::json(*rec.expansion_ok) : nlohmann::json(nullptr);
        if (rec.trace) j["trace"] = nlohmann::json::parse(trace_json(*rec.trace));
        o << j.dump() << '\n';
    }
    return o.str();
}

TheoryParams theory_params_from_trace(const ProtocolTrace& trace) {
    if (trace.mode != PushMode::kIncremental) {
        throw std::invalid_argument("theory seeding needs an incremental trace (pool counts)");
    }
    if (!trace.T0) {
        throw std::invalid_argument("trace never reached the phase threshold");
    }
    TheoryParams tp;
    tp.d = trace.d;
    tp.n = trace.n;
    std::uint32_t t0 = *trace.T0;
    if (t0 == 0) {
        tp.p_start = double(trace.d);
        tp.u_start = double(trace.n) - 1;
    } else {
        const RoundRecord& r = trace.rounds.at(t0 - 1);
        tp.p_start = double(r.pool.value());
        tp.u_start = double(r.uninformed);
    }
    return tp;
}

TrajectoryComparison compare_trajectory(const ProtocolTrace& trace,
                                        const TheoryTrajectory& theory) {
    TrajectoryComparison out;
    if (trace.mode != PushMode::kIncremental || !trace.T0) return out;

    std::uint32_t t0 = *trace.T0;
    out.start_round = t0;
    double floor_u = std::max(phase_threshold(trace.n), 1000.0);

    for (std::size_t j = 0; j < theory.u.size(); ++j) {
        std::uint32_t t = t0 + std::uint32_t(j);
        double u_run, p_run;
        if (t == 0) {
            u_run = double(trace.n) - 1;
            p_run = double(trace.d);
        } else {
            if (t - 1 >= trace.rounds.size()) break;
            const RoundRecord& r = trace.rounds[t - 1];
            u_run = double(r.uninformed);
            p_run = r.pool ? double(*r.pool) : 0;
        }
        if (u_run < floor_u) break;

        ComparisonRow row;
        row.t = t;
        row.u_run = u_run;
        row.u_model = theory.u[j];
        row.p_run = p_run;
        row.p_model = theory.p[j];
        row.rel_err_u = std::abs(row.u_model - u_run) / std::max(u_run, 1.0);
        row.rel_err_p = std::abs(row.p_model - p_run) / std::max(p_run, 1.0);
        out.max_rel_err_u = std::max(out.max_rel_err_u, row.rel_err_u);
        out.max_rel_err_p = std::max(out.max_rel_err_p, row.rel_err_p);
        out.rows.push_back(row);
    }
    out.applicable = !out.rows.empty();
    return out;
}

}  // namespace pushsim
