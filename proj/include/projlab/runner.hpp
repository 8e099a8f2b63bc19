// Experiment configs in, traces / reports / data files out.  A config is a
// JSON document naming the algorithm, the sets, the start, tolerances and
// tie policy; the runner executes it into an output directory.
#pragma once

#include <chrono>

#include "apps.hpp"
#include "io.hpp"
#include "registry_sets.hpp"

namespace projlab {

struct RunOutcome {
    int exit_code = 0;   // 0 clean stop, 2 diverged
    json summary;
};

namespace cfg {

template <typename T>
T field(const json& j, const std::string& key, const char* ctx)
{
    if (!j.contains(key))
        throw Error(std::string("config: missing field '") + key + "' in " + ctx);
    try {
        return j.at(key).get<T>();
    } catch (const std::exception&) {
        throw Error(std::string("config: bad value for field '") + key + "' in " + ctx);
    }
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback)
{
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

inline Tolerances tolerances(const json& j)
{
    Tolerances tol;
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        tol.tol_proj = field_or(t, "tol_proj", tol.tol_proj);
        tol.tol_step = field_or(t, "tol_step", tol.tol_step);
        tol.max_iter = field_or<long>(t, "max_iter", tol.max_iter);
    }
    tol.validate();
    return tol;
}

inline TiePolicy tie_policy(const json& j, std::uint64_t seed)
{
    TiePolicy p;
    p.seed = seed;
    if (j.contains("tie_policy")) {
        const json& t = j.at("tie_policy");
        p.mode = tie_mode_from_name(field_or<std::string>(t, "mode", "first"));
        p.seed = field_or<std::uint64_t>(t, "seed", seed);
    }
    return p;
}

struct DiagParams {
    double tail_fraction = 0.25;
    double cluster_radius = 0.1;
    double drop_tail = 0.2;
    double r_floor = 1e-9;
};

inline DiagParams diag_params(const json& j)
{
    DiagParams d;
    if (j.contains("diag")) {
        const json& g = j.at("diag");
        d.tail_fraction = field_or(g, "tail_fraction", d.tail_fraction);
        d.cluster_radius = field_or(g, "cluster_radius", d.cluster_radius);
        d.drop_tail = field_or(g, "drop_tail", d.drop_tail);
        d.r_floor = field_or(g, "r_floor", d.r_floor);
    }
    return d;
}

} // namespace cfg

// Gap + rate + angle diagnostics appended to a run summary.
inline json summarize_trace(const Trace& trace, const cfg::DiagParams& d)
{
    json out;
    out["stop_reason"] = stop_reason_name(trace.stop_reason);
    out["iterations"] = trace.records.size();
    const Gap gap = estimate_gap(trace, d.tail_fraction, d.cluster_radius);
    out["gap"] = gap_to_json(gap, d.tail_fraction, d.cluster_radius);
    if (trace.records.size() >= 20 && !trace.records.front().b.empty()) {
        try {
            out["rate"] = rate_to_json(fit_rate(trace.b_points(), d.drop_tail), d.drop_tail);
        } catch (const Error& e) {
            out["rate"] = {{"error", e.what()}};
        }
    } else {
        out["rate"] = nullptr;
    }
    try {
        out["angle"] = angle_to_json(fit_angle_exponent(trace, gap, d.r_floor));
    } catch (const Error& e) {
        out["angle"] = {{"error", e.what()}};
    }
    return out;
}

inline Point seeded_start(int dim, double scale, std::uint64_t seed)
{
    Point p(std::size_t(dim), 0.0);
    std::uint64_t state = splitmix64(seed ^ 0x9e3779b97f4a7c15ULL);
    for (double& v : p) v = scale * (2.0 * uniform01(state) - 1.0);
    return p;
}

inline Point resolve_start(const json& j, const char* key, std::uint64_t seed)
{
    if (j.contains(key) && j.at(key).is_array()) return j.at(key).get<Point>();
    if (j.contains("start_seeded")) {
        const json& s = j.at("start_seeded");
        return seeded_start(cfg::field<int>(s, "dim", "start_seeded"),
                            cfg::field_or(s, "scale", 1.0), seed);
    }
    throw Error(std::string("config: missing field '") + key + "' in run config");
}

inline RunOutcome run_config(const json& config, const std::string& outdir)
{
    namespace fs = std::filesystem;
    const auto t_begin = std::chrono::steady_clock::now();
    fs::create_directories(outdir);

    const std::string algorithm = cfg::field<std::string>(config, "algorithm", "run config");
    std::uint64_t seed = cfg::field_or<std::uint64_t>(config, "seed", 0);
    if (const char* env = std::getenv("PROJLAB_SEED")) seed = std::strtoull(env, nullptr, 10);
    const Tolerances tol = cfg::tolerances(config);
    const TiePolicy policy = cfg::tie_policy(config, seed);
    const cfg::DiagParams diag = cfg::diag_params(config);

    json summary;
    summary["name"] = cfg::field_or<std::string>(config, "name", "unnamed");
    summary["algorithm"] = algorithm;
    summary["seed"] = seed;

    RunOutcome out;

    auto emit_trace = [&](const Trace& trace) {
        write_trace_csv(outdir + "/trace.csv", trace);
        write_points_jsonl(outdir + "/points.jsonl", trace);
        summary.update(summarize_trace(trace, diag));
        if (trace.stop_reason == StopReason::diverged) out.exit_code = 2;
    };

    if (algorithm == "ap" || algorithm == "local-ap") {
        const json& sets = config.contains("sets") ? config.at("sets") : json::array();
        if (sets.size() != 2) throw Error("config: field 'sets' must list exactly two sets");
        SetDescriptor A = set_from_json(sets[0]);
        SetDescriptor B = set_from_json(sets[1]);
        const Point start = resolve_start(config, "start", seed);
        Trace trace;
        if (algorithm == "ap") {
            trace = run_alternating(A, B, start, tol, policy);
        } else {
            const double t0 = cfg::field<double>(config, "t0", "local-ap config");
            trace = run_local_alternating(A, B, start, t0, tol, policy);
        }
        emit_trace(trace);
    } else if (algorithm == "dr") {
        const json& sets = config.contains("sets") ? config.at("sets") : json::array();
        if (sets.size() != 2) throw Error("config: field 'sets' must list exactly two sets");
        SetDescriptor A = set_from_json(sets[0]);
        SetDescriptor B = set_from_json(sets[1]);
        const Point start = resolve_start(config, "start", seed);
        DRTrace dr = run_douglas_rachford(A, B, start, tol, policy);
        const Trace as_trace = dr_as_trace(dr);
        write_trace_csv(outdir + "/trace.csv", as_trace);
        write_dr_points_jsonl(outdir + "/points.jsonl", dr);
        summary.update(summarize_trace(as_trace, diag));
        if (dr.stop_reason == StopReason::diverged) out.exit_code = 2;
    } else if (algorithm == "averaged") {
        const json& comps = config.contains("components") ? config.at("components") : json::array();
        if (comps.empty()) throw Error("config: field 'components' must list the sets");
        std::vector<SetDescriptor> components;
        for (const json& c : comps) components.push_back(set_from_json(c));
        const Point start = resolve_start(config, "start", seed);
        AveragedRun run = run_averaged(components, start, tol, policy);
        emit_trace(run.trace);
        const auto means = run.means();
        summary["final_mean"] = means.back();
    } else if (algorithm == "gs") {
        MagnitudeSpec m;
        if (config.contains("m_csv"))
            m = read_magnitude_csv(cfg::field<std::string>(config, "m_csv", "gs config"));
        else
            m.m = cfg::field<std::vector<double>>(config, "m", "gs config");
        const json& pj = config.contains("prior") ? config.at("prior") : json();
        if (pj.is_null()) throw Error("config: missing field 'prior' in gs config");
        PriorSpec prior = prior_from_json(pj);
        Signal x0 = Signal::of(resolve_start(config, "start", seed));
        GSRun run = gs_run(m, prior, x0, tol, policy);
        emit_trace(run.trace);
        summary["guess_better_than_zero"] = run.guess_better_than_zero;
        summary["start_dist"] = run.start_dist;
        write_signal_csv(outdir + "/x_final.csv", Signal::of(run.trace.back().a));
        write_signal_csv(outdir + "/y_final.csv", Signal::of(run.trace.back().b));
    } else if (algorithm == "em") {
        EMProblem p;
        p.C = Matrix::from_rows(cfg::field<std::vector<std::vector<double>>>(config, "C", "em config"));
        p.y = cfg::field<std::vector<double>>(config, "y", "em config");
        p.omega = intervals_from_json(config.contains("omega") ? config.at("omega") : json());
        const Point x0 = resolve_start(config, "x0", seed);
        EMRun run = em_run(p, x0, tol);
        emit_trace(run.trace);
        summary["x_final"] = run.state.x;
        summary["independence_spread"] = run.independence_spread;
        write_values_csv(outdir + "/x_final.csv", "i,x", run.state.x);
        write_values_csv(outdir + "/z_final.csv", "ji,z", run.state.z.a);
    } else if (algorithm == "cadzow") {
        if (config.contains("signal") || config.contains("signal_csv")) {
            std::vector<double> sig;
            if (config.contains("signal_csv")) {
                Signal s = read_signal_csv(cfg::field<std::string>(config, "signal_csv", "cadzow config"));
                for (int t = 0; t < s.N; ++t) sig.push_back(s.values[std::size_t(2 * t)]);
            } else {
                sig = cfg::field<std::vector<double>>(config, "signal", "cadzow config");
            }
            if (config.contains("noise")) {
                const json& nz = config.at("noise");
                std::uint64_t state = splitmix64(seed ^ 0xc0ffee);
                const double sigma = cfg::field_or(nz, "sigma", 0.1);
                for (double& v : sig) v += sigma * (2.0 * uniform01(state) - 1.0);
            }
            const int window = cfg::field<int>(config, "window", "cadzow config");
            const int r = cfg::field<int>(config, "rank", "cadzow config");
            Matrix t0m = trajectory_matrix(sig, window);
            CadzowProblem p;
            p.rows = t0m.rows;
            p.cols = t0m.cols;
            p.r = r;
            p.S0 = t0m;
            p.structure = make_toeplitz_set(t0m.rows, t0m.cols);
            CadzowRun run = cadzow_run(p, tol, policy);
            emit_trace(run.trace);
            summary["sigma_residual"] = run.sigma_residual;
            if (run.trace.stop_reason != StopReason::diverged) {
                const auto denoised = signal_from_trajectory(run.limit);
                write_values_csv(outdir + "/denoised.csv", "t,value", denoised);
            }
        } else {
            CadzowProblem p;
            p.rows = cfg::field<int>(config, "rows", "cadzow config");
            p.cols = cfg::field<int>(config, "cols", "cadzow config");
            p.r = cfg::field<int>(config, "rank", "cadzow config");
            p.S0 = Matrix::from_flat(cfg::field<Point>(config, "S0", "cadzow config"), p.rows, p.cols);
            const json& st = config.contains("structure") ? config.at("structure") : json();
            if (st.is_null()) throw Error("config: missing field 'structure' in cadzow config");
            p.structure = set_from_json(st);
            CadzowRun run = cadzow_run(p, tol, policy);
            emit_trace(run.trace);
            summary["sigma_residual"] = run.sigma_residual;
            summary["final_matrix"] = run.limit.a;
        }
    } else {
        throw Error("config: unknown algorithm '" + algorithm + "'");
    }

    const auto t_end = std::chrono::steady_clock::now();
    summary["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_begin).count();
    std::ofstream sf(outdir + "/summary.json");
    sf << summary.dump(2) << "\n";
    out.summary = std::move(summary);
    return out;
}

// Recompute diagnostics from a run directory.  Defaults mirror the embedded
// summary parameters so `run` then `diagnose` reproduces the same numbers.
struct DiagnoseRequest {
    bool angle = false;
    bool rate = false;
    std::optional<std::pair<double, double>> three_point;   // (c, gamma)
    std::optional<double> four_point;                        // ell
    std::optional<std::pair<double, double>> holder;         // (c, sigma)
};

inline json diagnose_dir(const std::string& dir, const DiagnoseRequest& req)
{
    Trace trace = read_trace_dir(dir);
    cfg::DiagParams d;
    {
        std::ifstream sf(dir + "/summary.json");
        if (sf) {
            json s = json::parse(sf, nullptr, false);
            if (!s.is_discarded() && s.contains("gap")) {
                d.tail_fraction = s["gap"].value("tail_fraction", d.tail_fraction);
                d.cluster_radius = s["gap"].value("cluster_radius", d.cluster_radius);
            }
            if (!s.is_discarded() && s.contains("rate") && s["rate"].is_object())
                d.drop_tail = s["rate"].value("drop_tail", d.drop_tail);
            if (!s.is_discarded() && s.contains("angle") && s["angle"].is_object())
                d.r_floor = s["angle"].value("r_floor", d.r_floor);
        }
    }
    const Gap gap = estimate_gap(trace, d.tail_fraction, d.cluster_radius);
    json out;
    out["gap"] = gap_to_json(gap, d.tail_fraction, d.cluster_radius);
    if (req.angle) out["angle"] = angle_to_json(fit_angle_exponent(trace, gap, d.r_floor));
    if (req.rate) {
        if (trace.records.front().b.empty())
            throw Error("diagnose: rate fit needs points.jsonl");
        out["rate"] = rate_to_json(fit_rate(trace.b_points(), d.drop_tail), d.drop_tail);
    }
    if (req.three_point)
        out["three_point"] =
            estimate_to_json(check_three_point(trace, req.three_point->first,
                                               req.three_point->second, gap.r_star));
    if (req.four_point)
        out["four_point"] =
            estimate_to_json(check_four_point(trace, *req.four_point, gap.r_star));
    if (req.holder)
        out["holder"] = estimate_to_json(
            holder_check(trace, req.holder->first, req.holder->second, gap));
    return out;
}

} // namespace projlab
