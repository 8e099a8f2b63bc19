// File formats: trace.csv (fixed seven columns), points.jsonl (one object per
// iteration carrying the coordinates), summary.json, and the signal /
// magnitude CSV formats.  All floating-point output uses 17 significant
// digits so every file round-trips losslessly.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diagnostics.hpp"
#include "engine.hpp"
#include "phase.hpp"

namespace projlab {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt17(const Point& p)
{
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += fmt17(p[i]);
    }
    s += "]";
    return s;
}

// ----------------------------------------------------------------
// trace.csv: k,r,step_a,step_b,alpha,beta,multivalued_hit
// ----------------------------------------------------------------

inline void write_trace_csv(const std::string& path, const Trace& trace)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    std::fputs("k,r,step_a,step_b,alpha,beta,multivalued_hit\n", f);
    for (const auto& rec : trace.records)
        std::fprintf(f, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", rec.k, rec.r,
                     rec.step_a, rec.step_b, rec.alpha, rec.beta,
                     rec.multivalued_hit ? 1 : 0);
    std::fclose(f);
}

inline void write_points_jsonl(const std::string& path, const Trace& trace)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    for (const auto& rec : trace.records)
        std::fprintf(f, "{\"k\":%ld,\"a\":%s,\"b\":%s}\n", rec.k,
                     fmt17(rec.a).c_str(), fmt17(rec.b).c_str());
    std::fclose(f);
}

// DR runs reuse the same two files: r = |shadow_a - shadow_b| and the
// governing x goes to points.jsonl alongside both shadows.
inline Trace dr_as_trace(const DRTrace& dr)
{
    Trace t;
    t.stop_reason = dr.stop_reason;
    if (!dr.x.empty()) t.start = dr.x.front();
    for (std::size_t k = 0; k < dr.x.size(); ++k) {
        TraceRecord rec;
        rec.k = long(k);
        rec.a = dr.shadow_a[k];
        rec.b = dr.shadow_b[k];
        rec.r = distance(dr.shadow_a[k], dr.shadow_b[k]);
        if (k > 0) {
            rec.step_a = distance(dr.x[k], dr.x[k - 1]);
            rec.step_b = distance(dr.shadow_b[k], dr.shadow_b[k - 1]);
        }
        t.records.push_back(std::move(rec));
    }
    return t;
}

inline void write_dr_points_jsonl(const std::string& path, const DRTrace& dr)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    for (std::size_t k = 0; k < dr.x.size(); ++k)
        std::fprintf(f, "{\"k\":%zu,\"x\":%s,\"a\":%s,\"b\":%s}\n", k,
                     fmt17(dr.x[k]).c_str(), fmt17(dr.shadow_a[k]).c_str(),
                     fmt17(dr.shadow_b[k]).c_str());
    std::fclose(f);
}

struct TraceFiles {
    Trace trace;   // r/step/angle columns from trace.csv, points from points.jsonl
};

inline Trace read_trace_dir(const std::string& dir)
{
    Trace trace;
    std::ifstream csv(dir + "/trace.csv");
    if (!csv) throw Error("missing trace.csv in " + dir);
    std::string line;
    std::getline(csv, line);   // header
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        TraceRecord rec;
        int mv = 0;
        if (std::sscanf(line.c_str(), "%ld,%lg,%lg,%lg,%lg,%lg,%d", &rec.k, &rec.r,
                        &rec.step_a, &rec.step_b, &rec.alpha, &rec.beta, &mv) != 7)
            throw Error("malformed trace.csv row: " + line);
        rec.multivalued_hit = mv != 0;
        trace.records.push_back(std::move(rec));
    }
    std::ifstream jl(dir + "/points.jsonl");
    if (jl) {
        std::size_t i = 0;
        while (std::getline(jl, line)) {
            if (line.empty() || i >= trace.records.size()) break;
            json obj = json::parse(line);
            trace.records[i].a = obj.at("a").get<Point>();
            trace.records[i].b = obj.at("b").get<Point>();
            ++i;
        }
    }
    if (trace.records.empty()) throw Error("empty trace in " + dir);
    if (!trace.records.front().a.empty()) trace.start = trace.records.front().a;
    return trace;
}

// ----------------------------------------------------------------
// summary.json fragments
// ----------------------------------------------------------------

inline json gap_to_json(const Gap& gap, double tail_fraction, double cluster_radius)
{
    json j;
    j["r_star"] = gap.r_star;
    j["feasible"] = gap.feasible;
    j["a_clusters"] = gap.a_clusters.size();
    j["b_clusters"] = gap.b_clusters.size();
    j["tail_fraction"] = tail_fraction;
    j["cluster_radius"] = cluster_radius;
    return j;
}

inline json rate_to_json(const RateFit& fit, double drop_tail)
{
    json j;
    j["kind"] = rate_kind_name(fit.kind);
    if (fit.kind == RateKind::linear) j["q"] = fit.q;
    if (fit.kind == RateKind::sublinear) j["rho"] = fit.rho;
    j["r_squared"] = fit.r_squared;
    j["drop_tail"] = drop_tail;
    return j;
}

inline json angle_to_json(const AngleFit& fit)
{
    json j;
    j["omega"] = fit.omega;
    j["gamma"] = fit.gamma;
    j["theta"] = fit.theta;
    j["n_points"] = fit.n_points;
    j["r_floor"] = fit.r_floor;
    j["r_squared"] = fit.r_squared;
    return j;
}

inline json estimate_to_json(const EstimateReport& rep)
{
    json j;
    j["checked"] = rep.checked;
    j["ell_used"] = rep.ell_used;
    json v = json::array();
    for (const auto& viol : rep.violations)
        v.push_back({{"k", viol.k}, {"lhs", viol.lhs}, {"rhs", viol.rhs}});
    j["violations"] = v;
    return j;
}

// ----------------------------------------------------------------
// signal and magnitude CSV: "index, re, im" and "omega, m"
// ----------------------------------------------------------------

inline void write_signal_csv(const std::string& path, const Signal& s)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    std::fputs("index,re,im\n", f);
    for (int t = 0; t < s.N; ++t)
        std::fprintf(f, "%d,%.17g,%.17g\n", t, s.values[std::size_t(2 * t)],
                     s.values[std::size_t(2 * t + 1)]);
    std::fclose(f);
}

inline Signal read_signal_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open signal csv: " + path);
    std::string line;
    std::getline(in, line);
    Point v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int idx = 0;
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%d,%lg,%lg", &idx, &re, &im) != 3)
            throw Error("malformed signal row: " + line);
        v.push_back(re);
        v.push_back(im);
    }
    return Signal::of(std::move(v));
}

inline void write_magnitude_csv(const std::string& path, const MagnitudeSpec& m)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    std::fputs("omega,m\n", f);
    for (std::size_t w = 0; w < m.m.size(); ++w)
        std::fprintf(f, "%zu,%.17g\n", w, m.m[w]);
    std::fclose(f);
}

inline MagnitudeSpec read_magnitude_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open magnitude csv: " + path);
    std::string line;
    std::getline(in, line);
    MagnitudeSpec m;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int w = 0;
        double v = 0;
        if (std::sscanf(line.c_str(), "%d,%lg", &w, &v) != 2)
            throw Error("malformed magnitude row: " + line);
        m.m.push_back(v);
    }
    return m;
}

inline void write_values_csv(const std::string& path, const std::string& header,
                             const std::vector<double>& values)
{
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + path);
    std::fprintf(f, "%s\n", header.c_str());
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f, "%zu,%.17g\n", i, values[i]);
    std::fclose(f);
}

} // namespace projlab
