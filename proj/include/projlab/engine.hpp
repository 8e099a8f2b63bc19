// Iteration drivers: plain alternating projections, local/prox variants,
// Douglas-Rachford, and averaged projections, with full trace recording.
#pragma once

#include "core.hpp"
#include "sets.hpp"

namespace projlab {

enum class StopReason { max_iter, stationary, diverged };

inline const char* stop_reason_name(StopReason r)
{
    switch (r) {
    case StopReason::max_iter: return "max_iter";
    case StopReason::stationary: return "stationary";
    case StopReason::diverged: return "diverged";
    }
    return "?";
}

constexpr double kDivergenceThreshold = 1e8;

struct TraceRecord {
    long k = 0;
    Point a, b;
    double r = 0.0;        // |a_k - b_k|
    double step_a = 0.0;   // |a_k - a_{k-1}|
    double step_b = 0.0;   // |b_k - b_{k-1}|
    double alpha = -1.0;   // angle(b_{k-1} - a_k, b_k - a_k), -1 if undefined
    double beta = -1.0;    // angle(a_k - b_k, b_{k-1} - b_k), -1 if undefined
    bool multivalued_hit = false;
    bool local_fallback = false;   // local step rejected, global projector used
};

struct Trace {
    std::vector<TraceRecord> records;
    StopReason stop_reason = StopReason::max_iter;
    Point start;

    const TraceRecord& back() const { return records.back(); }

    std::vector<Point> a_points() const
    {
        std::vector<Point> out;
        out.reserve(records.size());
        for (const auto& rec : records) out.push_back(rec.a);
        return out;
    }
    std::vector<Point> b_points() const
    {
        std::vector<Point> out;
        out.reserve(records.size());
        for (const auto& rec : records) out.push_back(rec.b);
        return out;
    }
};

namespace detail {

inline Point project_select(const SetDescriptor& set, const Point& q,
                            const TiePolicy& policy, bool& multivalued, long k)
{
    ProjectionResult r;
    try {
        r = set.project(q);
    } catch (const std::exception& e) {
        throw Error("projection onto " + set.name + " failed at iteration " +
                    std::to_string(k) + ": " + e.what());
    }
    multivalued = multivalued || r.multivalued;
    return select(r, policy);
}

inline TraceRecord make_block(long k, Point a, Point b, const Point& prev_a,
                              const Point& prev_b, double tol_step, bool mv)
{
    TraceRecord rec;
    rec.k = k;
    rec.r = distance(a, b);
    rec.step_a = distance(a, prev_a);
    rec.step_b = distance(b, prev_b);
    rec.alpha = angle_between(prev_b - a, b - a, tol_step);
    rec.beta = angle_between(a - b, prev_b - b, tol_step);
    rec.multivalued_hit = mv;
    rec.a = std::move(a);
    rec.b = std::move(b);
    return rec;
}

} // namespace detail

// b_k in P_B(a_k), a_{k+1} in P_A(b_k).  Stops when both consecutive steps
// drop below tol_step (never on r_k: the infeasible case has r_k -> r* > 0),
// on max_iter, or when the iterates run away.
inline Trace run_alternating(const SetDescriptor& A, const SetDescriptor& B,
                             const Point& a0, const Tolerances& tol = {},
                             const TiePolicy& policy = {})
{
    tol.validate();
    require_finite(a0, "run_alternating start");
    if (int(a0.size()) != A.dimension || A.dimension != B.dimension)
        throw Error("run_alternating: dimension mismatch");

    Trace trace;
    trace.start = a0;

    bool mv = false;
    Point a = a0;
    Point b = detail::project_select(B, a, policy, mv, 0);
    {
        TraceRecord rec;
        rec.k = 0;
        rec.a = a;
        rec.b = b;
        rec.r = distance(a, b);
        rec.multivalued_hit = mv;
        trace.records.push_back(std::move(rec));
    }

    for (long k = 1; k <= tol.max_iter; ++k) {
        bool mv_k = false;
        Point a_next = detail::project_select(A, b, policy, mv_k, k);
        Point b_next = detail::project_select(B, a_next, policy, mv_k, k);
        const double step_a = distance(a_next, a);
        const double step_b = distance(b_next, b);
        if (step_a < tol.tol_step && step_b < tol.tol_step) {
            trace.stop_reason = StopReason::stationary;
            return trace;
        }
        trace.records.push_back(
            detail::make_block(k, a_next, b_next, a, b, tol.tol_step, mv_k));
        a = std::move(a_next);
        b = std::move(b_next);
        if (norm(a) > kDivergenceThreshold) {
            trace.stop_reason = StopReason::diverged;
            return trace;
        }
    }
    trace.stop_reason = StopReason::max_iter;
    return trace;
}

// Local alternating projections: the A-step uses the warm-started local
// projector seeded by the previous parameter.  The distance-decrease
// requirement |a_k - b_{k-1}| <= |a_{k-1} - b_{k-1}| is enforced; a violating
// local step falls back to the global projector and flags the record.
inline Trace run_local_alternating(const SetDescriptor& A, const SetDescriptor& B,
                                   const Point& a0, double t0,
                                   const Tolerances& tol = {},
                                   const TiePolicy& policy = {})
{
    tol.validate();
    if (!A.warm_startable()) throw Error("run_local_alternating: A has no local projector");
    require_finite(a0, "run_local_alternating start");

    Trace trace;
    trace.start = a0;

    bool mv = false;
    Point a = a0;
    double t_prev = t0;
    Point b = detail::project_select(B, a, policy, mv, 0);
    {
        TraceRecord rec;
        rec.k = 0;
        rec.a = a;
        rec.b = b;
        rec.r = distance(a, b);
        rec.multivalued_hit = mv;
        trace.records.push_back(std::move(rec));
    }

    for (long k = 1; k <= tol.max_iter; ++k) {
        bool mv_k = false;
        bool fallback = false;
        auto [a_next, t_next] = A.local_project(b, t_prev);
        if (distance(a_next, b) > distance(a, b) + tol.tol_step) {
            a_next = detail::project_select(A, b, policy, mv_k, k);
            fallback = true;
        }
        Point b_next = detail::project_select(B, a_next, policy, mv_k, k);
        const double step_a = distance(a_next, a);
        const double step_b = distance(b_next, b);
        if (step_a < tol.tol_step && step_b < tol.tol_step) {
            trace.stop_reason = StopReason::stationary;
            return trace;
        }
        TraceRecord rec = detail::make_block(k, a_next, b_next, a, b, tol.tol_step, mv_k);
        rec.local_fallback = fallback;
        trace.records.push_back(std::move(rec));
        t_prev = t_next;
        a = std::move(a_next);
        b = std::move(b_next);
        if (norm(a) > kDivergenceThreshold) {
            trace.stop_reason = StopReason::diverged;
            return trace;
        }
    }
    trace.stop_reason = StopReason::max_iter;
    return trace;
}

// Distance-decrease half of the prox-block condition.  The normal-cone half
// holds structurally for outputs of the global or warm-started local
// projectors, which are the only step generators implemented.
inline bool enforce_prox_block(const Point& prev_b, const Point& a_candidate,
                               const Point& prev_a)
{
    return distance(prev_b, a_candidate) <= distance(prev_b, prev_a) + 1e-14;
}

struct DRTrace {
    std::vector<Point> x;          // governing sequence
    std::vector<Point> shadow_b;   // P_B(x_k)
    std::vector<Point> shadow_a;   // P_A(2 P_B(x_k) - x_k)
    StopReason stop_reason = StopReason::max_iter;
};

// x+ = x + P_A(2 P_B(x) - x) - P_B(x) = (R_A R_B + I)(x) / 2
inline DRTrace run_douglas_rachford(const SetDescriptor& A, const SetDescriptor& B,
                                    const Point& x0, const Tolerances& tol = {},
                                    const TiePolicy& policy = {})
{
    tol.validate();
    require_finite(x0, "run_douglas_rachford start");
    if (int(x0.size()) != A.dimension || A.dimension != B.dimension)
        throw Error("run_douglas_rachford: dimension mismatch");

    DRTrace trace;
    Point x = x0;
    for (long k = 0; k <= tol.max_iter; ++k) {
        bool mv = false;
        Point pb = detail::project_select(B, x, policy, mv, k);
        Point refl = 2.0 * pb - x;
        Point pa = detail::project_select(A, refl, policy, mv, k);
        Point x_next = x + pa - pb;
        trace.x.push_back(x);
        trace.shadow_b.push_back(std::move(pb));
        trace.shadow_a.push_back(std::move(pa));
        if (distance(x_next, x) < tol.tol_step) {
            trace.stop_reason = StopReason::stationary;
            return trace;
        }
        if (norm(x_next) > kDivergenceThreshold) {
            trace.x.push_back(x_next);
            trace.shadow_b.push_back(trace.shadow_b.back());
            trace.shadow_a.push_back(trace.shadow_a.back());
            trace.stop_reason = StopReason::diverged;
            return trace;
        }
        x = std::move(x_next);
    }
    trace.stop_reason = StopReason::max_iter;
    return trace;
}

struct AveragedRun {
    Trace trace;            // alternating trace between product and diagonal
    int copies = 0;
    int d = 0;

    // mean sequence: the diagonal iterates, one d-vector per block
    std::vector<Point> means() const
    {
        std::vector<Point> out;
        out.reserve(trace.records.size());
        for (const auto& rec : trace.records)
            out.emplace_back(rec.b.begin(), rec.b.begin() + d);
        return out;
    }

    // component projections at block k
    std::vector<Point> components(std::size_t k) const
    {
        std::vector<Point> out;
        for (int i = 0; i < copies; ++i)
            out.emplace_back(trace.records[k].a.begin() + i * d,
                             trace.records[k].a.begin() + (i + 1) * d);
        return out;
    }
};

// Averaged projections realized as alternating projections between the
// product C_1 x ... x C_m and the diagonal.
inline AveragedRun run_averaged(const std::vector<SetDescriptor>& components,
                                const Point& x0, const Tolerances& tol = {},
                                const TiePolicy& policy = {})
{
    if (components.empty()) throw Error("run_averaged: no components");
    const int d = int(x0.size());
    for (const auto& c : components)
        if (c.dimension != d) throw Error("run_averaged: component dimension mismatch");
    const int m = int(components.size());

    SetDescriptor product = make_product_set(components);
    SetDescriptor diagonal = make_diagonal_set(m, d);

    Point lifted;
    lifted.reserve(std::size_t(m * d));
    for (int i = 0; i < m; ++i) lifted.insert(lifted.end(), x0.begin(), x0.end());

    AveragedRun run;
    run.copies = m;
    run.d = d;
    // Seed with the first component projections so the trace starts on the
    // product set; the b-side (diagonal) then carries the mean sequence.
    bool mv = false;
    Point a0 = detail::project_select(product, lifted, policy, mv, 0);
    run.trace = run_alternating(product, diagonal, a0, tol, policy);
    return run;
}

} // namespace projlab
