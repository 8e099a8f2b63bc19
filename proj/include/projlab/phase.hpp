// Discrete Fourier machinery, Gerchberg-Saxton error reduction with the
// standard prior families, and the two-pixel lifted counterexamples.
#pragma once

#include "core.hpp"
#include "engine.hpp"
#include "fourier.hpp"
#include "sets.hpp"

namespace projlab {

// Complex signals of length N live in R^{2N}, interleaved (Re, Im) per entry.
struct Signal {
    Point values;
    int N = 0;

    static Signal of(Point v)
    {
        Signal s;
        s.N = complex_length(v);
        s.values = std::move(v);
        return s;
    }
};

inline Signal dft(const Signal& x) { return Signal::of(dft_interleaved(x.values, false)); }
inline Signal idft(const Signal& x) { return Signal::of(dft_interleaved(x.values, true)); }

// Fourier-magnitude set {y : |y^(w)| = m(w)}: the per-frequency circle
// product conjugated by the unitary transform.
inline SetDescriptor make_magnitude_set(MagnitudeSpec spec)
{
    SetDescriptor s;
    s.family = SetFamily::sphere_product;
    s.name = "magnitude";
    s.dimension = 2 * int(spec.m.size());
    s.project = [spec = std::move(spec)](const Point& q) {
        ProjectionResult freq = project_sphere_product(spec, dft_interleaved(q, false));
        ProjectionResult out;
        out.multivalued = freq.multivalued;
        out.distance = freq.distance;   // the transform is unitary
        for (Point& p : freq.points) out.points.push_back(dft_interleaved(p, true));
        return out;
    };
    return s;
}

// ----------------------------------------------------------------
// prior sets
// ----------------------------------------------------------------

struct PriorSpec {
    enum class Kind {
        second_plane,    // |x(t)| = m~(t)
        support,         // x(t) = 0 off S
        nonneg_real,     // Im x = 0, Re x >= 0
        sparsity,        // at most k entries non-zero
        sparse_phase,    // arg(x^(w)) != 0 for at most k frequencies
        lifted_spiral,
        lifted_double_spiral,
    };
    Kind kind = Kind::support;
    std::vector<double> m_tilde;   // second-plane target moduli
    std::vector<int> support;      // support indices
    int k = 0;                     // sparsity budget
};

inline SetDescriptor make_lifted_set(const std::string& which);   // defined below

inline SetDescriptor make_prior_set(const PriorSpec& prior, int n)
{
    switch (prior.kind) {
    case PriorSpec::Kind::second_plane: {
        if (int(prior.m_tilde.size()) != n) throw Error("second-plane prior: m~ size mismatch");
        return make_sphere_product_set(MagnitudeSpec{prior.m_tilde}, "second-plane");
    }
    case PriorSpec::Kind::support:
        return make_support_set(n, prior.support);
    case PriorSpec::Kind::nonneg_real:
        return make_nonneg_real_set(n);
    case PriorSpec::Kind::sparsity:
        return make_sparsity_set(n, prior.k);
    case PriorSpec::Kind::sparse_phase:
        return make_sparse_phase_set(n, prior.k);
    case PriorSpec::Kind::lifted_spiral:
        if (n != 2) throw Error("lifted priors need N = 2");
        return make_lifted_set("spiral");
    case PriorSpec::Kind::lifted_double_spiral:
        if (n != 2) throw Error("lifted priors need N = 2");
        return make_lifted_set("double-spiral");
    }
    throw Error("make_prior_set: unknown kind");
}

// ----------------------------------------------------------------
// Gerchberg-Saxton error reduction
// ----------------------------------------------------------------

struct GSRun {
    Trace trace;
    bool guess_better_than_zero = false;
    double start_dist = 0.0;   // dist(x0, magnitude set)
};

// Alternating projections between the prior set and the magnitude set,
// started from a point of the prior set.
inline GSRun gs_run(const MagnitudeSpec& m, const PriorSpec& prior, const Signal& x0,
                    const Tolerances& tol = {}, const TiePolicy& policy = {})
{
    const int n = int(m.m.size());
    if (x0.N != n) throw Error("gs_run: signal length mismatch");
    SetDescriptor A = make_prior_set(prior, n);
    SetDescriptor B = make_magnitude_set(m);
    if (A.membership(x0.values) > tol.tol_proj)
        throw Error("gs_run: start violates the prior (residual " +
                    std::to_string(A.membership(x0.values)) + ")");
    GSRun run;
    run.start_dist = B.membership(x0.values);
    run.guess_better_than_zero = run.start_dist < m.norm_m();
    run.trace = run_alternating(A, B, x0.values, tol, policy);
    return run;
}

// ----------------------------------------------------------------
// the two-pixel lift
// ----------------------------------------------------------------

// P: C^2 -> R^3 keeps (Re x(0), Im x(0), Re x(1)); P' is the inclusion
// (x1, x2, x3) -> (x1 + i x2, x3).  f, f' are the unitary two-pixel
// transforms; at N = 2 the forward kernel matrix is its own inverse.
struct LiftMaps {
    static Point shadow(const Point& c2)
    {
        return {c2[0], c2[1], c2[2]};
    }
    static Point include(const Point& r3)
    {
        return {r3[0], r3[1], r3[2], 0.0};
    }
    static Point fwd(const Point& c2) { return dft_interleaved(c2, false); }
    static Point inv(const Point& c2) { return dft_interleaved(c2, true); }

    // R^3 shadow of a lifted iterate
    static Point shadow_of_lifted(const Point& q) { return shadow(inv(q)); }
    // lift of an R^3 point
    static Point lift(const Point& p) { return fwd(include(p)); }
};

// Conjugated projector F o P' o P_set o P o F' for the spiral, double spiral
// or cylinder.  The fourth coordinate Im x^(1) is dropped by P and restored
// as 0 by P', which is the metric projection onto the embedded slice.
inline SetDescriptor make_lifted_set(SetDescriptor base, const std::string& which)
{
    SetDescriptor s;
    s.family = SetFamily::lifted;
    s.name = "lifted-" + which;
    s.dimension = 4;
    auto inner = std::make_shared<SetDescriptor>(std::move(base));
    s.project = [inner](const Point& q) {
        if (q.size() != 4) throw Error("lifted set: expects R^4 = C^2");
        const Point z = LiftMaps::inv(q);
        ProjectionResult r3 = inner->project(LiftMaps::shadow(z));
        ProjectionResult out;
        out.multivalued = r3.multivalued;
        for (Point& p : r3.points)
            out.points.push_back(LiftMaps::fwd(LiftMaps::include(p)));
        out.distance = distance(q, out.points.front());
        return out;
    };
    return s;
}

inline SetDescriptor make_lifted_set(const std::string& which)
{
    if (which == "spiral") return make_lifted_set(make_spiral_set(), which);
    if (which == "double-spiral") return make_lifted_set(make_double_spiral_set(), which);
    if (which == "cylinder") return make_lifted_set(make_cylinder_set(), which);
    throw Error("make_lifted_set: unknown base set " + which);
}

struct CounterexampleRun {
    Trace lifted;   // trace in C^2 (R^4)
    Trace direct;   // the corresponding R^3 alternating trace
};

// Lifted Gerchberg-Saxton iteration from the lift of a(t0), alongside the
// direct R^3 alternating run between spiral and cylinder mantle.
inline CounterexampleRun gs_counterexample_run(double t0, long iters)
{
    if (!(t0 > 0.0)) throw Error("gs_counterexample_run: t0 must be positive");
    Tolerances tol;
    tol.max_iter = iters;
    tol.tol_step = 1e-300;   // the construction never becomes stationary

    CounterexampleRun run;
    SetDescriptor a3 = make_spiral_set();
    SetDescriptor b3 = make_cylinder_set();
    run.direct = run_alternating(a3, b3, spiral_point(t0), tol);

    SetDescriptor A = make_lifted_set("spiral");
    SetDescriptor B = make_lifted_set("cylinder");
    run.lifted = run_alternating(A, B, LiftMaps::lift(spiral_point(t0)), tol);
    return run;
}

// Douglas-Rachford on the lifted double-spiral prior and lifted mantle,
// started from the lift of the inner-spiral point a_-(t0).
inline DRTrace hio_counterexample_run(double t0, long iters)
{
    if (!(t0 > 0.0)) throw Error("hio_counterexample_run: t0 must be positive");
    Tolerances tol;
    tol.max_iter = iters;
    tol.tol_step = 1e-300;
    SetDescriptor A = make_lifted_set("double-spiral");
    SetDescriptor B = make_lifted_set("cylinder");
    return run_douglas_rachford(A, B, LiftMaps::lift(inner_spiral_point(t0)), tol);
}

} // namespace projlab
