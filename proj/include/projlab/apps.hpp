// Applications built on the engine: the Gaussian EM algorithm with known
// variance (both steps are orthogonal projections) and Cadzow structured
// low-rank approximation.
#pragma once

#include "core.hpp"
#include "diagnostics.hpp"
#include "engine.hpp"
#include "matrix.hpp"
#include "sets.hpp"

namespace projlab {

// ----------------------------------------------------------------
// Gaussian EM
// ----------------------------------------------------------------

struct EMProblem {
    Matrix C;                                  // m x n
    std::vector<double> y;                     // length m
    std::vector<IntervalUnion> omega;          // per-coordinate parameter set
    std::optional<SetDescriptor> omega_set;    // catalog fallback for the M-step

    int m() const { return C.rows; }
    int n() const { return C.cols; }

    void validate() const
    {
        if (int(y.size()) != C.rows) throw Error("EMProblem: y length != rows of C");
        for (double v : C.a)
            if (!std::isfinite(v)) throw Error("EMProblem: non-finite C");
        if (omega_set) {
            if (omega_set->dimension != C.cols) throw Error("EMProblem: omega dimension");
        } else {
            if (int(omega.size()) != C.cols) throw Error("EMProblem: omega size != n");
            for (const auto& u : omega) u.validate();
        }
    }

    Point project_omega(const Point& x) const
    {
        if (omega_set) return omega_set->project(x).points.front();
        Point out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = omega[i].nearest(x[i]).first;
        return out;
    }

    bool omega_contains(const Point& x, double tol) const
    {
        return distance(project_omega(x), x) <= tol;
    }
};

struct EMState {
    Point x;    // parameter estimate, length n
    Matrix z;   // completed data, m x n
    Matrix v;   // v_ji = c_ji x_i
};

inline Matrix em_gamma_apply(const EMProblem& p, const Point& x)
{
    Matrix v(p.m(), p.n());
    for (int j = 0; j < p.m(); ++j)
        for (int i = 0; i < p.n(); ++i) v(j, i) = p.C(j, i) * x[std::size_t(i)];
    return v;
}

// E-step: z_ji = y_j/n + c_ji x_i - (1/n) sum_i' c_ji' x_i'.
// This is the orthogonal projection of v = Gamma x onto
// B = {z : sum_i z_ji = y_j}; row sums of the output equal y exactly.
inline Matrix em_e_step(const EMProblem& p, const Point& x)
{
    if (int(x.size()) != p.n()) throw Error("em_e_step: x length mismatch");
    const double n = double(p.n());
    Matrix z(p.m(), p.n());
    for (int j = 0; j < p.m(); ++j) {
        double row = 0.0;
        for (int i = 0; i < p.n(); ++i) row += p.C(j, i) * x[std::size_t(i)];
        for (int i = 0; i < p.n(); ++i)
            z(j, i) = p.y[std::size_t(j)] / n + p.C(j, i) * x[std::size_t(i)] - row / n;
    }
    return z;
}

// M-step: per coordinate, x_i minimizes sum_j (z_ji - c_ji x_i)^2 over
// Omega_i.  The unconstrained optimum is a weighted mean; the constrained
// one is its nearest admissible point, globally over the interval union.
inline Point em_m_step(const EMProblem& p, const Matrix& z)
{
    Point xhat(std::size_t(p.n()), 0.0);
    for (int i = 0; i < p.n(); ++i) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < p.m(); ++j) {
            num += p.C(j, i) * z(j, i);
            den += p.C(j, i) * p.C(j, i);
        }
        if (den == 0.0) {
            if (p.omega_set || !p.omega[std::size_t(i)].bounded())
                throw Error("em_m_step: coordinate " + std::to_string(i) +
                            " is undetermined (zero column of C, unbounded Omega)");
            xhat[std::size_t(i)] = 0.0;   // objective independent of x_i; any admissible point works
        } else {
            xhat[std::size_t(i)] = num / den;
        }
    }
    return p.project_omega(xhat);
}

struct EMRun {
    Trace trace;                 // a-side: v = Gamma x, b-side: z
    EMState state;               // final state
    double independence_spread = 0.0;   // max_j spread_i of z*_ji - c_ji x*_i
};

inline double em_independence_spread(const EMProblem& p, const Matrix& z, const Point& x)
{
    double worst = 0.0;
    for (int j = 0; j < p.m(); ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < p.n(); ++i) {
            const double v = z(j, i) - p.C(j, i) * x[std::size_t(i)];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

inline EMRun em_run(const EMProblem& p, const Point& x0, const Tolerances& tol = {})
{
    p.validate();
    tol.validate();
    if (!p.omega_contains(x0, tol.tol_proj)) throw Error("em_run: x0 not in Omega");

    EMRun run;
    Point x = x0;
    Matrix v = em_gamma_apply(p, x);
    Matrix z = em_e_step(p, x);
    {
        TraceRecord rec;
        rec.k = 0;
        rec.a = v.flat();
        rec.b = z.flat();
        rec.r = distance(rec.a, rec.b);
        run.trace.records.push_back(std::move(rec));
        run.trace.start = v.flat();
    }
    run.trace.stop_reason = StopReason::max_iter;
    for (long k = 1; k <= tol.max_iter; ++k) {
        Point x_next = em_m_step(p, z);
        Matrix v_next = em_gamma_apply(p, x_next);
        Matrix z_next = em_e_step(p, x_next);
        const double step_a = distance(v_next.flat(), v.flat());
        const double step_b = distance(z_next.flat(), z.flat());
        if (step_a < tol.tol_step && step_b < tol.tol_step) {
            run.trace.stop_reason = StopReason::stationary;
            break;
        }
        run.trace.records.push_back(detail::make_block(
            k, v_next.flat(), z_next.flat(), v.flat(), z.flat(), tol.tol_step, false));
        x = std::move(x_next);
        v = std::move(v_next);
        z = std::move(z_next);
    }
    run.state = EMState{x, z, v};
    run.independence_spread = em_independence_spread(p, z, x);
    return run;
}

// ----------------------------------------------------------------
// Cadzow structured low-rank approximation
// ----------------------------------------------------------------

struct CadzowProblem {
    SetDescriptor structure;   // toeplitz or general affine, on flattened matrices
    int rows = 0, cols = 0;
    int r = 0;                 // rank bound
    Matrix S0;                 // starting matrix, expected in the structure set
};

struct CadzowRun {
    Trace trace;    // a-side: structured S_k, b-side: low-rank R_k
    Matrix limit;   // final structured iterate
    double sigma_residual = 0.0;   // sigma_{r+1} of the final iterate
};

// R_k in P_B(S_k), S_{k+1} in P_A(R_k); divergence is detected by the
// engine's norm threshold (low-rank sets have asymptotes, so Cadzow iterates
// may escape to infinity).
inline CadzowRun cadzow_run(const CadzowProblem& p, const Tolerances& tol = {},
                            const TiePolicy& policy = {})
{
    if (p.r < 0) throw Error("cadzow_run: rank bound must be >= 0");
    SetDescriptor lowrank = make_low_rank_set(p.rows, p.cols, p.r);
    CadzowRun run;
    run.trace = run_alternating(p.structure, lowrank, p.S0.flat(), tol, policy);
    run.limit = Matrix::from_flat(run.trace.back().a, p.rows, p.cols);
    const Svd s = svd_small(run.limit);
    run.sigma_residual =
        p.r < int(s.sigma.size()) ? s.sigma[std::size_t(p.r)] : 0.0;
    return run;
}

// Trajectory (Toeplitz) matrix of a signal: T_{i,j} = s[i - j + w - 1],
// shape (L - w + 1) x w, one signal value per diagonal.
inline Matrix trajectory_matrix(const std::vector<double>& signal, int window)
{
    const int L = int(signal.size());
    if (window < 1 || window > L) throw Error("trajectory_matrix: need 1 <= window <= L");
    Matrix t(L - window + 1, window);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) t(i, j) = signal[std::size_t(i - j + window - 1)];
    return t;
}

inline std::vector<double> signal_from_trajectory(const Matrix& t)
{
    const int L = t.rows + t.cols - 1;
    std::vector<double> out(std::size_t(L), 0.0);
    std::vector<int> cnt(std::size_t(L), 0);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) {
            out[std::size_t(i - j + t.cols - 1)] += t(i, j);
            ++cnt[std::size_t(i - j + t.cols - 1)];
        }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= double(cnt[i]);
    return out;
}

struct CadzowDenoiseResult {
    std::vector<double> signal;
    double sigma_residual = 0.0;   // sigma_{r+1} of the limit trajectory matrix
    long iterations = 0;
};

class CadzowDivergence : public Error {
public:
    Trace partial;
    explicit CadzowDivergence(Trace t)
        : Error("cadzow_denoise: iteration diverged"), partial(std::move(t)) {}
};

inline CadzowDenoiseResult cadzow_denoise(const std::vector<double>& signal, int window,
                                          int r, const Tolerances& tol = {},
                                          const TiePolicy& policy = {})
{
    Matrix t = trajectory_matrix(signal, window);
    CadzowProblem p;
    p.rows = t.rows;
    p.cols = t.cols;
    p.r = r;
    p.S0 = t;
    p.structure = make_toeplitz_set(t.rows, t.cols);
    CadzowRun run = cadzow_run(p, tol, policy);
    if (run.trace.stop_reason == StopReason::diverged)
        throw CadzowDivergence(std::move(run.trace));
    CadzowDenoiseResult res;
    res.signal = signal_from_trajectory(run.limit);
    res.sigma_residual = run.sigma_residual;
    res.iterations = long(run.trace.records.size());
    return res;
}

} // namespace projlab
