// Catalog of closed sets with nearest-point projectors.  Every set is wrapped
// in a SetDescriptor so the iteration drivers can treat them uniformly.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>

#include "core.hpp"
#include "fourier.hpp"
#include "matrix.hpp"

namespace projlab {

enum class SetFamily {
    affine,
    box_product,
    sphere_product,
    epigraph_quadratic,
    low_rank,
    toeplitz,
    sparsity,
    sparse_phase,
    support,
    nonneg_real,
    cylinder,
    param_curve,
    product,
    lifted,
};

struct SetDescriptor {
    SetFamily family = SetFamily::affine;
    std::string name;
    int dimension = 0;
    std::function<ProjectionResult(const Point&)> project;
    // Warm-startable local projector (param curves only): (q, t_prev) -> (point, t).
    std::function<std::pair<Point, double>(const Point&, double)> local_project;

    bool warm_startable() const { return bool(local_project); }

    // Membership residual: distance from q to the set.
    double membership(const Point& q) const { return project(q).distance; }
};

// ----------------------------------------------------------------
// affine sets  A = offset + span{basis}
// ----------------------------------------------------------------

inline ProjectionResult project_affine(const Point& offset,
                                       const std::vector<Point>& basis,
                                       const Point& q)
{
    const int n = int(offset.size());
    const int p = int(basis.size());
    if (int(q.size()) != n) throw Error("project_affine: dimension mismatch");
    if (p == 0) return ProjectionResult::single(offset, distance(q, offset));

    Eigen::MatrixXd g(p, p);
    Eigen::VectorXd rhs(p);
    for (int i = 0; i < p; ++i) {
        if (int(basis[i].size()) != n) throw Error("project_affine: basis dimension mismatch");
        for (int j = 0; j < p; ++j) g(i, j) = dot(basis[i], basis[j]);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += basis[i][k] * (q[k] - offset[k]);
        rhs(i) = s;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    lu.setThreshold(1e-12);
    if (lu.rank() < p) throw Error("project_affine: spanning directions are rank-deficient");
    Eigen::VectorXd alpha = lu.solve(rhs);

    Point out = offset;
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < n; ++k) out[k] += alpha(i) * basis[i][k];
    return ProjectionResult::single(out, distance(q, out));
}

inline SetDescriptor make_affine_set(Point offset, std::vector<Point> basis,
                                     std::string name = "affine")
{
    // validate once at construction
    project_affine(offset, basis, offset);
    SetDescriptor s;
    s.family = SetFamily::affine;
    s.name = std::move(name);
    s.dimension = int(offset.size());
    s.project = [offset = std::move(offset), basis = std::move(basis)](const Point& q) {
        return project_affine(offset, basis, q);
    };
    return s;
}

// ----------------------------------------------------------------
// products of circles (Fourier-magnitude sets live per frequency)
// ----------------------------------------------------------------

struct MagnitudeSpec {
    std::vector<double> m;   // target modulus per frequency, >= 0

    double norm_m() const
    {
        double s = 0.0;
        for (double v : m) s += v * v;
        return std::sqrt(s);
    }
};

// Per complex pair: scale to the target modulus.  A zero pair has the whole
// circle nearest; the convention is phase 1, i.e. (m, 0), with the
// multivalued flag raised so experiments can detect the degeneracy.
inline ProjectionResult project_sphere_product(const MagnitudeSpec& spec, const Point& q)
{
    const int n = complex_length(q);
    if (int(spec.m.size()) != n) throw Error("project_sphere_product: N mismatch");
    Point out(q.size(), 0.0);
    bool degenerate = false;
    double d2 = 0.0;
    for (int t = 0; t < n; ++t) {
        const double re = q[2 * t], im = q[2 * t + 1];
        const double rho = std::hypot(re, im);
        const double m = spec.m[std::size_t(t)];
        if (rho == 0.0) {
            out[2 * t] = m;
            out[2 * t + 1] = 0.0;
            if (m > 0.0) degenerate = true;
            d2 += m * m;
        } else {
            const double f = m / rho;
            out[2 * t] = re * f;
            out[2 * t + 1] = im * f;
            d2 += (rho - m) * (rho - m);
        }
    }
    ProjectionResult r = ProjectionResult::single(std::move(out), std::sqrt(d2));
    r.multivalued = degenerate;
    return r;
}

inline SetDescriptor make_sphere_product_set(MagnitudeSpec spec,
                                             std::string name = "sphere-product")
{
    SetDescriptor s;
    s.family = SetFamily::sphere_product;
    s.name = std::move(name);
    s.dimension = 2 * int(spec.m.size());
    s.project = [spec = std::move(spec)](const Point& q) {
        return project_sphere_product(spec, q);
    };
    return s;
}

// ----------------------------------------------------------------
// low-rank matrices, rank(R) <= r
// ----------------------------------------------------------------

inline void combinations_rec(int offset, int need, std::vector<int>& cur,
                             const std::vector<int>& pool,
                             std::vector<std::vector<int>>& out)
{
    if (need == 0) {
        out.push_back(cur);
        return;
    }
    for (int i = offset; i <= int(pool.size()) - need; ++i) {
        cur.push_back(pool[std::size_t(i)]);
        combinations_rec(i + 1, need - 1, cur, pool, out);
        cur.pop_back();
    }
}

// All nearest rank-<=r matrices.  When sigma_r is tied the truncation is not
// unique and every admissible choice is enumerated (the count is
// C(l-k+1, r-k+1) over the tied group k..l).
inline ProjectionResult project_low_rank(const Matrix& m, int r)
{
    if (r < 0) throw Error("project_low_rank: r must be >= 0");
    const int p = std::min(m.rows, m.cols);
    if (r >= p) return ProjectionResult::single(m.flat(), 0.0);

    const Svd s = svd_small(m);
    double tail2 = 0.0;
    for (int i = r; i < p; ++i) tail2 += s.sigma[std::size_t(i)] * s.sigma[std::size_t(i)];
    const double dist = std::sqrt(tail2);

    ProjectionResult out;
    out.distance = dist;
    if (r == 0) {
        out.points.push_back(Point(m.a.size(), 0.0));
        return out;
    }

    const double scale = std::max(s.sigma[0], 1.0);
    const double tie_tol = 1e-9 * scale;
    const double sigma_cut = s.sigma[std::size_t(r - 1)];

    int k0 = r - 1, l0 = r - 1;
    while (k0 > 0 && std::abs(s.sigma[std::size_t(k0 - 1)] - sigma_cut) <= tie_tol) --k0;
    while (l0 + 1 < p && std::abs(s.sigma[std::size_t(l0 + 1)] - sigma_cut) <= tie_tol) ++l0;

    if (l0 == r - 1 || sigma_cut <= tie_tol) {
        // unique truncation (either no tie crosses the cut, or the tied value
        // is zero so all choices coincide)
        std::vector<int> keep(std::size_t(r), 0);
        for (int i = 0; i < r; ++i) keep[std::size_t(i)] = i;
        out.points.push_back(svd_truncate(s, keep, m.rows, m.cols).flat());
        return out;
    }

    std::vector<int> group;
    for (int i = k0; i <= l0; ++i) group.push_back(i);
    const int pick = r - k0;   // tied values kept
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    combinations_rec(0, pick, cur, group, combos);
    for (const auto& combo : combos) {
        std::vector<int> keep;
        for (int i = 0; i < k0; ++i) keep.push_back(i);
        for (int g : combo) keep.push_back(g);
        out.points.push_back(svd_truncate(s, keep, m.rows, m.cols).flat());
    }
    out.multivalued = out.points.size() > 1;
    return out;
}

inline SetDescriptor make_low_rank_set(int rows, int cols, int r)
{
    SetDescriptor s;
    s.family = SetFamily::low_rank;
    s.name = "low-rank(r=" + std::to_string(r) + ")";
    s.dimension = rows * cols;
    s.project = [rows, cols, r](const Point& q) {
        return project_low_rank(Matrix::from_flat(q, rows, cols), r);
    };
    return s;
}

// ----------------------------------------------------------------
// Toeplitz matrices (constant diagonals); projection = diagonal averaging
// ----------------------------------------------------------------

inline ProjectionResult project_toeplitz(const Matrix& m)
{
    Matrix out(m.rows, m.cols);
    for (int d = -(m.cols - 1); d <= m.rows - 1; ++d) {
        double sum = 0.0;
        int cnt = 0;
        for (int i = std::max(0, d); i < m.rows && i - d < m.cols; ++i) {
            sum += m(i, i - d);
            ++cnt;
        }
        const double avg = sum / double(cnt);
        for (int i = std::max(0, d); i < m.rows && i - d < m.cols; ++i) out(i, i - d) = avg;
    }
    Point flat = out.flat();
    double dist = distance(m.flat(), flat);
    return ProjectionResult::single(std::move(flat), dist);
}

inline SetDescriptor make_toeplitz_set(int rows, int cols)
{
    SetDescriptor s;
    s.family = SetFamily::toeplitz;
    s.name = "toeplitz";
    s.dimension = rows * cols;
    s.project = [rows, cols](const Point& q) {
        return project_toeplitz(Matrix::from_flat(q, rows, cols));
    };
    return s;
}

// ----------------------------------------------------------------
// sparsity in the physical domain: at most k entries non-zero
// ----------------------------------------------------------------

inline ProjectionResult project_sparsity(const Point& q, int k)
{
    const int n = complex_length(q);
    if (k < 0 || k > n) throw Error("project_sparsity: need 0 <= k <= N");
    if (k == n) return ProjectionResult::single(q, 0.0);

    std::vector<double> mod(std::size_t(n), 0.0);
    for (int t = 0; t < n; ++t) mod[std::size_t(t)] = std::hypot(q[2 * t], q[2 * t + 1]);
    std::vector<int> order(std::size_t(n), 0);
    for (int t = 0; t < n; ++t) order[std::size_t(t)] = t;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return mod[std::size_t(a)] < mod[std::size_t(b)]; });

    const int zeros = n - k;
    double scale = std::max(mod[std::size_t(order[std::size_t(n - 1)])], 1.0);
    const double tie_tol = 1e-12 * scale;
    const double cut = mod[std::size_t(order[std::size_t(zeros - 1)])];

    int first = zeros - 1, last = zeros - 1;
    while (first > 0 && std::abs(mod[std::size_t(order[std::size_t(first - 1)])] - cut) <= tie_tol) --first;
    while (last + 1 < n && std::abs(mod[std::size_t(order[std::size_t(last + 1)])] - cut) <= tie_tol) ++last;

    double d2 = 0.0;
    for (int i = 0; i < zeros; ++i) {
        const double v = mod[std::size_t(order[std::size_t(i)])];
        d2 += v * v;
    }
    const double dist = std::sqrt(d2);

    auto zero_out = [&](const std::vector<int>& kill) {
        Point out = q;
        for (int t : kill) {
            out[2 * t] = 0.0;
            out[2 * t + 1] = 0.0;
        }
        return out;
    };

    ProjectionResult out;
    out.distance = dist;
    if (last == zeros - 1) {
        std::vector<int> kill;
        for (int i = 0; i < zeros; ++i) kill.push_back(order[std::size_t(i)]);
        out.points.push_back(zero_out(kill));
        return out;
    }

    // a tie crosses the cut: choose which tied entries to zero
    std::vector<int> group;
    for (int i = first; i <= last; ++i) group.push_back(order[std::size_t(i)]);
    const int kill_in_group = zeros - first;
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    combinations_rec(0, kill_in_group, cur, group, combos);
    for (const auto& combo : combos) {
        std::vector<int> kill;
        for (int i = 0; i < first; ++i) kill.push_back(order[std::size_t(i)]);
        for (int g : combo) kill.push_back(g);
        Point p = zero_out(kill);
        bool dup = false;
        for (const Point& prev : out.points)
            if (prev == p) { dup = true; break; }
        if (!dup) out.points.push_back(std::move(p));
    }
    out.multivalued = out.points.size() > 1;
    return out;
}

inline SetDescriptor make_sparsity_set(int n, int k)
{
    SetDescriptor s;
    s.family = SetFamily::sparsity;
    s.name = "sparsity(k=" + std::to_string(k) + ")";
    s.dimension = 2 * n;
    s.project = [k](const Point& q) { return project_sparsity(q, k); };
    return s;
}

// ----------------------------------------------------------------
// sparse phase in the frequency domain: arg(x^(w)) != 0 for at most k of the w
// ----------------------------------------------------------------

inline ProjectionResult project_sparse_phase(const Point& q, int k)
{
    const int n = complex_length(q);
    if (k < 0 || k > n) throw Error("project_sparse_phase: need 0 <= k <= N");
    if (k == n) return ProjectionResult::single(q, 0.0);

    const Point X = dft_interleaved(q, false);
    std::vector<double> aim(std::size_t(n), 0.0);
    for (int w = 0; w < n; ++w) aim[std::size_t(w)] = std::abs(X[2 * w + 1]);
    std::vector<int> order(std::size_t(n), 0);
    for (int w = 0; w < n; ++w) order[std::size_t(w)] = w;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return aim[std::size_t(a)] < aim[std::size_t(b)]; });

    const int zeros = n - k;
    const double scale = std::max(aim[std::size_t(order[std::size_t(n - 1)])], 1.0);
    const double tie_tol = 1e-12 * scale;
    const double cut = aim[std::size_t(order[std::size_t(zeros - 1)])];

    int first = zeros - 1, last = zeros - 1;
    while (first > 0 && std::abs(aim[std::size_t(order[std::size_t(first - 1)])] - cut) <= tie_tol) --first;
    while (last + 1 < n && std::abs(aim[std::size_t(order[std::size_t(last + 1)])] - cut) <= tie_tol) ++last;

    auto realise = [&](const std::vector<int>& kill) {
        Point Y = X;
        for (int w : kill) Y[2 * w + 1] = 0.0;
        return dft_interleaved(Y, true);
    };

    double d2 = 0.0;
    for (int i = 0; i < zeros; ++i) {
        const double v = aim[std::size_t(order[std::size_t(i)])];
        d2 += v * v;
    }

    ProjectionResult out;
    out.distance = std::sqrt(d2);
    if (last == zeros - 1) {
        std::vector<int> kill;
        for (int i = 0; i < zeros; ++i) kill.push_back(order[std::size_t(i)]);
        out.points.push_back(realise(kill));
        return out;
    }
    std::vector<int> group;
    for (int i = first; i <= last; ++i) group.push_back(order[std::size_t(i)]);
    const int kill_in_group = zeros - first;
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    combinations_rec(0, kill_in_group, cur, group, combos);
    for (const auto& combo : combos) {
        std::vector<int> kill;
        for (int i = 0; i < first; ++i) kill.push_back(order[std::size_t(i)]);
        for (int g : combo) kill.push_back(g);
        Point p = realise(kill);
        bool dup = false;
        for (const Point& prev : out.points)
            if (distance(prev, p) <= 1e-15 * scale) { dup = true; break; }
        if (!dup) out.points.push_back(std::move(p));
    }
    out.multivalued = out.points.size() > 1;
    return out;
}

inline SetDescriptor make_sparse_phase_set(int n, int k)
{
    SetDescriptor s;
    s.family = SetFamily::sparse_phase;
    s.name = "sparse-phase(k=" + std::to_string(k) + ")";
    s.dimension = 2 * n;
    s.project = [k](const Point& q) { return project_sparse_phase(q, k); };
    return s;
}

// ----------------------------------------------------------------
// support prior and non-negative real signals
// ----------------------------------------------------------------

inline SetDescriptor make_support_set(int n, std::vector<int> support)
{
    std::vector<char> keep(std::size_t(n), 0);
    for (int t : support) {
        if (t < 0 || t >= n) throw Error("support set: index out of range");
        keep[std::size_t(t)] = 1;
    }
    SetDescriptor s;
    s.family = SetFamily::support;
    s.name = "support";
    s.dimension = 2 * n;
    s.project = [keep = std::move(keep), n](const Point& q) {
        if (complex_length(q) != n) throw Error("support set: dimension mismatch");
        Point out = q;
        double d2 = 0.0;
        for (int t = 0; t < n; ++t)
            if (!keep[std::size_t(t)]) {
                d2 += out[2 * t] * out[2 * t] + out[2 * t + 1] * out[2 * t + 1];
                out[2 * t] = 0.0;
                out[2 * t + 1] = 0.0;
            }
        return ProjectionResult::single(std::move(out), std::sqrt(d2));
    };
    return s;
}

inline ProjectionResult project_nonneg_real(const Point& q)
{
    const int n = complex_length(q);
    Point out(q.size(), 0.0);
    double d2 = 0.0;
    for (int t = 0; t < n; ++t) {
        const double re = q[2 * t], im = q[2 * t + 1];
        const double p = std::max(re, 0.0);
        out[2 * t] = p;
        d2 += (re - p) * (re - p) + im * im;
    }
    return ProjectionResult::single(std::move(out), std::sqrt(d2));
}

inline SetDescriptor make_nonneg_real_set(int n)
{
    SetDescriptor s;
    s.family = SetFamily::nonneg_real;
    s.name = "nonneg-real";
    s.dimension = 2 * n;
    s.project = [](const Point& q) { return project_nonneg_real(q); };
    return s;
}

// ----------------------------------------------------------------
// cylinder mantle in R^3: x1^2 + x2^2 = 1, 0 <= x3 <= 1
// ----------------------------------------------------------------

inline ProjectionResult project_cylinder(const Point& q)
{
    if (q.size() != 3) throw Error("project_cylinder: expects R^3");
    const double rho = std::hypot(q[0], q[1]);
    const double h = std::clamp(q[2], 0.0, 1.0);
    Point out(3);
    bool degenerate = false;
    if (rho == 0.0) {
        out = {1.0, 0.0, h};
        degenerate = true;
    } else {
        out = {q[0] / rho, q[1] / rho, h};
    }
    const double dr = rho - 1.0, dz = q[2] - h;
    ProjectionResult r = ProjectionResult::single(std::move(out), std::sqrt(dr * dr + dz * dz));
    r.multivalued = degenerate;
    return r;
}

inline SetDescriptor make_cylinder_set()
{
    SetDescriptor s;
    s.family = SetFamily::cylinder;
    s.name = "cylinder";
    s.dimension = 3;
    s.project = [](const Point& q) { return project_cylinder(q); };
    return s;
}

// ----------------------------------------------------------------
// epigraph of phi(x) = a0 + (a2/2) x^2
// ----------------------------------------------------------------

// Foot point of q under the graph: root of h(u) = (u - q1) + a2 u (phi(u) - q2),
// bracketed and bisected, then polished by safeguarded Newton to machine
// precision (the drivers iterate this map 1e5 times, so per-step error must
// stay at rounding level).
inline double epigraph_foot(double q1, double q2, double a0, double a2)
{
    auto phi = [&](double u) { return a0 + 0.5 * a2 * u * u; };
    auto h = [&](double u) { return (u - q1) + a2 * u * (phi(u) - q2); };

    double lo = std::min(q1, 0.0) - 1.0, hi = std::max(q1, 0.0) + 1.0;
    double width = hi - lo;
    while (h(lo) > 0.0) { lo -= width; width *= 2.0; }
    width = hi - lo;
    while (h(hi) < 0.0) { hi += width; width *= 2.0; }

    for (int i = 0; i < 80 && hi - lo > 1e-9 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) < 0.0) lo = mid; else hi = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        const double f = h(u);
        const double fp = 1.0 + a2 * (phi(u) - q2) + a2 * a2 * u * u;
        if (fp == 0.0) break;
        double un = u - f / fp;
        if (un < lo || un > hi) un = 0.5 * (lo + hi);
        if (h(un) < 0.0) lo = un; else hi = un;
        if (std::abs(un - u) <= 1e-17 * std::max(1.0, std::abs(u))) { u = un; break; }
        u = un;
    }
    return u;
}

inline ProjectionResult project_epigraph_quadratic(const Point& q, double a0, double a2)
{
    if (q.size() != 2) throw Error("project_epigraph_quadratic: expects R^2");
    if (!(a2 > 0.0)) throw Error("project_epigraph_quadratic: a2 must be positive");
    const double phi_q = a0 + 0.5 * a2 * q[0] * q[0];
    if (q[1] >= phi_q) return ProjectionResult::single(q, 0.0);
    const double u = epigraph_foot(q[0], q[1], a0, a2);
    Point out = {u, a0 + 0.5 * a2 * u * u};
    const double d = distance(q, out);
    return ProjectionResult::single(std::move(out), d);
}

inline SetDescriptor make_epigraph_set(double a0, double a2)
{
    SetDescriptor s;
    s.family = SetFamily::epigraph_quadratic;
    s.name = "epigraph(a0=" + std::to_string(a0) + ")";
    s.dimension = 2;
    s.project = [a0, a2](const Point& q) { return project_epigraph_quadratic(q, a0, a2); };
    return s;
}

// ----------------------------------------------------------------
// parameterized curves
// ----------------------------------------------------------------

struct ParamCurve {
    std::function<Point(double)> map;
    double t_min = 0.0;
    double t_max = 1.0;
    double grid_step = 1e-3;
    int refine_iters = 100;
    std::vector<Point> extra_points;   // finite candidates unioned into the set
};

struct CurveProjection {
    Point point;
    double t = 0.0;
    double dist = 0.0;
    bool from_extra = false;
};

namespace detail {

// Precomputed curve samples in structure-of-arrays layout; the global scan
// over ~4e4 samples per projection is the hot loop of the whole library.
struct CurveSamples {
    std::vector<double> ts;
    std::vector<std::vector<double>> coords;   // one array per dimension
    int dim = 0;
    double max_speed = 0.0;   // max sample-to-sample |dC|/dt, used as a Lipschitz bound

    explicit CurveSamples(const ParamCurve& c)
    {
        if (!(c.grid_step > 0.0)) throw Error("ParamCurve: grid_step must be positive");
        if (!(c.t_max > c.t_min)) throw Error("ParamCurve: empty scan range");
        const long n = long((c.t_max - c.t_min) / c.grid_step) + 1;
        ts.reserve(std::size_t(n + 1));
        for (long i = 0; i < n; ++i) ts.push_back(c.t_min + double(i) * c.grid_step);
        if (ts.back() < c.t_max) ts.push_back(c.t_max);

        Point p0 = c.map(ts[0]);
        require_finite(p0, "ParamCurve sample");
        dim = int(p0.size());
        coords.assign(std::size_t(dim), {});
        for (auto& col : coords) col.reserve(ts.size());
        Point prev;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            Point p = (i == 0) ? p0 : c.map(ts[i]);
            if (!all_finite(p)) throw Error("ParamCurve: map not finite on scan range");
            for (int d = 0; d < dim; ++d) coords[std::size_t(d)].push_back(p[std::size_t(d)]);
            if (i > 0) {
                const double step = distance(p, prev) / (ts[i] - ts[i - 1]);
                max_speed = std::max(max_speed, step);
            }
            prev = std::move(p);
        }
    }
};

inline std::vector<double>& scan_buffer()
{
    thread_local std::vector<double> buf;
    return buf;
}

// golden-section minimization of t -> |q - C(t)|^2 on [lo, hi]
inline std::pair<double, double> golden_min(const std::function<Point(double)>& map,
                                            const Point& q, double lo, double hi, int iters)
{
    auto f = [&](double t) {
        const Point p = map(t);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double d = q[i] - p[i];
            s += d * d;
        }
        return s;
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = f(x2);
        }
    }
    const double tm = 0.5 * (a + b);
    const double fm = f(tm);
    if (f1 <= f2 && f1 <= fm) return {x1, f1};
    if (f2 <= fm) return {x2, f2};
    return {tm, fm};
}

} // namespace detail

class CurveProjector {
public:
    explicit CurveProjector(ParamCurve curve)
        : curve_(std::move(curve)), samples_(curve_) {}

    const ParamCurve& curve() const { return curve_; }

    CurveProjection operator()(const Point& q) const
    {
        const std::size_t n = samples_.ts.size();
        std::vector<double>& d2 = detail::scan_buffer();
        d2.assign(n, 0.0);
        for (int d = 0; d < samples_.dim; ++d) {
            const double qd = q[std::size_t(d)];
            const double* col = samples_.coords[std::size_t(d)].data();
            double* out = d2.data();
            for (std::size_t i = 0; i < n; ++i) {
                const double diff = qd - col[i];
                out[i] += diff * diff;
            }
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (d2[i] < d2[best]) best = i;

        // candidate basins: sampled local minima close enough to the best to
        // possibly hide the true minimizer
        const double h = curve_.grid_step;
        const double slack = samples_.max_speed * h;
        const double thr = std::sqrt(d2[best]) + 2.0 * slack;
        std::vector<std::size_t> cands;
        cands.push_back(best);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == best) continue;
            const bool locmin = (i == 0 || d2[i] <= d2[i - 1]) &&
                                (i + 1 == n || d2[i] <= d2[i + 1]);
            if (locmin && std::sqrt(d2[i]) <= thr) cands.push_back(i);
        }
        if (cands.size() > 8) {
            std::partial_sort(cands.begin(), cands.begin() + 8, cands.end(),
                              [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
            cands.resize(8);
        }

        CurveProjection bestp;
        bestp.dist = std::numeric_limits<double>::infinity();
        for (std::size_t i : cands) {
            const double lo = samples_.ts[i == 0 ? 0 : i - 1];
            const double hi = samples_.ts[std::min(i + 1, n - 1)];
            auto [t, f] = detail::golden_min(curve_.map, q, lo, hi, curve_.refine_iters);
            const double dist = std::sqrt(f);
            if (dist < bestp.dist) {
                bestp.t = t;
                bestp.dist = dist;
            }
        }
        bestp.point = curve_.map(bestp.t);
        bestp.dist = distance(q, bestp.point);

        for (const Point& e : curve_.extra_points) {
            const double de = distance(q, e);
            if (de < bestp.dist) {
                bestp.point = e;
                bestp.dist = de;
                bestp.from_extra = true;
            }
        }
        return bestp;
    }

    // 1-D descent from t_prev to a local minimizer of t -> |q - C(t)|.
    // The result never increases the distance relative to t_prev.
    CurveProjection warm(const Point& q, double t_prev) const
    {
        const double lo_dom = curve_.t_min, hi_dom = curve_.t_max;
        double t0 = std::clamp(t_prev, lo_dom, hi_dom);
        auto fdist2 = [&](double t) {
            const Point p = curve_.map(t);
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double d = q[i] - p[i];
                s += d * d;
            }
            return s;
        };
        const double f0 = fdist2(t0);
        double h = curve_.grid_step;
        double dir = 0.0, fstep = f0;
        for (int shrink = 0; shrink < 6 && dir == 0.0; ++shrink) {
            const double tp = std::min(t0 + h, hi_dom), tm = std::max(t0 - h, lo_dom);
            const double fp = tp > t0 ? fdist2(tp) : f0;
            const double fm = tm < t0 ? fdist2(tm) : f0;
            if (fp < f0 && fp <= fm) { dir = 1.0; fstep = fp; }
            else if (fm < f0) { dir = -1.0; fstep = fm; }
            else h *= 0.25;
        }
        CurveProjection out;
        if (dir == 0.0) {
            out.t = t0;
            out.point = curve_.map(t0);
            out.dist = distance(q, out.point);
            return out;
        }
        // expand until the profile turns up, then refine the bracket
        double t1 = t0 + dir * h, f1 = fstep;
        double t2 = t1, f2 = f1;
        for (int i = 0; i < 200; ++i) {
            const double tn = std::clamp(t2 + dir * h, lo_dom, hi_dom);
            if (tn == t2) break;
            const double fn = fdist2(tn);
            if (fn >= f2) { t2 = tn; break; }
            t1 = t2; f1 = f2;
            t2 = tn; f2 = fn;
            h *= 2.0;
        }
        const double lo = std::min({t0, t1, t2}), hi = std::max({t0, t1, t2});
        auto [t, f] = detail::golden_min(curve_.map, q, lo, hi, curve_.refine_iters);
        if (f > f0) { t = t0; }
        out.t = t;
        out.point = curve_.map(t);
        out.dist = distance(q, out.point);
        return out;
    }

private:
    ParamCurve curve_;
    detail::CurveSamples samples_;
};

inline ProjectionResult project_param_curve(const CurveProjector& proj, const Point& q)
{
    CurveProjection c = proj(q);
    return ProjectionResult::single(std::move(c.point), c.dist);
}

inline std::pair<Point, double> warm_local_project(const CurveProjector& proj,
                                                   const Point& q, double t_prev)
{
    CurveProjection c = proj.warm(q, t_prev);
    return {std::move(c.point), c.t};
}

inline SetDescriptor make_curve_set(ParamCurve curve, std::string name = "param-curve")
{
    auto proj = std::make_shared<CurveProjector>(std::move(curve));
    SetDescriptor s;
    s.family = SetFamily::param_curve;
    s.name = std::move(name);
    s.dimension = int(proj->curve().map(proj->curve().t_min).size());
    s.project = [proj](const Point& q) { return project_param_curve(*proj, q); };
    s.local_project = [proj](const Point& q, double t_prev) {
        return warm_local_project(*proj, q, t_prev);
    };
    return s;
}

// ----------------------------------------------------------------
// the spiral / double-spiral sets of the cylinder construction
// ----------------------------------------------------------------

inline Point spiral_point(double t)
{
    const double r = 1.0 + std::exp(-t);
    return {r * std::cos(t), r * std::sin(t), std::exp(-0.5 * t)};
}

inline Point inner_spiral_point(double t)
{
    const double r = 1.0 - std::exp(-t);
    return {r * std::cos(t), r * std::sin(t), std::exp(-0.5 * t)};
}

inline Point mantle_point(double t)
{
    return {std::cos(t), std::sin(t), std::exp(-0.5 * t)};
}

// nearest point on the base circle F = {(cos t, sin t, 0)}
inline ProjectionResult project_base_circle(const Point& q)
{
    const double rho = std::hypot(q[0], q[1]);
    ProjectionResult r;
    if (rho == 0.0) {
        r = ProjectionResult::single({1.0, 0.0, 0.0}, std::sqrt(1.0 + q[2] * q[2]));
        r.multivalued = true;
    } else {
        const double dr = rho - 1.0;
        r = ProjectionResult::single({q[0] / rho, q[1] / rho, 0.0},
                                     std::sqrt(dr * dr + q[2] * q[2]));
    }
    return r;
}

inline ParamCurve spiral_curve(double t_max = 40.0, double grid_step = 1e-3,
                               int refine_iters = 100)
{
    ParamCurve c;
    c.map = [](double t) { return spiral_point(t); };
    c.t_min = 0.0;
    c.t_max = t_max;
    c.grid_step = grid_step;
    c.refine_iters = refine_iters;
    return c;
}

inline ParamCurve inner_spiral_curve(double t_max = 40.0, double grid_step = 1e-3,
                                     int refine_iters = 100)
{
    ParamCurve c = spiral_curve(t_max, grid_step, refine_iters);
    c.map = [](double t) { return inner_spiral_point(t); };
    return c;
}

// spiral plus its limit circle F (F projects exactly, not through samples)
inline SetDescriptor make_spiral_set(double t_max = 40.0, double grid_step = 1e-3,
                                     int refine_iters = 100)
{
    auto proj = std::make_shared<CurveProjector>(spiral_curve(t_max, grid_step, refine_iters));
    SetDescriptor s;
    s.family = SetFamily::param_curve;
    s.name = "spiral";
    s.dimension = 3;
    s.project = [proj](const Point& q) {
        ProjectionResult best = project_param_curve(*proj, q);
        ProjectionResult circ = project_base_circle(q);
        return circ.distance < best.distance ? circ : best;
    };
    s.local_project = [proj](const Point& q, double t_prev) {
        return warm_local_project(*proj, q, t_prev);
    };
    return s;
}

inline SetDescriptor make_double_spiral_set(double t_max = 40.0, double grid_step = 1e-3,
                                            int refine_iters = 100)
{
    auto outer = std::make_shared<CurveProjector>(spiral_curve(t_max, grid_step, refine_iters));
    auto inner = std::make_shared<CurveProjector>(inner_spiral_curve(t_max, grid_step, refine_iters));
    SetDescriptor s;
    s.family = SetFamily::param_curve;
    s.name = "double-spiral";
    s.dimension = 3;
    s.project = [outer, inner](const Point& q) {
        ProjectionResult best = project_param_curve(*inner, q);
        ProjectionResult po = project_param_curve(*outer, q);
        if (po.distance < best.distance) best = po;
        ProjectionResult circ = project_base_circle(q);
        return circ.distance < best.distance ? circ : best;
    };
    return s;
}

inline SetDescriptor make_power_curve_set(double alpha, double quad = 0.0, double lift = 0.0,
                                          double half_width = 2.0, double grid_step = 1e-3,
                                          int refine_iters = 100)
{
    ParamCurve c;
    c.map = [alpha, quad, lift](double t) {
        return Point{t, lift + std::pow(std::abs(t), alpha) + quad * t * t};
    };
    c.t_min = -half_width;
    c.t_max = half_width;
    c.grid_step = grid_step;
    c.refine_iters = refine_iters;
    return make_curve_set(std::move(c), "power-curve(alpha=" + std::to_string(alpha) + ")");
}

// ----------------------------------------------------------------
// products, the diagonal, interval-union boxes, translation
// ----------------------------------------------------------------

inline SetDescriptor make_product_set(std::vector<SetDescriptor> components)
{
    if (components.empty()) throw Error("product set: no components");
    int dim = 0;
    for (const auto& c : components) dim += c.dimension;
    SetDescriptor s;
    s.family = SetFamily::product;
    s.name = "product";
    s.dimension = dim;
    s.project = [components = std::move(components), dim](const Point& q) {
        if (int(q.size()) != dim) throw Error("product set: dimension mismatch");
        Point out;
        out.reserve(q.size());
        bool mv = false;
        double d2 = 0.0;
        std::size_t off = 0;
        for (const auto& c : components) {
            Point slice(q.begin() + long(off), q.begin() + long(off) + c.dimension);
            ProjectionResult r = c.project(slice);
            mv = mv || r.multivalued;
            d2 += r.distance * r.distance;
            const Point& p = r.points.front();
            out.insert(out.end(), p.begin(), p.end());
            off += std::size_t(c.dimension);
        }
        ProjectionResult r = ProjectionResult::single(std::move(out), std::sqrt(d2));
        r.multivalued = mv;
        return r;
    };
    return s;
}

// diagonal {(x, ..., x)} of (R^d)^m; projection replicates the mean
inline SetDescriptor make_diagonal_set(int copies, int d)
{
    SetDescriptor s;
    s.family = SetFamily::product;
    s.name = "diagonal";
    s.dimension = copies * d;
    s.project = [copies, d](const Point& q) {
        Point mean(std::size_t(d), 0.0);
        for (int i = 0; i < copies; ++i)
            for (int j = 0; j < d; ++j) mean[std::size_t(j)] += q[std::size_t(i * d + j)];
        for (double& v : mean) v /= double(copies);
        Point out(q.size());
        for (int i = 0; i < copies; ++i)
            for (int j = 0; j < d; ++j) out[std::size_t(i * d + j)] = mean[std::size_t(j)];
        const double dist = distance(q, out);
        return ProjectionResult::single(std::move(out), dist);
    };
    return s;
}

struct IntervalUnion {
    // closed intervals, sorted and disjoint
    std::vector<std::pair<double, double>> intervals;

    void validate() const
    {
        if (intervals.empty()) throw Error("IntervalUnion: empty");
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            if (intervals[i].first > intervals[i].second)
                throw Error("IntervalUnion: lo > hi");
            if (i > 0 && intervals[i].first <= intervals[i - 1].second)
                throw Error("IntervalUnion: intervals overlap or are unsorted");
        }
    }

    bool bounded() const
    {
        return std::isfinite(intervals.front().first) && std::isfinite(intervals.back().second);
    }

    // nearest point; flags an exact two-sided tie
    std::pair<double, bool> nearest(double x) const
    {
        double best = 0.0, bd = std::numeric_limits<double>::infinity();
        bool tie = false;
        for (const auto& [lo, hi] : intervals) {
            const double c = std::clamp(x, lo, hi);
            const double d = std::abs(x - c);
            if (d < bd) {
                bd = d;
                best = c;
                tie = false;
            } else if (d == bd && c != best) {
                tie = true;
            }
        }
        return {best, tie};
    }
};

inline SetDescriptor make_box_product_set(std::vector<IntervalUnion> coords)
{
    for (const auto& c : coords) c.validate();
    SetDescriptor s;
    s.family = SetFamily::box_product;
    s.name = "box-product";
    s.dimension = int(coords.size());
    s.project = [coords = std::move(coords)](const Point& q) {
        if (q.size() != coords.size()) throw Error("box product: dimension mismatch");
        Point out(q.size());
        bool mv = false;
        for (std::size_t i = 0; i < q.size(); ++i) {
            auto [p, tie] = coords[i].nearest(q[i]);
            out[i] = p;
            mv = mv || tie;
        }
        const double dist = distance(q, out);
        ProjectionResult r = ProjectionResult::single(std::move(out), dist);
        r.multivalued = mv;
        return r;
    };
    return s;
}

inline SetDescriptor translate_set(SetDescriptor inner, Point offset)
{
    if (int(offset.size()) != inner.dimension) throw Error("translate_set: dimension mismatch");
    SetDescriptor s;
    s.family = inner.family;
    s.name = inner.name + "+offset";
    s.dimension = inner.dimension;
    auto base = std::make_shared<SetDescriptor>(std::move(inner));
    s.project = [base, offset](const Point& q) {
        ProjectionResult r = base->project(q - offset);
        for (Point& p : r.points) p = p + offset;
        return r;
    };
    return s;
}

} // namespace projlab
