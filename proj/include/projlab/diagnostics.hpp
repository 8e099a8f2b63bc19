// Quantitative checks of the regularity conditions and rate predictions on
// recorded traces: gap estimation, angle-exponent fits, rate fits, the
// three-/four-point estimates, Hoelder checks, and reach probes.
//
// Finite traces can refute these conditions but never certify them; reports
// are to be read as "consistent with", not "satisfies".
#pragma once

#include "core.hpp"
#include "engine.hpp"
#include "sets.hpp"

namespace projlab {

constexpr double kGapTol = 1e-7;   // feasibility threshold on r*

struct Gap {
    double r_star = 0.0;
    std::vector<Point> a_clusters;
    std::vector<Point> b_clusters;
    bool feasible = false;
};

namespace detail {

// Greedy farthest-point covering at fixed radius: repeatedly promote the
// point farthest from the current centers until everything is covered.
inline std::vector<Point> greedy_clusters(const std::vector<Point>& pts, double radius)
{
    std::vector<Point> centers;
    if (pts.empty()) return centers;
    std::vector<double> dist(pts.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (true) {
        centers.push_back(pts[next]);
        double worst = 0.0;
        std::size_t worst_i = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = distance(pts[i], centers.back());
            if (d < dist[i]) dist[i] = d;
            if (dist[i] > worst) {
                worst = dist[i];
                worst_i = i;
            }
        }
        if (worst <= radius) break;
        next = worst_i;
    }
    return centers;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 1.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

} // namespace detail

// r* is the infimum of the recorded r_k; cluster sets cover the tail points.
inline Gap estimate_gap(const Trace& trace, double tail_fraction = 0.25,
                        double cluster_radius = 0.1)
{
    if (trace.records.empty()) throw Error("estimate_gap: empty trace");
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw Error("estimate_gap: tail_fraction must be in (0, 1]");

    Gap gap;
    gap.r_star = std::numeric_limits<double>::infinity();
    for (const auto& rec : trace.records) gap.r_star = std::min(gap.r_star, rec.r);
    gap.feasible = gap.r_star <= kGapTol;

    const std::size_t n = trace.records.size();
    const std::size_t tail = std::max<std::size_t>(1, std::size_t(std::ceil(tail_fraction * double(n))));
    std::vector<Point> as, bs;
    for (std::size_t i = n - tail; i < n; ++i) {
        as.push_back(trace.records[i].a);
        bs.push_back(trace.records[i].b);
    }
    gap.a_clusters = detail::greedy_clusters(as, cluster_radius);
    gap.b_clusters = detail::greedy_clusters(bs, cluster_radius);
    return gap;
}

struct AngleFit {
    double omega = 0.0;    // fitted exponent of (1 - cos alpha) ~ (r - r*)^omega
    double gamma = 0.0;    // min ratio at the fitted exponent
    double theta = 0.5;    // (omega + 2) / 4
    int n_points = 0;
    double r_floor = 0.0;
    double r_squared = 0.0;
};

inline AngleFit fit_angle_exponent(const Trace& trace, const Gap& gap,
                                   double r_floor = 1e-9)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const auto& rec = trace.records[i];
        if (rec.alpha < 0.0) continue;
        const double excess = rec.r - gap.r_star;
        if (excess <= r_floor) continue;
        const double num = one_minus_cos(rec.alpha);
        if (num <= 0.0) continue;
        lx.push_back(std::log(excess));
        ly.push_back(std::log(num));
    }
    if (lx.size() < 8)
        throw Error("fit_angle_exponent: only " + std::to_string(lx.size()) +
                    " usable blocks (need >= 8)");

    const detail::LineFit f = detail::least_squares(lx, ly);
    AngleFit fit;
    fit.omega = f.slope;
    fit.theta = (fit.omega + 2.0) / 4.0;
    fit.n_points = int(lx.size());
    fit.r_floor = r_floor;
    fit.r_squared = f.r_squared;
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lx.size(); ++i)
        gmin = std::min(gmin, std::exp(ly[i] - fit.omega * lx[i]));
    fit.gamma = gmin;
    return fit;
}

enum class RateKind { finite, linear, sublinear };

inline const char* rate_kind_name(RateKind k)
{
    switch (k) {
    case RateKind::finite: return "finite";
    case RateKind::linear: return "linear";
    case RateKind::sublinear: return "sublinear";
    }
    return "?";
}

struct RateFit {
    RateKind kind = RateKind::finite;
    double q = 0.0;      // linear ratio, populated iff kind == linear
    double rho = 0.0;    // power exponent, populated iff kind == sublinear
    double r_squared = 1.0;
    Point reference;     // limit proxy (final point of the series)
};

// Distances are measured to the final point as limit proxy.  The last
// drop_tail fraction is excluded from the fit (those distances are dominated
// by the proxy error), and fit points are taken log-uniformly in k so that a
// power law is weighted evenly across decades.
inline RateFit fit_rate(const std::vector<Point>& series, double drop_tail = 0.1)
{
    if (series.size() < 20) throw Error("fit_rate: need >= 20 points");
    if (!(drop_tail >= 0.0) || drop_tail >= 1.0)
        throw Error("fit_rate: drop_tail must be in [0, 1)");

    RateFit fit;
    fit.reference = series.back();

    const std::size_t n = series.size();
    std::size_t cutoff = n - 1 - std::size_t(std::floor(drop_tail * double(n)));
    if (cutoff < 2) cutoff = 2;

    std::vector<double> d(cutoff);
    bool all_zero = true;
    bool hits_zero = false;
    for (std::size_t k = 0; k < cutoff; ++k) {
        d[k] = distance(series[k], fit.reference);
        if (d[k] > 0.0) all_zero = false;
        else hits_zero = true;
    }
    if (all_zero || hits_zero) {
        fit.kind = RateKind::finite;
        return fit;
    }

    // log-uniform subsample of indices 1..cutoff-1
    std::vector<std::size_t> ks;
    const int target = 512;
    const double l0 = std::log(1.0), l1 = std::log(double(cutoff - 1));
    std::size_t prev = 0;
    for (int i = 0; i <= target; ++i) {
        const double l = l0 + (l1 - l0) * double(i) / double(target);
        std::size_t k = std::size_t(std::llround(std::exp(l)));
        k = std::min(k, cutoff - 1);
        if (k != prev) {
            ks.push_back(k);
            prev = k;
        }
    }
    if (ks.size() < 3) ks = {1, cutoff / 2, cutoff - 1};

    std::vector<double> xk, xlogk, y;
    for (std::size_t k : ks) {
        xk.push_back(double(k));
        xlogk.push_back(std::log(double(k)));
        y.push_back(std::log(d[k]));
    }
    const detail::LineFit lin = detail::least_squares(xk, y);
    const detail::LineFit pwr = detail::least_squares(xlogk, y);

    if (lin.r_squared >= pwr.r_squared) {
        fit.kind = RateKind::linear;
        fit.q = std::exp(lin.slope);
        fit.r_squared = lin.r_squared;
    } else {
        fit.kind = RateKind::sublinear;
        fit.rho = -pwr.slope;
        fit.r_squared = pwr.r_squared;
    }
    return fit;
}

// Rate class predicted from the Lojasiewicz exponent:
//   r* > 0: theta = 1/2 finite; theta in (1/2, 3/4] linear;
//           theta in (3/4, 1) sublinear with rho = (1-theta)/(2 theta - 3/2).
//   r* = 0: theta = 1/2 linear; theta in (1/2, 1) sublinear with
//           rho = (1-theta)/(2 theta - 1).
inline RateFit predicted_rate(double theta, double r_star)
{
    if (!(theta >= 0.5) || !(theta < 1.0))
        throw Error("predicted_rate: theta must lie in [0.5, 1)");
    RateFit fit;
    const bool infeasible = r_star > kGapTol;
    if (infeasible) {
        if (theta == 0.5) {
            fit.kind = RateKind::finite;
        } else if (theta <= 0.75) {
            fit.kind = RateKind::linear;
            fit.q = 0.5;   // limit ratio for theta < 3/4; instance constant at 3/4
        } else {
            fit.kind = RateKind::sublinear;
            fit.rho = (1.0 - theta) / (2.0 * theta - 1.5);
        }
    } else {
        if (theta == 0.5) {
            fit.kind = RateKind::linear;
            fit.q = 0.5;
        } else {
            fit.kind = RateKind::sublinear;
            fit.rho = (1.0 - theta) / (2.0 * theta - 1.0);
        }
    }
    return fit;
}

struct EstimateViolation {
    long k = 0;
    double lhs = 0.0, rhs = 0.0;
};

struct EstimateReport {
    int checked = 0;
    std::vector<EstimateViolation> violations;
    double ell_used = 0.0;
};

inline double lemma_ell(double c, double gamma)
{
    return std::min({0.5, 1.0 - std::sqrt(2.0 * c / gamma), c / (2.0 + c)});
}

// |a+ - b+|^2 + ell |b - b+|^2 <= |b - a+|^2 per building block,
// with ell = min{1/2, 1 - sqrt(2c/gamma), c/(2+c)}.
inline EstimateReport check_three_point(const Trace& trace, double c, double gamma,
                                        double /*r_star*/ = 0.0)
{
    if (!(c < gamma / 2.0))
        throw Error("check_three_point: requires c < gamma/2");
    EstimateReport rep;
    rep.ell_used = lemma_ell(c, gamma);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const auto& prev = trace.records[i - 1];
        const auto& rec = trace.records[i];
        const double bbp = distance(prev.b, rec.b);
        const double ba = distance(prev.b, rec.a);
        const double lhs = rec.r * rec.r + rep.ell_used * bbp * bbp;
        const double rhs = ba * ba;
        ++rep.checked;
        if (lhs > rhs + 1e-12 * std::max({1.0, lhs, rhs}))
            rep.violations.push_back({rec.k, lhs, rhs});
    }
    return rep;
}

// d_B(a_k)^2 - d_B(a_{k+1})^2 >= ell |b_k - b_{k+1}|^2 over consecutive blocks.
inline EstimateReport check_four_point(const Trace& trace, double ell,
                                       double /*r_star*/ = 0.0)
{
    if (!(ell > 0.0)) throw Error("check_four_point: ell must be positive");
    EstimateReport rep;
    rep.ell_used = ell;
    for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
        const auto& rec = trace.records[i];
        const auto& next = trace.records[i + 1];
        const double bb = distance(rec.b, next.b);
        const double lhs = rec.r * rec.r - next.r * next.r;
        const double rhs = ell * bb * bb;
        ++rep.checked;
        if (lhs < rhs - 1e-12 * std::max({1.0, std::abs(lhs), rhs}))
            rep.violations.push_back({next.k, lhs, rhs});
    }
    return rep;
}

constexpr double kReachInfinite = std::numeric_limits<double>::infinity();

// R(b, d) = sup{R >= 0 : P_B(b + R d) = b}, by doubling search plus bisection
// on the predicate "the projection returns b uniquely".  Returns the infinite
// marker when the predicate still holds at R_max.
inline double reach_along(const SetDescriptor& B, const Point& b, const Point& d,
                          double R_max = 1e3, double tol = 1e-8,
                          double match_tol = 1e-6)
{
    const double nd = norm(d);
    if (std::abs(nd - 1.0) > 1e-6) throw Error("reach_along: direction must be unit");
    if (B.membership(b) > 1e-8)
        throw Error("reach_along: base point is not in the set");

    auto holds = [&](double R) {
        ProjectionResult r = B.project(b + (R / nd) * d);
        if (r.multivalued) return false;
        return distance(r.points.front(), b) <= match_tol;
    };

    double lo = 0.0;
    double hi = std::max(tol, 1e-9);
    while (holds(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi >= R_max) {
            if (holds(R_max)) return kReachInfinite;
            hi = R_max;
            break;
        }
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Ratio series (r_k - r*)^sigma / (R(b_k, d_k) - r*) whose limsup estimates
// the shrink rate tau; a convex B gives infinite reach and zero ratios.
inline std::vector<double> shrinking_reach_ratio(const Trace& trace, const SetDescriptor& B,
                                                 double sigma, const Gap& gap,
                                                 double R_max = 1e3, double tol = 1e-6)
{
    std::vector<double> ratios;
    for (const auto& rec : trace.records) {
        const double excess = rec.r - gap.r_star;
        if (excess <= 1e-12 || rec.r <= 0.0) continue;
        Point dir = (1.0 / rec.r) * (rec.a - rec.b);
        const double R = reach_along(B, rec.b, dir, R_max, tol);
        if (R == kReachInfinite) {
            ratios.push_back(0.0);
            continue;
        }
        const double den = R - gap.r_star;
        if (den <= 0.0) {
            ratios.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        ratios.push_back(std::pow(excess, sigma) / den);
    }
    return ratios;
}

// Hoelder exclusion test: blocks whose previous b lands in the ball
// B(a_k, (1+c) r_k) must satisfy cos(beta_k) <= sqrt(c) (r_k - r*)^sigma.
inline EstimateReport holder_check(const Trace& trace, double c, double sigma,
                                   const Gap& gap)
{
    if (!(c > 0.0) || !(sigma > 0.0))
        throw Error("holder_check: c and sigma must be positive");
    EstimateReport rep;
    rep.ell_used = c;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const auto& prev = trace.records[i - 1];
        const auto& rec = trace.records[i];
        if (rec.beta < 0.0) continue;
        if (distance(prev.b, rec.a) > (1.0 + c) * rec.r) continue;
        const double excess = std::max(rec.r - gap.r_star, 0.0);
        const double lhs = std::cos(rec.beta);
        const double rhs = std::sqrt(c) * std::pow(excess, sigma);
        ++rep.checked;
        if (lhs > rhs + 1e-12)
            rep.violations.push_back({rec.k, lhs, rhs});
    }
    return rep;
}

// Norm of the smallest Frechet subgradient witness of
// f = i_A + (d_B - r*)^2 / 2 at a:  min over lambda >= 0 of
// |lambda (prev_b - a) + (1 - r*/d_B(a)) (a - P_B(a))|.
inline double criticality_residual(const Point& a, const Point& prev_b,
                                   const SetDescriptor& A, const SetDescriptor& B,
                                   double r_star)
{
    (void)A;   // membership of a in A is the caller's precondition
    ProjectionResult pb = B.project(a);
    const double d = pb.distance;
    if (d <= 0.0)
        throw Error("criticality_residual: d_B(a) = 0 (feasible point, residual undefined)");
    const Point w = (1.0 - r_star / d) * (a - pb.points.front());
    const Point u = prev_b - a;
    const double uu = dot(u, u);
    double lambda = 0.0;
    if (uu > 0.0) lambda = std::max(0.0, -dot(u, w) / uu);
    return norm(lambda * u + w);
}

} // namespace projlab
