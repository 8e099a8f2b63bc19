// Numeric primitives shared by every module: points, projection results,
// tie-breaking and tolerance policy.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlab {

using Point = std::vector<double>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool all_finite(const Point& p)
{
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void require_finite(const Point& p, const char* what)
{
    if (p.empty()) throw Error(std::string(what) + ": empty point");
    if (!all_finite(p)) throw Error(std::string(what) + ": non-finite entry");
}

// ----------------------------------------------------------------
// basic vector algebra
// ----------------------------------------------------------------

inline double dot(const Point& x, const Point& y)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Point& x) { return std::sqrt(dot(x, x)); }

inline double distance(const Point& x, const Point& y)
{
    if (x.size() != y.size())
        throw Error("distance: dimension mismatch (" + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Point operator+(Point a, const Point& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline Point operator-(Point a, const Point& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline Point operator*(double s, Point a)
{
    for (double& v : a) v *= s;
    return a;
}

// Angle between u and v in [0, pi], computed from normalized legs so that
// tiny angles keep full relative accuracy.  Returns -1 when a leg is shorter
// than leg_tol (the angle is undefined at coincident points).
inline double angle_between(const Point& u, const Point& v, double leg_tol)
{
    const double nu = norm(u), nv = norm(v);
    if (nu < leg_tol || nv < leg_tol) return -1.0;
    double diff2 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i] / nu, b = v[i] / nv;
        diff2 += (a - b) * (a - b);
        sum2 += (a + b) * (a + b);
    }
    // 2*atan2(|u^ - v^|, |u^ + v^|) is stable over the whole range
    return 2.0 * std::atan2(std::sqrt(diff2), std::sqrt(sum2));
}

// 1 - cos(theta) without cancellation for small theta.
inline double one_minus_cos(double theta)
{
    const double s = std::sin(0.5 * theta);
    return 2.0 * s * s;
}

// ----------------------------------------------------------------
// projection results and tie-breaking
// ----------------------------------------------------------------

struct ProjectionResult {
    std::vector<Point> points;   // nonempty, each a nearest point
    double distance = 0.0;       // common distance from the query
    bool multivalued = false;    // true when the nearest point is not unique
    int chosen_index = -1;       // set by select()

    static ProjectionResult single(Point p, double d)
    {
        ProjectionResult r;
        r.points.push_back(std::move(p));
        r.distance = d;
        return r;
    }
};

struct TiePolicy {
    enum class Mode { first, lowest_lex, seeded_random };
    Mode mode = Mode::first;
    std::uint64_t seed = 0;
};

struct Tolerances {
    double tol_proj = 1e-10;   // nearest-point verification slack
    double tol_step = 1e-12;   // stationarity threshold
    long max_iter = 1000000;

    void validate() const
    {
        if (!(tol_proj > 0.0) || !(tol_step > 0.0))
            throw Error("Tolerances: tol_proj and tol_step must be positive");
        if (max_iter < 1) throw Error("Tolerances: max_iter must be >= 1");
    }
};

// splitmix64: portable, stateless bit mixer used for seeded tie-breaking and
// for seeded sampling in experiments (keeps traces bit-reproducible).
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t& state)
{
    state = splitmix64(state);
    return double(state >> 11) * 0x1.0p-53;
}

inline bool lex_less(const Point& a, const Point& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Deterministic choice among tied nearest points.  seeded_random hashes the
// candidate coordinates together with the seed, so repeated calls on the
// same input agree bit-for-bit.
inline const Point& select(ProjectionResult& result, const TiePolicy& policy)
{
    if (result.points.empty()) throw Error("select: empty projection result");
    std::size_t idx = 0;
    switch (policy.mode) {
    case TiePolicy::Mode::first:
        idx = 0;
        break;
    case TiePolicy::Mode::lowest_lex: {
        for (std::size_t i = 1; i < result.points.size(); ++i)
            if (lex_less(result.points[i], result.points[idx])) idx = i;
        break;
    }
    case TiePolicy::Mode::seeded_random: {
        std::uint64_t h = splitmix64(policy.seed);
        for (const Point& p : result.points)
            for (double v : p) {
                std::uint64_t bits;
                static_assert(sizeof(bits) == sizeof(v));
                std::memcpy(&bits, &v, sizeof(bits));
                h = splitmix64(h ^ bits);
            }
        idx = std::size_t(h % result.points.size());
        break;
    }
    }
    result.chosen_index = int(idx);
    return result.points[idx];
}

inline const char* tie_mode_name(TiePolicy::Mode m)
{
    switch (m) {
    case TiePolicy::Mode::first: return "first";
    case TiePolicy::Mode::lowest_lex: return "lowest-lex";
    case TiePolicy::Mode::seeded_random: return "seeded-random";
    }
    return "?";
}

inline TiePolicy::Mode tie_mode_from_name(const std::string& s)
{
    if (s == "first") return TiePolicy::Mode::first;
    if (s == "lowest-lex") return TiePolicy::Mode::lowest_lex;
    if (s == "seeded-random") return TiePolicy::Mode::seeded_random;
    throw Error("unknown tie policy mode: " + s);
}

} // namespace projlab
