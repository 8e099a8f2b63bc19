#include <gtest/gtest.h>

#include <projlab/sets.hpp>

using namespace projlab;

namespace {

// independent oracle: dense scan of the squared distance over the domain
double brute_force_dist(const std::function<Point(double)>& map, double t0, double t1,
                        double step, const Point& q, double* arg = nullptr)
{
    double best = std::numeric_limits<double>::infinity(), bt = t0;
    for (double t = t0; t <= t1; t += step) {
        const double d = distance(map(t), q);
        if (d < best) {
            best = d;
            bt = t;
        }
    }
    if (arg) *arg = bt;
    return best;
}

} // namespace

TEST(ParamCurve, EmptyScanRangeThrows)
{
    ParamCurve c;
    c.map = [](double t) { return Point{t, 0.0}; };
    c.t_min = 1.0;
    c.t_max = 1.0;
    EXPECT_THROW(CurveProjector{c}, Error);
}

TEST(ParamCurve, OnCurveQueryIsFixed)
{
    CurveProjector proj(spiral_curve());
    const Point q = spiral_point(2.345);
    CurveProjection r = proj(q);
    EXPECT_LE(r.dist, 1e-10);
    EXPECT_NEAR(r.t, 2.345, 1e-7);
}

TEST(ParamCurve, MatchesBruteForceOnSpiralAndPowerCurves)
{
    std::uint64_t state = 31337;

    CurveProjector spiral(spiral_curve(40.0, 1e-3, 100));
    for (int trial = 0; trial < 100; ++trial) {
        Point q = {4.0 * (uniform01(state) - 0.5), 4.0 * (uniform01(state) - 0.5),
                   2.0 * uniform01(state) - 0.5};
        const double mine = spiral(q).dist;
        const double brute = brute_force_dist([](double t) { return spiral_point(t); }, 0.0,
                                              40.0, 5e-4, q);
        EXPECT_LE(mine, brute + 1e-8);
    }

    for (double alpha : {1.2, 1.5}) {
        ParamCurve pc;
        pc.map = [alpha](double t) { return Point{t, std::pow(std::abs(t), alpha)}; };
        pc.t_min = -2.0;
        pc.t_max = 2.0;
        pc.grid_step = 1e-3;
        CurveProjector proj(pc);
        for (int trial = 0; trial < 100; ++trial) {
            Point q = {3.0 * (uniform01(state) - 0.5), 3.0 * (uniform01(state) - 0.5)};
            const double mine = proj(q).dist;
            const double brute = brute_force_dist(pc.map, -2.0, 2.0, 5e-4, q);
            EXPECT_LE(mine, brute + 1e-8) << "alpha=" << alpha;
        }
    }
}

TEST(ParamCurve, PowerCurveProjectionOfUnitHeightPoint)
{
    // (0,1) against {(x, |x|^{3/2})}: the nearest point is NOT the origin;
    // the dense-scan oracle puts it near |x| ~ 0.6118 at distance ~ 0.8039
    ParamCurve pc;
    pc.map = [](double t) { return Point{t, std::pow(std::abs(t), 1.5)}; };
    pc.t_min = -2.0;
    pc.t_max = 2.0;
    CurveProjector proj(pc);

    double arg = 0.0;
    const double brute = brute_force_dist(pc.map, -2.0, 2.0, 1e-6, {0.0, 1.0}, &arg);
    EXPECT_NEAR(std::abs(arg), 0.611808, 2e-4);
    EXPECT_LT(brute, 1.0);   // strictly better than the origin

    CurveProjection r = proj({0.0, 1.0});
    EXPECT_NEAR(r.dist, brute, 1e-8);
    EXPECT_NEAR(std::abs(r.t), 0.611808, 1e-5);
}

TEST(ParamCurve, ExtraPointsCompete)
{
    ParamCurve pc;
    pc.map = [](double t) { return Point{t, 0.0}; };
    pc.t_min = -1.0;
    pc.t_max = 1.0;
    pc.grid_step = 1e-2;
    pc.extra_points = {{0.0, 0.1}};
    CurveProjector proj(pc);
    CurveProjection r = proj({0.0, 0.12});
    EXPECT_TRUE(r.from_extra);
    EXPECT_NEAR(r.dist, 0.02, 1e-12);
}

TEST(WarmLocalProject, StationaryStartStays)
{
    CurveProjector proj(spiral_curve());
    const Point q = spiral_point(3.0);
    auto [p, t] = warm_local_project(proj, q, 3.0);
    EXPECT_NEAR(t, 3.0, 1e-9);
    EXPECT_LE(distance(p, q), 1e-9);
}

TEST(WarmLocalProject, AgreesWithGlobalOnSpiralStep)
{
    CurveProjector proj(spiral_curve());
    for (double t0 : {1.0, 2.0, 4.0}) {
        const Point q = mantle_point(t0);
        CurveProjection global = proj(q);
        auto [p, t] = warm_local_project(proj, q, t0);
        EXPECT_NEAR(t, global.t, 1e-6);
        EXPECT_LE(distance(p, q), distance(proj.curve().map(t0), q) + 1e-12);
    }
}

TEST(WarmLocalProject, UnimodalProfileFindsGlobalMin)
{
    ParamCurve line;
    line.map = [](double t) { return Point{t, 0.0}; };
    line.t_min = -50.0;
    line.t_max = 50.0;
    line.grid_step = 0.05;
    CurveProjector proj(line);
    auto [p, t] = warm_local_project(proj, {7.25, 3.0}, -20.0);
    // golden section resolves the argmin to ~sqrt(eps * f*) when the
    // minimal distance is large; 3 units off the line gives ~5e-8
    EXPECT_NEAR(t, 7.25, 5e-7);
    EXPECT_NEAR(p[0], 7.25, 5e-7);
}

// ---------------- spiral / double spiral sets ----------------

TEST(SpiralSet, ProjectionBracketAtSmallT)
{
    // P_A(b(t)) = a(tau) with t < tau < t - 2 ln(1 - e^{-t/2})
    SetDescriptor spiral = make_spiral_set();
    for (double t : {1.0, 2.0}) {
        ProjectionResult r = spiral.project(mantle_point(t));
        const Point& p = r.points.front();
        // recover tau from the height coordinate
        const double tau = -2.0 * std::log(p[2]);
        EXPECT_GT(tau, t);
        EXPECT_LT(tau, t - 2.0 * std::log(1.0 - std::exp(-t / 2.0)));
    }
}

TEST(SpiralSet, CircleMembersAreFixed)
{
    SetDescriptor spiral = make_spiral_set();
    for (double t : {0.3, 2.0, 5.5}) {
        const Point f = {std::cos(t), std::sin(t), 0.0};
        ProjectionResult r = spiral.project(f);
        EXPECT_LE(r.distance, 1e-12);
        EXPECT_LE(distance(r.points.front(), f), 1e-12);
    }
}

TEST(SpiralSet, CircleWinsNearTheBase)
{
    SetDescriptor spiral = make_spiral_set();
    // point just below the base circle: F is closest
    ProjectionResult r = spiral.project({0.9, 0.0, -0.05});
    EXPECT_LE(distance(r.points.front(), {1.0, 0.0, 0.0}), 1e-9);
}

TEST(DoubleSpiralSet, ProjectsMantlePointsToInnerSpiral)
{
    SetDescriptor ds = make_double_spiral_set();
    for (double t : {1.0, 2.0, 3.0}) {
        ProjectionResult r = ds.project(mantle_point(t));
        const Point& p = r.points.front();
        const double rho = std::hypot(p[0], p[1]);
        EXPECT_LT(rho, 1.0);   // inner branch
        const double tau = -2.0 * std::log(p[2]);
        EXPECT_GT(tau, t);
        // and the projected point is a genuine inner-spiral point
        EXPECT_LE(distance(p, inner_spiral_point(tau)), 1e-8);
    }
}

TEST(DoubleSpiralSet, BothBranchesAreFixedPoints)
{
    SetDescriptor ds = make_double_spiral_set();
    for (double t : {0.8, 2.5}) {
        EXPECT_LE(ds.project(spiral_point(t)).distance, 1e-10);
        EXPECT_LE(ds.project(inner_spiral_point(t)).distance, 1e-10);
    }
}
