#include <gtest/gtest.h>

#include <projlab/engine.hpp>

using namespace projlab;

namespace {

SetDescriptor x_axis() { return make_affine_set({0, 0}, {{1, 0}}, "x-axis"); }

SetDescriptor tilted_line(double angle)
{
    return make_affine_set({0, 0}, {{std::cos(angle), std::sin(angle)}}, "tilted");
}

} // namespace

TEST(Alternating, ParabolaGapRealized)
{
    Trace t = run_alternating(x_axis(), make_epigraph_set(1.0, 1.0), {1.0, 0.0});
    EXPECT_EQ(t.stop_reason, StopReason::stationary);
    // r_k decreases to 1, a_k -> (0,0), b_k -> (0,1)
    EXPECT_NEAR(t.back().r, 1.0, 1e-9);
    EXPECT_NEAR(t.back().a[0], 0.0, 1e-9);
    EXPECT_NEAR(t.back().a[1], 0.0, 1e-12);
    EXPECT_NEAR(t.back().b[0], 0.0, 1e-9);
    EXPECT_NEAR(t.back().b[1], 1.0, 1e-9);
    for (std::size_t i = 1; i < t.records.size(); ++i)
        EXPECT_LE(t.records[i].r, t.records[i - 1].r + 1e-12);
}

TEST(Alternating, FixedPointGivesOneRecord)
{
    // start in the intersection of the two lines
    Trace t = run_alternating(x_axis(), tilted_line(0.5), {0.0, 0.0});
    EXPECT_EQ(t.stop_reason, StopReason::stationary);
    EXPECT_EQ(t.records.size(), 1u);
    EXPECT_NEAR(t.records[0].r, 0.0, 1e-15);
}

TEST(Alternating, MonotoneChainInvariant)
{
    // |b_k - a_{k+1}| <= |a_k - b_k| <= |b_{k-1} - a_k| within slack
    Trace t = run_alternating(x_axis(), make_epigraph_set(1.0, 1.0), {2.0, 0.0});
    for (std::size_t i = 1; i < t.records.size(); ++i) {
        const auto& prev = t.records[i - 1];
        const auto& rec = t.records[i];
        const double before = distance(prev.b, rec.a);
        EXPECT_LE(rec.r, before + 1e-12);
        EXPECT_LE(before, prev.r + 1e-12);
    }
}

TEST(Alternating, ConvexPythagorasExactForAffinePairs)
{
    Trace t = run_alternating(x_axis(), tilted_line(M_PI / 6), {1.0, 0.0});
    ASSERT_GE(t.records.size(), 3u);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
        const auto& prev = t.records[i - 1];
        const auto& rec = t.records[i];
        const double lhs = rec.r * rec.r + distance(prev.b, rec.b) * distance(prev.b, rec.b);
        const double rhs = distance(prev.b, rec.a) * distance(prev.b, rec.a);
        EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, rhs));
    }
}

TEST(Alternating, DivergenceDetected)
{
    // B pushes every iterate outward by doubling, A accepts everything:
    // custom sets to exercise the escape guard
    SetDescriptor full;
    full.family = SetFamily::affine;
    full.name = "everything";
    full.dimension = 1;
    full.project = [](const Point& q) { return ProjectionResult::single(q, 0.0); };
    SetDescriptor doubler;
    doubler.family = SetFamily::affine;
    doubler.name = "doubler";
    doubler.dimension = 1;
    doubler.project = [](const Point& q) {
        return ProjectionResult::single({2.0 * q[0] + 1.0}, std::abs(q[0] + 1.0));
    };
    Trace t = run_alternating(full, doubler, {1.0});
    EXPECT_EQ(t.stop_reason, StopReason::diverged);
}

TEST(Alternating, DeterministicReruns)
{
    auto run = [] {
        Tolerances tol;
        tol.max_iter = 200;
        tol.tol_step = 1e-300;
        return run_alternating(make_spiral_set(), make_cylinder_set(), spiral_point(1.0), tol);
    };
    Trace t1 = run();
    Trace t2 = run();
    ASSERT_EQ(t1.records.size(), t2.records.size());
    for (std::size_t i = 0; i < t1.records.size(); ++i) {
        EXPECT_EQ(t1.records[i].a, t2.records[i].a);
        EXPECT_EQ(t1.records[i].b, t2.records[i].b);
        EXPECT_EQ(t1.records[i].r, t2.records[i].r);
    }
}

TEST(LocalAlternating, ConvexCurveMatchesGlobalRun)
{
    // the x-axis as a 1-parameter curve: local projections are ordinary ones
    ParamCurve line;
    line.map = [](double t) { return Point{t, 0.0}; };
    line.t_min = -50.0;
    line.t_max = 50.0;
    line.grid_step = 0.05;
    SetDescriptor curve_axis = make_curve_set(line, "x-axis-curve");
    SetDescriptor bowl = make_epigraph_set(1.0, 1.0);

    Tolerances tol;
    tol.tol_step = 1e-10;
    Trace local = run_local_alternating(curve_axis, bowl, {1.0, 0.0}, 1.0, tol);
    Trace global = run_alternating(x_axis(), bowl, {1.0, 0.0}, tol);
    ASSERT_EQ(local.stop_reason, StopReason::stationary);
    const std::size_t n = std::min(local.records.size(), global.records.size());
    ASSERT_GE(n, 10u);
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_LE(distance(local.records[i].a, global.records[i].a), 1e-7);
        EXPECT_LE(distance(local.records[i].b, global.records[i].b), 1e-7);
        EXPECT_FALSE(local.records[i].local_fallback);
    }
}

TEST(LocalAlternating, SpiralWindsLikeGlobalTrace)
{
    Tolerances tol;
    tol.max_iter = 300;
    tol.tol_step = 1e-300;
    SetDescriptor spiral = make_spiral_set();
    SetDescriptor cyl = make_cylinder_set();
    Trace local = run_local_alternating(spiral, cyl, spiral_point(1.0), 1.0, tol);
    Trace global = run_alternating(spiral, cyl, spiral_point(1.0), tol);
    ASSERT_EQ(local.records.size(), global.records.size());
    for (std::size_t i = 0; i < local.records.size(); i += 50)
        EXPECT_LE(distance(local.records[i].a, global.records[i].a), 1e-6);
}

TEST(LocalAlternating, StationaryStartIsOneRecord)
{
    ParamCurve line;
    line.map = [](double t) { return Point{t, 0.0}; };
    line.t_min = -10.0;
    line.t_max = 10.0;
    line.grid_step = 0.05;
    SetDescriptor curve_axis = make_curve_set(line, "x-axis-curve");
    Trace t = run_local_alternating(curve_axis, x_axis(), {0.5, 0.0}, 0.5);
    EXPECT_EQ(t.records.size(), 1u);
    EXPECT_EQ(t.stop_reason, StopReason::stationary);
}

TEST(ProxBlock, DecreaseCondition)
{
    EXPECT_TRUE(enforce_prox_block({0, 0}, {1, 0}, {2, 0}));
    EXPECT_FALSE(enforce_prox_block({0, 0}, {3, 0}, {2, 0}));
    EXPECT_TRUE(enforce_prox_block({0, 0}, {2, 0}, {2, 0}));
}

TEST(DouglasRachford, FixedPointOnCommonLine)
{
    SetDescriptor line = x_axis();
    DRTrace t = run_douglas_rachford(line, line, {3.0, 0.0});
    EXPECT_EQ(t.stop_reason, StopReason::stationary);
    ASSERT_FALSE(t.x.empty());
    EXPECT_LE(distance(t.x.back(), {3.0, 0.0}), 1e-12);
}

TEST(DouglasRachford, StepIdentity)
{
    // x_{k+1} - x_k = shadow_a_k - shadow_b_k exactly as computed
    Tolerances tol;
    tol.max_iter = 50;
    tol.tol_step = 1e-300;
    DRTrace t = run_douglas_rachford(make_double_spiral_set(), make_cylinder_set(),
                                     inner_spiral_point(1.0), tol);
    ASSERT_GE(t.x.size(), 3u);
    for (std::size_t k = 0; k + 1 < t.x.size(); ++k) {
        const Point lhs = t.x[k + 1] - t.x[k];
        const Point rhs = t.shadow_a[k] - t.shadow_b[k];
        EXPECT_LE(distance(lhs, rhs), 1e-14);
    }
}

TEST(DouglasRachford, TwoPhasePatternOnDoubleSpiral)
{
    Tolerances tol;
    tol.max_iter = 400;
    tol.tol_step = 1e-300;
    DRTrace t = run_douglas_rachford(make_double_spiral_set(), make_cylinder_set(),
                                     inner_spiral_point(1.0), tol);
    SetDescriptor inner = make_curve_set(inner_spiral_curve(), "inner");
    SetDescriptor cyl = make_cylinder_set();
    double prev_t = 0.0;
    for (std::size_t k = 0; k < t.x.size(); ++k) {
        if (k % 2 == 0) {
            EXPECT_LE(inner.membership(t.x[k]), 1e-8) << "k=" << k;
            const double tk = -2.0 * std::log(t.x[k][2]);
            EXPECT_GT(tk, prev_t);
            prev_t = tk;
        } else {
            EXPECT_LE(cyl.membership(t.x[k]), 1e-8) << "k=" << k;
        }
    }
}

TEST(DouglasRachford, ReversedOrderAlternatesMantleAndSpiral)
{
    // (R_B R_A + I)/2 from a_+(t1).  Unlike the forward order, the two-phase
    // pattern here is only approximate: the step B-projection of the
    // reflected point is off the mantle by O((t_{k+1}-t_k)^2), so the
    // iterates start on the outer spiral and drift near the inner branch
    // while still alternating spiral-side / mantle-side.
    Tolerances tol;
    tol.max_iter = 60;
    tol.tol_step = 1e-300;
    DRTrace t = run_douglas_rachford(make_cylinder_set(), make_double_spiral_set(),
                                     spiral_point(1.0), tol);
    SetDescriptor outer = make_curve_set(spiral_curve(), "outer");
    SetDescriptor inner = make_curve_set(inner_spiral_curve(), "inner");
    SetDescriptor cyl = make_cylinder_set();
    for (std::size_t k = 1; k < t.x.size(); ++k) {
        if (k % 2 == 0) {
            const double d =
                std::min(outer.membership(t.x[k]), inner.membership(t.x[k]));
            EXPECT_LE(d, 5e-2) << "k=" << k;
        } else {
            EXPECT_LE(cyl.membership(t.x[k]), 5e-2) << "k=" << k;
        }
    }
    // the first even iterates stay on the outer-spiral side
    for (std::size_t k = 2; k <= 8; k += 2)
        EXPECT_LE(outer.membership(t.x[k]), 5e-2) << "k=" << k;
}

TEST(Averaged, TwoSingletonsRealizeVarianceGap)
{
    SetDescriptor c1 = make_box_product_set({IntervalUnion{{{-1, -1}}}});
    SetDescriptor c2 = make_box_product_set({IntervalUnion{{{1, 1}}}});
    AveragedRun run = run_averaged({c1, c2}, {0.0});
    EXPECT_EQ(run.trace.stop_reason, StopReason::stationary);
    EXPECT_NEAR(run.means().back()[0], 0.0, 1e-14);
    // gap value sum (x_i* - x*)^2 = 2 = m * biased sample variance
    const double r = run.trace.back().r;
    EXPECT_NEAR(r * r, 2.0, 1e-12);
}

TEST(Averaged, IdenticalConvexComponentsGiveProjection)
{
    IntervalUnion seg{{{1.0, 2.0}}};
    SetDescriptor c = make_box_product_set({seg, seg});
    AveragedRun run = run_averaged({c, c, c}, {5.0, 0.5});
    EXPECT_EQ(run.trace.stop_reason, StopReason::stationary);
    const Point mean = run.means().back();
    EXPECT_NEAR(mean[0], 2.0, 1e-10);
    EXPECT_NEAR(mean[1], 1.0, 1e-10);
}

TEST(Averaged, CircleComponentsShareMeanAndVariance)
{
    SetDescriptor a = make_sphere_product_set(MagnitudeSpec{{1.0}});
    SetDescriptor b = translate_set(make_sphere_product_set(MagnitudeSpec{{1.0}}), {2.0, 0.0});
    SetDescriptor c = translate_set(make_sphere_product_set(MagnitudeSpec{{1.0}}), {0.0, 2.0});
    Point x0 = {0.31, -0.22};
    Tolerances tol;
    tol.tol_step = 1e-13;
    AveragedRun run = run_averaged({a, b, c}, x0, tol);
    EXPECT_EQ(run.trace.stop_reason, StopReason::stationary);
    // accumulation projections average back to the mean
    const auto comps = run.components(run.trace.records.size() - 1);
    Point avg(2, 0.0);
    for (const Point& p : comps) avg = avg + p;
    avg = (1.0 / 3.0) * avg;
    EXPECT_LE(distance(avg, run.means().back()), 1e-9);
    // mean step of the final block is tiny (converged)
    EXPECT_LE(run.trace.back().step_b, 1e-10);
}
