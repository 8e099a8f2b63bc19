// Alternating projections between the x-axis and the epigraph of
// 1 + x^2/2: the iterates realize the gap ((0,0), (0,1), r* = 1) at an
// asymptotically linear rate.
#include <cstdio>

#include <projlab/projlab.hpp>

int main()
{
    using namespace projlab;

    SetDescriptor axis = make_affine_set({0.0, 0.0}, {{1.0, 0.0}}, "x-axis");
    SetDescriptor bowl = make_epigraph_set(1.0, 1.0);

    Trace trace = run_alternating(axis, bowl, {1.0, 0.0});
    const Gap gap = estimate_gap(trace, 0.25, 0.1);
    const RateFit rate = fit_rate(trace.b_points(), 0.2);
    const AngleFit angle = fit_angle_exponent(trace, gap);

    std::printf("stopped after %zu blocks (%s)\n", trace.records.size(),
                stop_reason_name(trace.stop_reason));
    std::printf("gap r* = %.12f, a* ~ (%g, %g), b* ~ (%g, %g)\n", gap.r_star,
                trace.back().a[0], trace.back().a[1], trace.back().b[0], trace.back().b[1]);
    std::printf("rate: %s q = %.4f (r^2 = %.6f)\n", rate_kind_name(rate.kind), rate.q,
                rate.r_squared);
    std::printf("angle fit: omega = %.4f, theta = %.4f, gamma = %.4f\n", angle.omega,
                angle.theta, angle.gamma);
    return 0;
}
