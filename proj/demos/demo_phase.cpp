// Gerchberg-Saxton error reduction with a support prior on a 4-pixel signal.
#include <cstdio>

#include <projlab/projlab.hpp>

int main()
{
    using namespace projlab;

    // magnitudes of a signal supported on {0, 1}
    Signal truth = Signal::of({0.8, 0.3, -0.5, 0.9, 0.0, 0.0, 0.0, 0.0});
    Signal spectrum = dft(truth);
    MagnitudeSpec m;
    for (int w = 0; w < truth.N; ++w)
        m.m.push_back(std::hypot(spectrum.values[std::size_t(2 * w)],
                                 spectrum.values[std::size_t(2 * w + 1)]));

    PriorSpec prior;
    prior.kind = PriorSpec::Kind::support;
    prior.support = {0, 1};

    Signal x0 = Signal::of({1.0, 0.0, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0});
    GSRun run = gs_run(m, prior, x0);

    std::printf("guess better than zero: %s (dist %.6f vs |m| = %.6f)\n",
                run.guess_better_than_zero ? "yes" : "no", run.start_dist, m.norm_m());
    std::printf("stopped after %zu blocks (%s), final residual r = %.3e\n",
                run.trace.records.size(), stop_reason_name(run.trace.stop_reason),
                run.trace.back().r);
    const Point& x = run.trace.back().a;
    std::printf("recovered prior iterate: (%.4f%+.4fi, %.4f%+.4fi, ...)\n", x[0], x[1], x[2],
                x[3]);
    return 0;
}
