// Unitary discrete Fourier transform on interleaved complex vectors.
// Signals are tiny here (N <= a few dozen), so the direct O(N^2) sum is fine.
#pragma once

#include "core.hpp"

namespace projlab {

// Interleaved complex storage: entry t lives at (p[2t], p[2t+1]).
inline int complex_length(const Point& p)
{
    if (p.size() % 2 != 0) throw Error("complex point: odd dimension");
    return int(p.size() / 2);
}

// Forward kernel e^{+2 pi i t w / N} / sqrt(N); inverse conjugates.
// At N = 2 the forward kernel equals e^{+i pi t w} / sqrt(2).
inline Point dft_interleaved(const Point& x, bool inverse = false)
{
    const int n = complex_length(x);
    Point out(x.size(), 0.0);
    const double sign = inverse ? -1.0 : 1.0;
    const double scale = 1.0 / std::sqrt(double(n));
    for (int w = 0; w < n; ++w) {
        double re = 0.0, im = 0.0;
        for (int t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * M_PI * double(t) * double(w) / double(n);
            const double c = std::cos(ang), s = std::sin(ang);
            const double xr = x[2 * t], xi = x[2 * t + 1];
            re += c * xr - s * xi;
            im += c * xi + s * xr;
        }
        out[2 * w] = re * scale;
        out[2 * w + 1] = im * scale;
    }
    return out;
}

} // namespace projlab
