#include "srb/tangent.hpp"

#include <algorithm>
#include <cmath>

#include "srb/rng.hpp"

namespace srb {

TangentFrame init_frame(int n, int m, std::uint64_t seed) {
    if (m < 1 || m > n) throw DimensionMismatch("init_frame: need 1 <= m <= n");
    for (int attempt = 0; attempt <= 8; ++attempt) {
        CounterRng rng(seed + static_cast<std::uint64_t>(attempt), /*stream=*/0x51);
        Mat a(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = rng.next_normal();
        try {
            QRPair qr = qr_householder(a);
            return TangentFrame{qr.q, Mat::identity(m), 0};
        } catch (const DegenerateBasis&) {
            if (attempt == 8) throw;
        }
    }
    throw DegenerateBasis("init_frame: exhausted retries"); // unreachable
}

TangentFrame step_frame(const TangentFrame& frame, const Mat& jac) {
    QRPair qr = qr_householder(jac * frame.q);
    return TangentFrame{qr.q, qr.r, frame.step + 1};
}

LESpectrum benettin_le(const MapSystem& map, const Point& x0, int count_m, long t, long burn_in,
                       std::uint64_t seed) {
    if (t < 1) throw Error("benettin_le: need t >= 1");
    const int n = map.dim();
    TangentFrame frame = init_frame(n, count_m, seed);
    Point x = map.reduce(x0);

    for (long k = 0; k < burn_in; ++k) {
        frame = step_frame(frame, map.jacobian(x));
        x = map.apply(x);
    }

    std::vector<double> sums(count_m, 0.0);
    for (long k = 0; k < t; ++k) {
        frame = step_frame(frame, map.jacobian(x));
        for (int i = 0; i < count_m; ++i) sums[i] += std::log(frame.r_last(i, i));
        x = map.apply(x);
    }

    LESpectrum spec;
    spec.trajectory_length = t;
    spec.burn_in = burn_in;
    spec.exponents.resize(count_m);
    for (int i = 0; i < count_m; ++i) spec.exponents[i] = sums[i] / static_cast<double>(t);
    std::sort(spec.exponents.begin(), spec.exponents.end(), std::greater<double>());
    return spec;
}

int detect_unstable_dim(const LESpectrum& spectrum, double gap_tol) {
    int count = 0;
    for (double le : spectrum.exponents) {
        if (std::fabs(le) <= gap_tol)
            throw AmbiguousSpectrum("detect_unstable_dim: exponent " + std::to_string(le) +
                                    " within " + std::to_string(gap_tol) + " of zero");
        if (le > gap_tol) ++count;
    }
    return count;
}

} // namespace srb
