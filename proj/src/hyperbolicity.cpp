#include "srb/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>

#include "srb/parallel.hpp"
#include "srb/tangent.hpp"

namespace srb {

namespace {

constexpr int kPdfBins = 100;

struct RawAngles {
    std::vector<std::uint64_t> hist = std::vector<std::uint64_t>(kPdfBins, 0);
    std::vector<double> samples;
    double min_d = 1.0;
    std::vector<double> le_sums;
    long le_steps = 0;
};

AngleSeries finalize(const RawAngles& raw, int mu) {
    AngleSeries out;
    out.samples = raw.samples;
    out.min_d = raw.min_d;
    std::uint64_t total = 0;
    for (auto c : raw.hist) total += c;
    out.pdf.resize(kPdfBins, 0.0);
    const double bin_w = 1.0 / kPdfBins;
    if (total > 0)
        for (int b = 0; b < kPdfBins; ++b)
            out.pdf[b] = static_cast<double>(raw.hist[b]) / (static_cast<double>(total) * bin_w);
    out.le_spectrum.resize(mu, 0.0);
    if (raw.le_steps > 0)
        for (int i = 0; i < mu; ++i)
            out.le_spectrum[i] = raw.le_sums[i] / static_cast<double>(raw.le_steps);
    std::sort(out.le_spectrum.begin(), out.le_spectrum.end(), std::greater<double>());
    return out;
}

RawAngles probe(const MapSystem& map, const Point& x0, int mu, long n_steps, long burn_in,
                std::uint64_t seed, bool keep_samples) {
    const int n = map.dim();
    const int ms = n - mu;
    if (mu < 1 || ms < 1) throw DimensionMismatch("stable_unstable_angles: need 1 <= mu < n");

    TangentFrame unstable = init_frame(n, mu, seed);
    TangentFrame counterpart = init_frame(n, ms, seed ^ 0x9E3779B97F4A7C15ULL);
    Point x = map.reduce(x0);

    RawAngles raw;
    raw.le_sums.assign(mu, 0.0);
    if (keep_samples) raw.samples.reserve(n_steps);

    for (long k = 0; k < burn_in + n_steps; ++k) {
        const Mat jac = map.jacobian(x);

        // adjoint-inverse step: solve Dphi^T y = s for each basis column
        QRPair jt;
        try {
            jt = qr_householder(transpose(jac));
        } catch (const DegenerateBasis& e) {
            throw SingularJacobian(e.what(), k);
        }
        double log_det = 0.0;
        for (int i = 0; i < n; ++i) log_det += std::log(jt.r(i, i));
        if (log_det < -690.0) // |det| < ~1e-300
            throw SingularJacobian("stable_unstable_angles: singular Jacobian", k);
        // Dphi^T = Q R  =>  Dphi^{-T} = R^{-1} Q^T
        const Mat jinv_t = invert_upper_triangular(jt.r) * transpose(jt.q);

        try {
            unstable = step_frame(unstable, jac);
            counterpart = step_frame(counterpart, jinv_t);
        } catch (const DegenerateBasis& e) {
            throw DegenerateBasis(e.what(), k);
        }
        x = map.apply(x);

        if (k >= burn_in) {
            const double d = principal_angle_measure(unstable.q, counterpart.q);
            raw.min_d = std::min(raw.min_d, d);
            int b = static_cast<int>(d * kPdfBins);
            if (b >= kPdfBins) b = kPdfBins - 1;
            if (b < 0) b = 0;
            ++raw.hist[b];
            if (keep_samples) raw.samples.push_back(d);
            for (int i = 0; i < mu; ++i) raw.le_sums[i] += std::log(unstable.r_last(i, i));
            ++raw.le_steps;
        }
    }
    return raw;
}

} // namespace

double AngleSeries::fraction_below(double threshold) const {
    // exact when threshold is a multiple of the bin width; counts come from
    // the histogram so ensemble runs need not keep raw samples
    const int cut = static_cast<int>(std::round(threshold * kPdfBins));
    double mass = 0.0;
    for (int b = 0; b < cut && b < kPdfBins; ++b) mass += pdf[b];
    return mass / kPdfBins;
}

AngleSeries stable_unstable_angles(const MapSystem& map, const Point& x0, int mu, long n_steps,
                                   long burn_in, std::uint64_t seed) {
    return finalize(probe(map, x0, mu, n_steps, burn_in, seed, /*keep_samples=*/true), mu);
}

AngleSeries stable_unstable_angles_ensemble(const MapSystem& map, int mu, long n_steps,
                                            long burn_in, std::uint64_t seed, int workers,
                                            bool keep_samples) {
    // segment count independent of the worker count, so merges are
    // reproducible for a given seed
    const long segment_target = 1'000'000;
    const long n_segments = std::max<long>(8, (n_steps + segment_target - 1) / segment_target);
    const long per = n_steps / n_segments, extra = n_steps % n_segments;

    auto run_segment = [&](int s) {
        CounterRng rng(seed, /*stream=*/4000 + static_cast<std::uint64_t>(s));
        const Point x0 = map.random_point(rng);
        return probe(map, x0, mu, per + (s < extra ? 1 : 0), burn_in,
                     seed + static_cast<std::uint64_t>(s), keep_samples);
    };
    std::vector<RawAngles> parts =
        parallel_tasks<RawAngles>(workers, static_cast<int>(n_segments), run_segment);

    RawAngles total;
    total.le_sums.assign(mu, 0.0);
    for (const auto& p : parts) {
        for (int b = 0; b < kPdfBins; ++b) total.hist[b] += p.hist[b];
        total.min_d = std::min(total.min_d, p.min_d);
        for (int i = 0; i < mu; ++i) total.le_sums[i] += p.le_sums[i];
        total.le_steps += p.le_steps;
        if (keep_samples)
            total.samples.insert(total.samples.end(), p.samples.begin(), p.samples.end());
    }
    return finalize(total, mu);
}

} // namespace srb
