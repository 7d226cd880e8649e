#include "srb/curvature.hpp"

#include <cmath>

#include "srb/parallel.hpp"
#include "srb/rng.hpp"

namespace srb {

CurvatureState rescale_curvature(const CurvatureState& a_raw, const Mat& r_inv) {
    const int m = a_raw.order(), n = a_raw.dim();
    CurvatureState out(n, m);
    out.step = a_raw.step;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            Vec acc(n);
            // r_inv is upper triangular: r_inv(p,i) = 0 for p > i
            for (int p = 0; p <= i; ++p)
                for (int q = 0; q <= j; ++q) {
                    const double w = r_inv(p, i) * r_inv(q, j);
                    if (w == 0.0) continue;
                    acc += w * a_raw.at(p, q);
                }
            out.at(i, j) = acc;
        }
    return out;
}

Vec eval_g(const Mat& q_next, const CurvatureState& a_next) {
    const int m = a_next.order();
    Vec g(m);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += q_next.col(j).dot(a_next.at(i, j));
        g[i] = 0.0 - s; // avoids -0.0 for the flat-chart case
    }
    return g;
}

double step_gradient_1d_straight(double g, double d1, double d2) {
    if (std::fabs(d1) < 1e-300) throw ZeroDerivative("step_gradient_1d_straight: d1 is zero");
    return g / d1 - d2 / (d1 * d1);
}

DensityGradientRun::DensityGradientRun(const MapSystem& map, Point x0, int m, std::uint64_t seed)
    : map_(&map),
      x_(map.reduce(std::move(x0))),
      frame_(init_frame(map.dim(), m, seed)),
      a_(map.dim(), m), // a_0 = 0: bounded, and exact for linear maps
      g_(m) {}

void DensityGradientRun::advance() {
    const long k = frame_.step;
    const Mat jac = map_->jacobian(x_);
    const Mat q_k = frame_.q; // basis at step k, needed for the curvature update

    Mat r_inv;
    try {
        frame_ = step_frame(frame_, jac);
        r_inv = invert_upper_triangular(frame_.r_last);
    } catch (const DegenerateBasis& e) {
        throw DegenerateBasis(e.what(), k);
    } catch (const SingularR& e) {
        throw SingularR(e.what(), k);
    }

    CurvatureState raw = step_curvature_raw(
        a_, q_k, jac, [&](const Vec& u, const Vec& v) { return map_->hessian_bilinear(x_, u, v); });
    a_ = rescale_curvature(raw, r_inv);

    // orientation canonicalization: make the dominant entry of each basis
    // column positive and propagate the flips to the curvature family
    // (a^(i,j) -> sigma_i sigma_j a^(i,j)), so g does not depend on the
    // frame seed
    const int m = frame_.q.cols(), n = frame_.q.rows();
    std::array<double, kMaxDim> sigma;
    for (int j = 0; j < m; ++j) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = std::fabs(frame_.q(i, j));
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        sigma[j] = frame_.q(arg, j) < 0.0 ? -1.0 : 1.0;
        if (sigma[j] < 0.0)
            for (int i = 0; i < n; ++i) frame_.q(i, j) = -frame_.q(i, j);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j)
            if (sigma[i] * sigma[j] < 0.0) a_.at(i, j) *= -1.0;

    g_ = eval_g(frame_.q, a_);
    x_ = map_->apply(x_);
    if (!g_.finite() || !x_.coords.finite())
        throw NonFiniteState("density gradient run: non-finite state", frame_.step);
}

std::vector<std::pair<long, double>> convergence_diagnostic(const MapSystem& map, const Point& x0,
                                                            int m, long n_steps,
                                                            std::uint64_t seed1,
                                                            std::uint64_t seed2) {
    DensityGradientRun run1(map, x0, m, seed1);
    DensityGradientRun run2(map, x0, m, seed2);
    std::vector<std::pair<long, double>> series;
    series.reserve(n_steps + 1);
    auto diff_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            const double d = run1.gradient()[i] - run2.gradient()[i];
            s += d * d;
        }
        return std::sqrt(s);
    };
    series.emplace_back(0, diff_norm()); // k = 0: both gradients are zero by a_0 = 0
    for (long k = 1; k <= n_steps; ++k) {
        run1.advance();
        run2.advance();
        series.emplace_back(k, diff_norm());
    }
    return series;
}

void GradientSeries1D::merge(const GradientSeries1D& other) {
    if (other.bins != bins) throw DimensionMismatch("GradientSeries1D::merge: bin counts differ");
    for (int k = 0; k < bins; ++k) {
        sums[k] += other.sums[k];
        counts[k] += other.counts[k];
    }
    skipped += other.skipped;
}

GradientSeries1D binned_gradient_1d(const MapSystem& map1d, double x0, long n_steps, int k_bins,
                                    long burn_in) {
    if (map1d.dim() != 1) throw DimensionMismatch("binned_gradient_1d: map must be 1D");
    if (k_bins < 2) throw Error("binned_gradient_1d: need k_bins >= 2");

    GradientSeries1D series(k_bins);
    Point x{Vec(1)};
    x[0] = x0;
    x = map1d.reduce(x);
    double g = 0.0;

    for (long k = 0; k < burn_in + n_steps; ++k) {
        bool ok = true;
        try {
            const double d1 = map1d.jacobian(x)(0, 0);
            Vec e(1);
            e[0] = 1.0;
            const double d2 = map1d.hessian_bilinear(x, e, e)[0];
            g = step_gradient_1d_straight(g, d1, d2);
        } catch (const DerivativeSingularity&) {
            // skip the update; the recursion forgets the stale g exponentially
            ok = false;
        }
        x = map1d.apply(x);
        if (k < burn_in) continue;
        if (ok && std::isfinite(g)) {
            const int b = series.bin_of(x[0]);
            series.sums[b] += g;
            series.counts[b] += 1;
        } else {
            series.skipped += 1;
        }
    }
    return series;
}

GradientSeries1D binned_gradient_1d_ensemble(const MapSystem& map1d, long n_steps, int k_bins,
                                             long burn_in, std::uint64_t seed, int workers,
                                             long segment_target) {
    const long n_segments = std::max<long>(8, (n_steps + segment_target - 1) / segment_target);
    const long per = n_steps / n_segments, extra = n_steps % n_segments;
    auto parts = parallel_tasks<GradientSeries1D>(
        workers, static_cast<int>(n_segments), [&](int s) {
            CounterRng rng(seed, /*stream=*/2000 + static_cast<std::uint64_t>(s));
            return binned_gradient_1d(map1d, rng.next_unit(), per + (s < extra ? 1 : 0), k_bins,
                                      burn_in);
        });
    GradientSeries1D out(k_bins);
    for (const auto& p : parts) out.merge(p);
    return out;
}

} // namespace srb
