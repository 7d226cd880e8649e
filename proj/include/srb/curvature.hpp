#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "srb/maps.hpp"
#include "srb/tangent.hpp"

namespace srb {

// Symmetric family a^(i,j), 1 <= j <= i <= m, of n-vectors: the second
// parametric derivatives of the manifold chart in the renormalized
// coordinates. Only m(m+1)/2 vectors are stored; the (i,j) accessor with
// i < j returns the (j,i) entry, so symmetry holds identically.
class CurvatureState {
public:
    CurvatureState() = default;
    CurvatureState(int n, int m) : n_(n), m_(m) {
        for (int k = 0; k < m * (m + 1) / 2; ++k) a_[k] = Vec(n);
    }

    int dim() const { return n_; }
    int order() const { return m_; }

    const Vec& at(int i, int j) const { return a_[tri(i, j)]; }
    Vec& at(int i, int j) { return a_[tri(i, j)]; }

    bool finite() const {
        for (int k = 0; k < m_ * (m_ + 1) / 2; ++k)
            if (!a_[k].finite()) return false;
        return true;
    }

    long step = 0;

private:
    static int tri(int i, int j) {
        if (i < j) std::swap(i, j);
        return i * (i + 1) / 2 + j;
    }

    std::array<Vec, kMaxDim*(kMaxDim + 1) / 2> a_{};
    int n_ = 0, m_ = 0;
};

struct GradientSample {
    long step = 0;
    Point point;
    Vec g; // m entries, units 1/arc-length per unstable direction
};

// Unscaled curvature update: a~^(i,j) = hess(q^(:i), q^(:j)) + jac * a^(i,j).
// `hess` is the map's bilinear Hessian action at the current point.
template <typename Hess>
CurvatureState step_curvature_raw(const CurvatureState& a, const Mat& q, const Mat& jac,
                                  Hess&& hess) {
    const int m = a.order();
    CurvatureState out(a.dim(), m);
    out.step = a.step + 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            Vec v = hess(q.col(i), q.col(j)) + jac * a.at(i, j);
            if (!v.finite()) throw NonFiniteState("step_curvature_raw: non-finite entry", a.step);
            out.at(i, j) = v;
        }
    return out;
}

// Re-parameterization of the curvature family after renormalization:
// a^(i,j) = sum_{p,q} a~^(p,q) r_inv^(p,i) r_inv^(q,j).
CurvatureState rescale_curvature(const CurvatureState& a_raw, const Mat& r_inv);

// g^(i) = - sum_j q^(:j) . a^(i,j)
Vec eval_g(const Mat& q_next, const CurvatureState& a_next);

// Scalar recursion for maps whose unstable manifolds are straight and aligned
// with the first coordinate: g <- g/d1 - d2/d1^2, where d1, d2 are the first
// and second phase-space derivatives of the map's first component.
double step_gradient_1d_straight(double g, double d1, double d2);

// One trajectory's coupled primal state, tangent frame, and curvature family.
// After each step the basis columns are sign-canonicalized (largest-magnitude
// entry positive, with matching sign flips on the curvature family), so the
// emitted gradient is independent of the random frame initialization.
class DensityGradientRun {
public:
    DensityGradientRun(const MapSystem& map, Point x0, int m, std::uint64_t seed);

    void advance(); // one full step; errors carry the step index

    long step() const { return frame_.step; }
    const Point& point() const { return x_; }
    const Mat& basis() const { return frame_.q; }
    const CurvatureState& curvature() const { return a_; }
    const Vec& gradient() const { return g_; }

    GradientSample sample() const { return {frame_.step, x_, g_}; }

private:
    const MapSystem* map_;
    Point x_;
    TangentFrame frame_;
    CurvatureState a_;
    Vec g_;
};

// Runs the recursion for burn_in + n_steps steps and hands every post-burn-in
// sample to `sink(const GradientSample&)`.
template <typename Sink>
void run_density_gradient(const MapSystem& map, const Point& x0, int m, long n_steps, long burn_in,
                          std::uint64_t seed, Sink&& sink) {
    DensityGradientRun run(map, x0, m, seed);
    for (long k = 0; k < burn_in; ++k) run.advance();
    for (long k = 0; k < n_steps; ++k) {
        run.advance();
        sink(run.sample());
    }
}

// Two runs with different frame seeds on a shared primal trajectory; emits
// (k, ||g_k1 - g_k2||) from k = 0, the transient being the object of study.
std::vector<std::pair<long, double>> convergence_diagnostic(const MapSystem& map, const Point& x0,
                                                            int m, long n_steps,
                                                            std::uint64_t seed1,
                                                            std::uint64_t seed2);

// Per-bin accumulator for the 1D gradient estimator over [0,1): equal-width
// half-open bins, the last bin closed.
struct GradientSeries1D {
    int bins = 0;
    std::vector<double> sums;
    std::vector<long> counts;
    long skipped = 0; // samples dropped at derivative singularities

    explicit GradientSeries1D(int k_bins = 0)
        : bins(k_bins), sums(k_bins, 0.0), counts(k_bins, 0) {}

    double center(int k) const { return (k + 0.5) / bins; }
    double average(int k) const { return sums[k] / static_cast<double>(counts[k]); }
    int bin_of(double x) const {
        int b = static_cast<int>(x * bins);
        return b < 0 ? 0 : (b >= bins ? bins - 1 : b);
    }
    void merge(const GradientSeries1D& other);
};

// Joint iteration of a two-to-one 1D map and the scalar gradient recursion;
// accumulates g into the bin containing the current point. Singular samples
// (e.g. the onion map near x = 0.5) are skipped and counted.
GradientSeries1D binned_gradient_1d(const MapSystem& map1d, double x0, long n_steps, int k_bins,
                                    long burn_in);

// Ensemble version: n_steps split across segments with independent random
// starting points (streams of `seed`), merged in segment order. The segment
// count does not depend on the worker count.
GradientSeries1D binned_gradient_1d_ensemble(const MapSystem& map1d, long n_steps, int k_bins,
                                             long burn_in, std::uint64_t seed, int workers,
                                             long segment_target = 10'000'000);

} // namespace srb
