#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srb/curvature.hpp"
#include "srb/maps.hpp"

namespace srb {

// Binned trajectory-visit grid over the map domain (empirical invariant
// density). Row-major indexing, dimension 0 slowest.
class EmpiricalDensity {
public:
    EmpiricalDensity() = default; // empty grid, filled by assignment
    EmpiricalDensity(std::vector<int> bins, std::vector<Interval> domain);

    int dims() const { return static_cast<int>(bins_.size()); }
    int bins(int d) const { return bins_[d]; }
    const Interval& domain(int d) const { return domain_[d]; }
    double bin_width(int d) const { return domain_[d].length() / bins_[d]; }
    std::uint64_t total() const { return total_; }

    void add(const Point& x);
    std::uint64_t count(const std::vector<int>& idx) const { return counts_[flat(idx)]; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    // counts / (total * bin volume); integrates to 1 over the domain
    double density(const std::vector<int>& idx) const;

    void merge(const EmpiricalDensity& other);

private:
    std::size_t flat(const std::vector<int>& idx) const;

    std::vector<int> bins_;
    std::vector<Interval> domain_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

EmpiricalDensity histogram_srb(const MapSystem& map, const Point& x0, long n_steps,
                               const std::vector<int>& bins, long burn_in);

// Ensemble version: splits n_steps across segments with independent random
// initial points (streams of `seed`), accumulating into per-worker grids that
// are merged in segment order, so the result is scheduling-independent.
EmpiricalDensity histogram_srb_ensemble(const MapSystem& map, long n_steps,
                                        const std::vector<int>& bins, long burn_in,
                                        std::uint64_t seed, int workers,
                                        long segment_target = 10'000'000);

// Central finite-difference estimate of the gradient of the log conditional
// density along dimension 0 at row `row_index` (the dimension-1 bin) of a 2D
// grid: g_fd = (c_{i+s} - c_{i-s}) / (2 s dx c_i), evaluated on interior bins
// with nonzero counts in the whole stencil. `stride` s widens the FD step to
// trade resolution against counting noise. Returns (bin_center, g_fd) pairs.
std::vector<std::pair<double, double>> conditional_fd_g(const EmpiricalDensity& density,
                                                        int row_index, int stride = 1);

// Smooth scalar observable with its analytic gradient. `validated()` checks
// the gradient against central finite differences at random interior points.
struct Observable {
    std::string name;
    std::function<double(const Point&)> eval;
    std::function<Vec(const Point&)> gradient;
};

// registered by name: "sin_exp_2d", "sin_sin_lin_3d", "const_one"
Observable make_observable(const std::string& name);
std::vector<std::string> registered_observable_names();
// throws Error if the analytic gradient disagrees with finite differences
void validate_observable(const Observable& v, const MapSystem& map, std::uint64_t seed = 12345);

// Single-pass mean/variance accumulator (Welford update; merges use the
// standard parallel combination).
struct MCEstimate {
    double value = 0.0;        // running mean
    long n_samples = 0;
    double running_variance = 0.0; // sample variance of the integrand

    void add(double x);
    void merge(const MCEstimate& other);
    // rescales the estimate as if every sample had been multiplied by c
    void scale(double c);
    double std_error() const;

private:
    double m2_ = 0.0;
};

// Trajectory average of a plain point function.
MCEstimate ergodic_average(const MapSystem& map, std::uint64_t seed, long n_steps, long burn_in,
                           const std::function<double(const Point&)>& f);

// Trajectory average of an integrand that may read the co-running tangent
// frame and gradient sample.
MCEstimate ergodic_average_g(
    const MapSystem& map, int m, std::uint64_t seed, long n_steps, long burn_in,
    const std::function<double(const Point&, const Mat& q, const Vec& g)>& f);

struct McIntegralPair {
    MCEstimate lhs;      // volume-scaled estimate of integral of sum_j grad v . q^(:j)
    MCEstimate rhs;      // volume-scaled estimate of integral of -sum_j g^(j) v
    double g_l2_norm;    // sqrt of the plain trajectory average of |g|^2
};

// Both sides of the unstable-manifold integration-by-parts identity over one
// trajectory with the gradient recursion co-running. Estimates (value and
// std_error) are scaled by the domain volume, matching the volume-element
// convention of the reported reference integrals; g_l2_norm is unscaled.
McIntegralPair mc_integrate_pair(const MapSystem& map, const Observable& v, int m, long n_steps,
                                 long burn_in, std::uint64_t seed);

// max over the post-burn-in trajectory of arctan |q^(2)/q^(1)| for a 2D map
// with a one-dimensional unstable direction.
double q_angle_stat(const MapSystem& map, long n_steps, long burn_in = kDefaultBurnIn,
                    std::uint64_t seed = 1);

} // namespace srb
