#pragma once

#include <cstdint>
#include <vector>

#include "srb/maps.hpp"

namespace srb {

// Distribution of the angle measure d between the propagated unstable and
// stable-complement bases along a trajectory.
struct AngleSeries {
    std::vector<double> samples;     // d per post-burn-in step, each in [0,1]
    std::vector<double> pdf;         // 100-bin PDF over [0,1]; integrates to 1
    double min_d = 1.0;
    std::vector<double> le_spectrum; // by-product of the unstable forward pass

    double fraction_below(double threshold) const;
};

// One-pass probe of the separation between the unstable subspace and its
// complement: the unstable basis comes from forward QR iteration of the
// Jacobian with mu columns; the counterpart basis from forward QR iteration
// of the inverse-transpose Jacobian (solved against Dphi^T via QR) with
// n - mu columns on the same orbit. d = principal_angle_measure of the two
// bases per post-burn-in step. Throws SingularJacobian if |det Dphi| ~ 0 at
// a visited point.
AngleSeries stable_unstable_angles(const MapSystem& map, const Point& x0, int mu, long n_steps,
                                   long burn_in, std::uint64_t seed);

// Ensemble version: several orbits with independent initial points, merged
// deterministically in segment order.
AngleSeries stable_unstable_angles_ensemble(const MapSystem& map, int mu, long n_steps,
                                            long burn_in, std::uint64_t seed, int workers,
                                            bool keep_samples = false);

} // namespace srb
