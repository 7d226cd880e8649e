#pragma once

#include <cstdint>
#include <vector>

#include "srb/linalg.hpp"
#include "srb/maps.hpp"

namespace srb {

// Steps recorded before any statistic: the tangent recursions reach machine
// precision well before this for the built-in maps.
inline constexpr long kDefaultBurnIn = 200;

// Orthonormal basis of the (candidate) unstable subspace plus the triangular
// factor produced by the most recent renormalization step.
struct TangentFrame {
    Mat q;      // n x m, orthonormal columns
    Mat r_last; // m x m, upper triangular, positive diagonal
    long step = 0;
};

// Random orthonormal frame from a counter-based generator; same seed gives a
// bit-identical frame. Retries with an incremented seed (at most 8 times) in
// the measure-zero event of a degenerate draw.
TangentFrame init_frame(int n, int m, std::uint64_t seed);

// One renormalized tangent step: QR of jac * q. Throws DegenerateBasis when
// the propagated basis collapses (m above the true unstable dimension, or a
// tangency).
TangentFrame step_frame(const TangentFrame& frame, const Mat& jac);

struct LESpectrum {
    std::vector<double> exponents; // nats per iteration, sorted descending
    long trajectory_length = 0;
    long burn_in = 0;
};

// Lyapunov exponents from the running log-sum of the renormalization
// diagonals over t post-burn-in steps.
LESpectrum benettin_le(const MapSystem& map, const Point& x0, int count_m, long t, long burn_in,
                       std::uint64_t seed);

// Number of exponents above gap_tol. Throws AmbiguousSpectrum if any exponent
// lies within gap_tol of zero (trajectory too short, or not hyperbolic).
int detect_unstable_dim(const LESpectrum& spectrum, double gap_tol = 0.05);

} // namespace srb
