#pragma once

#include <memory>
#include <string>
#include <vector>

#include "srb/linalg.hpp"
#include "srb/rng.hpp"

namespace srb {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

// Phase-space point; coordinates are kept inside the map's periodic domain.
struct Point {
    Vec coords;

    int dim() const { return coords.size(); }
    double operator[](int i) const { return coords[i]; }
    double& operator[](int i) { return coords[i]; }
};

// An evaluatable chaotic map with analytic Jacobian and Hessian bilinear
// action. Derivatives come from the smooth branch of the map: the mod/floor
// terms are locally constant and contribute nothing. Instances are immutable
// after construction and safe to share across threads.
class MapSystem {
public:
    virtual ~MapSystem() = default;

    virtual int dim() const = 0;
    // number of positive Lyapunov exponents when known a priori, 0 otherwise
    virtual int unstable_dim_hint() const { return 0; }
    virtual Interval domain(int axis) const = 0;
    virtual std::string name() const = 0;
    virtual std::vector<double> params() const { return {}; }

    virtual Point apply(const Point& x) const = 0;
    virtual Mat jacobian(const Point& x) const = 0;
    // [D^2 phi (u,v)]^(k) = sum_ij d_i d_j phi^(k) u^(i) v^(j); symmetric in (u,v)
    virtual Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const = 0;

    // wrap coordinates into the periodic domain
    Point reduce(Point x) const;
    Point random_point(CounterRng& rng) const;
    double domain_volume() const;
};

struct Baker2DParams {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
};

struct Baker3DParams {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

// Stretch-and-stack map on [0,2pi]^2 with a 4-parameter sine perturbation;
// one expanding and one contracting direction.
std::unique_ptr<MapSystem> baker2d(const Baker2DParams& p);

// Stretch (x2, x3) and stack map on [0,2pi]^3 with a 3-parameter sine
// perturbation; two expanding directions and one contracting.
std::unique_ptr<MapSystem> baker3d(const Baker3DParams& p);

// x -> [[2,1],[1,1]] x mod 1 on [0,1]^2; constant Jacobian, zero Hessian.
std::unique_ptr<MapSystem> arnold_cat();

// 1D map x -> 2x + s sin(2 pi x) mod 1; monotone branches for |s| < 1/(2 pi).
std::unique_ptr<MapSystem> sawtooth(double s);

// 1D two-to-one map x -> 0.97 sqrt(1 - |1-2x|^gamma) on [0,1], 0 < gamma < 1.
// The derivative is unbounded at x = 0.5 (and at the endpoints); evaluating it
// within 1e-12 of those lines throws DerivativeSingularity.
std::unique_ptr<MapSystem> onion(double gamma);

// Invertible 2D extension of a two-to-one 1D map:
//   (x1, x2) -> (phi(x1), x2/2 + 0.5 * [x1 >= split]).
// Unstable manifolds are straight and horizontal.
std::unique_ptr<MapSystem> embed_1d(std::shared_ptr<const MapSystem> map1d, double split = 0.5);

// name-based registry used by the CLI; throws Error for unknown names or
// wrong parameter arity
std::unique_ptr<MapSystem> make_map(const std::string& name, const std::vector<double>& params);
std::vector<std::string> registered_map_names();

// first derivative of a 1D map (1x1 Jacobian), with singularity checks
double deriv1_1d(const MapSystem& map1d, double x);
// second derivative of a 1D map (Hessian bilinear action on unit vectors)
double deriv2_1d(const MapSystem& map1d, double x);

} // namespace srb
