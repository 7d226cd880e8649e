#include "srb/maps.hpp"

#include <cmath>

namespace srb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap(double x, double lo, double hi) {
    const double len = hi - lo;
    double y = std::fmod(x - lo, len);
    if (y < 0.0) y += len;
    return y + lo;
}

} // namespace

Point MapSystem::reduce(Point x) const {
    for (int i = 0; i < dim(); ++i) {
        const Interval d = domain(i);
        x[i] = wrap(x[i], d.lo, d.hi);
    }
    return x;
}

Point MapSystem::random_point(CounterRng& rng) const {
    Point p{Vec(dim())};
    for (int i = 0; i < dim(); ++i) {
        const Interval d = domain(i);
        p[i] = rng.uniform(d.lo, d.hi);
    }
    return p;
}

double MapSystem::domain_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= domain(i).length();
    return v;
}

// ---------------------------------------------------------------------------
// 2D perturbed stretch-and-stack map on [0,2pi]^2:
//   y1 = 2 x1            + s1/2 sin(x1/2) + s2/2 sin(2 x1) sin(x2)
//   y2 = x2/2 + pi*floor(x1/pi) + s3 sin(x2) + s4/2 sin(2 x1) sin(x2)
// both mod 2pi; the floor uses the pre-image x1.
// ---------------------------------------------------------------------------
class Baker2D final : public MapSystem {
public:
    explicit Baker2D(const Baker2DParams& p) : p_(p) {}

    int dim() const override { return 2; }
    int unstable_dim_hint() const override { return 1; }
    Interval domain(int) const override { return {0.0, kTwoPi}; }
    std::string name() const override { return "baker2d"; }
    std::vector<double> params() const override { return {p_.s1, p_.s2, p_.s3, p_.s4}; }

    Point apply(const Point& x) const override {
        const double x1 = x[0], x2 = x[1];
        const double y1 = 2.0 * x1 + 0.5 * p_.s1 * std::sin(0.5 * x1) +
                          0.5 * p_.s2 * std::sin(2.0 * x1) * std::sin(x2);
        const double y2 = 0.5 * x2 + M_PI * std::floor(x1 / M_PI) + p_.s3 * std::sin(x2) +
                          0.5 * p_.s4 * std::sin(2.0 * x1) * std::sin(x2);
        Point y{Vec(2)};
        y[0] = wrap(y1, 0.0, kTwoPi);
        y[1] = wrap(y2, 0.0, kTwoPi);
        return y;
    }

    Mat jacobian(const Point& x) const override {
        const double x1 = x[0], x2 = x[1];
        const double s2x1 = std::sin(2.0 * x1), c2x1 = std::cos(2.0 * x1);
        const double sx2 = std::sin(x2), cx2 = std::cos(x2);
        Mat j(2, 2);
        j(0, 0) = 2.0 + 0.25 * p_.s1 * std::cos(0.5 * x1) + p_.s2 * c2x1 * sx2;
        j(0, 1) = 0.5 * p_.s2 * s2x1 * cx2;
        j(1, 0) = p_.s4 * c2x1 * sx2;
        j(1, 1) = 0.5 + p_.s3 * cx2 + 0.5 * p_.s4 * s2x1 * cx2;
        return j;
    }

    Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const override {
        const double x1 = x[0], x2 = x[1];
        const double s2x1 = std::sin(2.0 * x1), c2x1 = std::cos(2.0 * x1);
        const double sx2 = std::sin(x2), cx2 = std::cos(x2);
        // component 1
        const double h1_11 = -0.125 * p_.s1 * std::sin(0.5 * x1) - 2.0 * p_.s2 * s2x1 * sx2;
        const double h1_12 = p_.s2 * c2x1 * cx2;
        const double h1_22 = -0.5 * p_.s2 * s2x1 * sx2;
        // component 2
        const double h2_11 = -2.0 * p_.s4 * s2x1 * sx2;
        const double h2_12 = p_.s4 * c2x1 * cx2;
        const double h2_22 = -p_.s3 * sx2 - 0.5 * p_.s4 * s2x1 * sx2;
        Vec out(2);
        out[0] = h1_11 * u[0] * v[0] + h1_12 * (u[0] * v[1] + u[1] * v[0]) + h1_22 * u[1] * v[1];
        out[1] = h2_11 * u[0] * v[0] + h2_12 * (u[0] * v[1] + u[1] * v[0]) + h2_22 * u[1] * v[1];
        return out;
    }

private:
    Baker2DParams p_;
};

// ---------------------------------------------------------------------------
// 3D stretch-and-stack map on [0,2pi]^3:
//   y1 = 2 x1 + s1 sin(2 x1) sin(3/2 x2)
//   y2 = 3 x2 + s2 sin(x1) sin(3 x2)
//   y3 = x3/6 + pi*floor(x1/pi) + (pi/3)*floor(x2/(2pi/3)) + s3 sin(6 x3)
// all mod 2pi.
// ---------------------------------------------------------------------------
class Baker3D final : public MapSystem {
public:
    explicit Baker3D(const Baker3DParams& p) : p_(p) {}

    int dim() const override { return 3; }
    int unstable_dim_hint() const override { return 2; }
    Interval domain(int) const override { return {0.0, kTwoPi}; }
    std::string name() const override { return "baker3d"; }
    std::vector<double> params() const override { return {p_.s1, p_.s2, p_.s3}; }

    Point apply(const Point& x) const override {
        const double x1 = x[0], x2 = x[1], x3 = x[2];
        const double y1 = 2.0 * x1 + p_.s1 * std::sin(2.0 * x1) * std::sin(1.5 * x2);
        const double y2 = 3.0 * x2 + p_.s2 * std::sin(x1) * std::sin(3.0 * x2);
        const double y3 = x3 / 6.0 + M_PI * std::floor(x1 / M_PI) +
                          (M_PI / 3.0) * std::floor(x2 / (kTwoPi / 3.0)) +
                          p_.s3 * std::sin(6.0 * x3);
        Point y{Vec(3)};
        y[0] = wrap(y1, 0.0, kTwoPi);
        y[1] = wrap(y2, 0.0, kTwoPi);
        y[2] = wrap(y3, 0.0, kTwoPi);
        return y;
    }

    Mat jacobian(const Point& x) const override {
        const double x1 = x[0], x2 = x[1], x3 = x[2];
        Mat j(3, 3);
        j(0, 0) = 2.0 + 2.0 * p_.s1 * std::cos(2.0 * x1) * std::sin(1.5 * x2);
        j(0, 1) = 1.5 * p_.s1 * std::sin(2.0 * x1) * std::cos(1.5 * x2);
        j(1, 0) = p_.s2 * std::cos(x1) * std::sin(3.0 * x2);
        j(1, 1) = 3.0 + 3.0 * p_.s2 * std::sin(x1) * std::cos(3.0 * x2);
        j(2, 2) = 1.0 / 6.0 + 6.0 * p_.s3 * std::cos(6.0 * x3);
        return j;
    }

    Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const override {
        const double x1 = x[0], x2 = x[1], x3 = x[2];
        const double h1_11 = -4.0 * p_.s1 * std::sin(2.0 * x1) * std::sin(1.5 * x2);
        const double h1_12 = 3.0 * p_.s1 * std::cos(2.0 * x1) * std::cos(1.5 * x2);
        const double h1_22 = -2.25 * p_.s1 * std::sin(2.0 * x1) * std::sin(1.5 * x2);
        const double h2_11 = -p_.s2 * std::sin(x1) * std::sin(3.0 * x2);
        const double h2_12 = 3.0 * p_.s2 * std::cos(x1) * std::cos(3.0 * x2);
        const double h2_22 = -9.0 * p_.s2 * std::sin(x1) * std::sin(3.0 * x2);
        const double h3_33 = -36.0 * p_.s3 * std::sin(6.0 * x3);
        Vec out(3);
        out[0] = h1_11 * u[0] * v[0] + h1_12 * (u[0] * v[1] + u[1] * v[0]) + h1_22 * u[1] * v[1];
        out[1] = h2_11 * u[0] * v[0] + h2_12 * (u[0] * v[1] + u[1] * v[0]) + h2_22 * u[1] * v[1];
        out[2] = h3_33 * u[2] * v[2];
        return out;
    }

private:
    Baker3DParams p_;
};

// ---------------------------------------------------------------------------
// Arnold's cat map on [0,1]^2
// ---------------------------------------------------------------------------
class ArnoldCat final : public MapSystem {
public:
    int dim() const override { return 2; }
    int unstable_dim_hint() const override { return 1; }
    Interval domain(int) const override { return {0.0, 1.0}; }
    std::string name() const override { return "cat"; }

    Point apply(const Point& x) const override {
        Point y{Vec(2)};
        y[0] = wrap(2.0 * x[0] + x[1], 0.0, 1.0);
        y[1] = wrap(x[0] + x[1], 0.0, 1.0);
        return y;
    }

    Mat jacobian(const Point&) const override {
        Mat j(2, 2);
        j(0, 0) = 2.0;
        j(0, 1) = 1.0;
        j(1, 0) = 1.0;
        j(1, 1) = 1.0;
        return j;
    }

    Vec hessian_bilinear(const Point&, const Vec&, const Vec&) const override { return Vec(2); }
};

// ---------------------------------------------------------------------------
// sawtooth map x -> 2x + s sin(2 pi x) mod 1
// ---------------------------------------------------------------------------
class Sawtooth final : public MapSystem {
public:
    explicit Sawtooth(double s) : s_(s) {}

    int dim() const override { return 1; }
    int unstable_dim_hint() const override { return 1; }
    Interval domain(int) const override { return {0.0, 1.0}; }
    std::string name() const override { return "sawtooth"; }
    std::vector<double> params() const override { return {s_}; }

    Point apply(const Point& x) const override {
        Point y{Vec(1)};
        y[0] = wrap(2.0 * x[0] + s_ * std::sin(kTwoPi * x[0]), 0.0, 1.0);
        return y;
    }

    Mat jacobian(const Point& x) const override {
        Mat j(1, 1);
        j(0, 0) = 2.0 + kTwoPi * s_ * std::cos(kTwoPi * x[0]);
        return j;
    }

    Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const override {
        Vec out(1);
        out[0] = -kTwoPi * kTwoPi * s_ * std::sin(kTwoPi * x[0]) * u[0] * v[0];
        return out;
    }

private:
    double s_;
};

// ---------------------------------------------------------------------------
// onion map x -> 0.97 sqrt(1 - |1-2x|^gamma)
// ---------------------------------------------------------------------------
class Onion final : public MapSystem {
public:
    explicit Onion(double gamma) : gamma_(gamma) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw Error("onion: gamma must be in (0,1)");
    }

    int dim() const override { return 1; }
    int unstable_dim_hint() const override { return 1; }
    Interval domain(int) const override { return {0.0, 1.0}; }
    std::string name() const override { return "onion"; }
    std::vector<double> params() const override { return {gamma_}; }

    Point apply(const Point& x) const override {
        const double t = std::fabs(1.0 - 2.0 * x[0]);
        Point y{Vec(1)};
        y[0] = 0.97 * std::sqrt(std::max(0.0, 1.0 - std::pow(t, gamma_)));
        return y;
    }

    Mat jacobian(const Point& x) const override {
        check_singular(x[0]);
        const double sgn = (1.0 - 2.0 * x[0]) >= 0.0 ? 1.0 : -1.0;
        const double t = std::fabs(1.0 - 2.0 * x[0]);
        const double w = 1.0 - std::pow(t, gamma_);
        Mat j(1, 1);
        j(0, 0) = 0.97 * sgn * gamma_ * std::pow(t, gamma_ - 1.0) / std::sqrt(w);
        return j;
    }

    Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const override {
        check_singular(x[0]);
        const double t = std::fabs(1.0 - 2.0 * x[0]);
        const double w = 1.0 - std::pow(t, gamma_);
        // second derivative is even about x = 0.5 (sign^2 = 1)
        const double d2 = -2.0 * 0.97 * gamma_ *
                          ((gamma_ - 1.0) * std::pow(t, gamma_ - 2.0) / std::sqrt(w) +
                           0.5 * gamma_ * std::pow(t, 2.0 * gamma_ - 2.0) / (w * std::sqrt(w)));
        Vec out(1);
        out[0] = d2 * u[0] * v[0];
        return out;
    }

private:
    void check_singular(double x) const {
        // unbounded derivative at the branch point and at the domain endpoints
        if (std::fabs(x - 0.5) < 1e-12)
            throw DerivativeSingularity("onion: derivative unbounded near x = 0.5");
        if (x < 1e-12 || x > 1.0 - 1e-12)
            throw DerivativeSingularity("onion: derivative unbounded near the domain endpoint");
    }

    double gamma_;
};

// ---------------------------------------------------------------------------
// invertible 2D embedding of a two-to-one 1D map
// ---------------------------------------------------------------------------
class Embedded1D final : public MapSystem {
public:
    Embedded1D(std::shared_ptr<const MapSystem> inner, double split)
        : inner_(std::move(inner)), split_(split) {
        if (inner_->dim() != 1) throw DimensionMismatch("embed_1d: inner map must be 1D");
    }

    int dim() const override { return 2; }
    int unstable_dim_hint() const override { return 1; }
    Interval domain(int axis) const override {
        return axis == 0 ? inner_->domain(0) : Interval{0.0, 1.0};
    }
    std::string name() const override { return "embedded-" + inner_->name(); }
    std::vector<double> params() const override { return inner_->params(); }

    Point apply(const Point& x) const override {
        Point x1{Vec(1)};
        x1[0] = x[0];
        Point y{Vec(2)};
        y[0] = inner_->apply(x1)[0];
        y[1] = 0.5 * x[1] + (x[0] < split_ ? 0.0 : 0.5);
        return y;
    }

    Mat jacobian(const Point& x) const override {
        Point x1{Vec(1)};
        x1[0] = x[0];
        Mat j(2, 2);
        j(0, 0) = inner_->jacobian(x1)(0, 0);
        j(1, 1) = 0.5;
        return j;
    }

    Vec hessian_bilinear(const Point& x, const Vec& u, const Vec& v) const override {
        Point x1{Vec(1)};
        x1[0] = x[0];
        Vec u1(1), v1(1);
        u1[0] = u[0];
        v1[0] = v[0];
        Vec out(2);
        out[0] = inner_->hessian_bilinear(x1, u1, v1)[0];
        return out;
    }

private:
    std::shared_ptr<const MapSystem> inner_;
    double split_;
};

std::unique_ptr<MapSystem> baker2d(const Baker2DParams& p) { return std::make_unique<Baker2D>(p); }
std::unique_ptr<MapSystem> baker3d(const Baker3DParams& p) { return std::make_unique<Baker3D>(p); }
std::unique_ptr<MapSystem> arnold_cat() { return std::make_unique<ArnoldCat>(); }
std::unique_ptr<MapSystem> sawtooth(double s) { return std::make_unique<Sawtooth>(s); }
std::unique_ptr<MapSystem> onion(double gamma) { return std::make_unique<Onion>(gamma); }

std::unique_ptr<MapSystem> embed_1d(std::shared_ptr<const MapSystem> map1d, double split) {
    return std::make_unique<Embedded1D>(std::move(map1d), split);
}

std::vector<std::string> registered_map_names() {
    return {"baker2d", "baker3d", "cat", "sawtooth", "onion", "embedded-sawtooth", "embedded-onion"};
}

std::unique_ptr<MapSystem> make_map(const std::string& name, const std::vector<double>& params) {
    auto arity = [&](std::size_t k) {
        if (params.size() != k)
            throw Error("map '" + name + "' expects " + std::to_string(k) + " parameter(s), got " +
                        std::to_string(params.size()));
    };
    if (name == "baker2d") {
        arity(4);
        return baker2d({params[0], params[1], params[2], params[3]});
    }
    if (name == "baker3d") {
        arity(3);
        return baker3d({params[0], params[1], params[2]});
    }
    if (name == "cat") {
        arity(0);
        return arnold_cat();
    }
    if (name == "sawtooth") {
        arity(1);
        return sawtooth(params[0]);
    }
    if (name == "onion") {
        arity(1);
        return onion(params[0]);
    }
    if (name == "embedded-sawtooth") {
        arity(1);
        return embed_1d(std::shared_ptr<const MapSystem>(sawtooth(params[0])));
    }
    if (name == "embedded-onion") {
        arity(1);
        return embed_1d(std::shared_ptr<const MapSystem>(onion(params[0])));
    }
    std::string known;
    for (const auto& n : registered_map_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error("unknown map '" + name + "'; registered maps: " + known);
}

double deriv1_1d(const MapSystem& map1d, double x) {
    Point p{Vec(1)};
    p[0] = x;
    return map1d.jacobian(p)(0, 0);
}

double deriv2_1d(const MapSystem& map1d, double x) {
    Point p{Vec(1)};
    p[0] = x;
    Vec e(1);
    e[0] = 1.0;
    return map1d.hessian_bilinear(p, e, e)[0];
}

} // namespace srb
