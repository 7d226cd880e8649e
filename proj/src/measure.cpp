#include "srb/measure.hpp"

#include <cmath>

#include "srb/parallel.hpp"

namespace srb {

EmpiricalDensity::EmpiricalDensity(std::vector<int> bins, std::vector<Interval> domain)
    : bins_(std::move(bins)), domain_(std::move(domain)) {
    if (bins_.size() != domain_.size() || bins_.empty())
        throw DimensionMismatch("EmpiricalDensity: bins/domain shape mismatch");
    std::size_t n = 1;
    for (int b : bins_) {
        if (b < 2) throw Error("EmpiricalDensity: need >= 2 bins per dimension");
        n *= static_cast<std::size_t>(b);
    }
    counts_.assign(n, 0);
}

std::size_t EmpiricalDensity::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t d = 0; d < bins_.size(); ++d) f = f * bins_[d] + idx[d];
    return f;
}

void EmpiricalDensity::add(const Point& x) {
    std::size_t f = 0;
    for (int d = 0; d < dims(); ++d) {
        int i = static_cast<int>((x[d] - domain_[d].lo) / bin_width(d));
        if (i < 0) i = 0;
        if (i >= bins_[d]) i = bins_[d] - 1;
        f = f * bins_[d] + i;
    }
    ++counts_[f];
    ++total_;
}

double EmpiricalDensity::density(const std::vector<int>& idx) const {
    double vol = 1.0;
    for (int d = 0; d < dims(); ++d) vol *= bin_width(d);
    return static_cast<double>(counts_[flat(idx)]) / (static_cast<double>(total_) * vol);
}

void EmpiricalDensity::merge(const EmpiricalDensity& other) {
    if (other.counts_.size() != counts_.size())
        throw DimensionMismatch("EmpiricalDensity::merge: grid shapes differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

EmpiricalDensity histogram_srb(const MapSystem& map, const Point& x0, long n_steps,
                               const std::vector<int>& bins, long burn_in) {
    std::vector<Interval> dom;
    for (int d = 0; d < map.dim(); ++d) dom.push_back(map.domain(d));
    EmpiricalDensity h(bins, dom);
    Point x = map.reduce(x0);
    for (long k = 0; k < burn_in; ++k) x = map.apply(x);
    for (long k = 0; k < n_steps; ++k) {
        x = map.apply(x);
        h.add(x);
    }
    return h;
}

EmpiricalDensity histogram_srb_ensemble(const MapSystem& map, long n_steps,
                                        const std::vector<int>& bins, long burn_in,
                                        std::uint64_t seed, int workers, long segment_target) {
    // fresh initial points per segment keep segments statistically independent
    // and keep each float orbit far below its recurrence length; the segment
    // count must not depend on the worker count or output bytes would change
    // with scheduling
    const long n_segments = std::max<long>(8, (n_steps + segment_target - 1) / segment_target);
    const long per = n_steps / n_segments, extra = n_steps % n_segments;

    auto run_segment = [&](int s) {
        CounterRng rng(seed, /*stream=*/1000 + static_cast<std::uint64_t>(s));
        const Point x0 = map.random_point(rng);
        return histogram_srb(map, x0, per + (s < extra ? 1 : 0), bins, burn_in);
    };
    std::vector<EmpiricalDensity> parts = parallel_tasks<EmpiricalDensity>(
        workers, static_cast<int>(n_segments), run_segment);
    EmpiricalDensity out = parts[0];
    for (std::size_t s = 1; s < parts.size(); ++s) out.merge(parts[s]);
    return out;
}

std::vector<std::pair<double, double>> conditional_fd_g(const EmpiricalDensity& density,
                                                        int row_index, int stride) {
    if (density.dims() != 2) throw DimensionMismatch("conditional_fd_g: density must be 2D");
    const int k = density.bins(0);
    bool any = false;
    for (int i = 0; i < k; ++i)
        if (density.count({i, row_index}) > 0) {
            any = true;
            break;
        }
    if (!any) throw EmptyRow("conditional_fd_g: row " + std::to_string(row_index) + " is empty");

    // the row normalization cancels in (c_{i+s} - c_{i-s}) / (2 s dx c_i)
    const double dx = density.bin_width(0);
    std::vector<std::pair<double, double>> out;
    for (int i = stride; i < k - stride; ++i) {
        const std::uint64_t cm = density.count({i - stride, row_index});
        const std::uint64_t c0 = density.count({i, row_index});
        const std::uint64_t cp = density.count({i + stride, row_index});
        if (cm == 0 || c0 == 0 || cp == 0) continue; // zero-count bins are skipped, not imputed
        const double g_fd = (static_cast<double>(cp) - static_cast<double>(cm)) /
                            (2.0 * stride * dx * static_cast<double>(c0));
        const double center = density.domain(0).lo + (i + 0.5) * dx;
        out.emplace_back(center, g_fd);
    }
    return out;
}

Observable make_observable(const std::string& name) {
    if (name == "sin_exp_2d")
        return Observable{
            name,
            [](const Point& x) { return std::sin(x[0]) * std::exp(x[1]); },
            [](const Point& x) {
                Vec gr(2);
                gr[0] = std::cos(x[0]) * std::exp(x[1]);
                gr[1] = std::sin(x[0]) * std::exp(x[1]);
                return gr;
            }};
    if (name == "sin_sin_lin_3d")
        return Observable{
            name,
            [](const Point& x) { return std::sin(x[0]) * std::sin(1.5 * x[1]) * x[2]; },
            [](const Point& x) {
                Vec gr(3);
                gr[0] = std::cos(x[0]) * std::sin(1.5 * x[1]) * x[2];
                gr[1] = 1.5 * std::sin(x[0]) * std::cos(1.5 * x[1]) * x[2];
                gr[2] = std::sin(x[0]) * std::sin(1.5 * x[1]);
                return gr;
            }};
    if (name == "const_one")
        return Observable{name, [](const Point&) { return 1.0; },
                          [](const Point& x) { return Vec(x.dim()); }};
    std::string known;
    for (const auto& n : registered_observable_names())
        known += (known.empty() ? "" : ", ") + n;
    throw Error("unknown observable '" + name + "'; registered: " + known);
}

std::vector<std::string> registered_observable_names() {
    return {"sin_exp_2d", "sin_sin_lin_3d", "const_one"};
}

void validate_observable(const Observable& v, const MapSystem& map, std::uint64_t seed) {
    CounterRng rng(seed, /*stream=*/0x0b);
    const double h = 1e-6;
    for (int trial = 0; trial < 32; ++trial) {
        Point x = map.random_point(rng);
        const Vec grad = v.gradient(x);
        for (int d = 0; d < map.dim(); ++d) {
            Point xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            const double fd = (v.eval(xp) - v.eval(xm)) / (2.0 * h);
            const double scale = std::max(1.0, std::fabs(grad[d]));
            if (std::fabs(fd - grad[d]) > 1e-5 * scale)
                throw Error("observable '" + v.name + "': gradient disagrees with FD at axis " +
                            std::to_string(d));
        }
    }
}

void MCEstimate::add(double x) {
    ++n_samples;
    const double delta = x - value;
    value += delta / static_cast<double>(n_samples);
    m2_ += delta * (x - value);
    running_variance = n_samples > 1 ? m2_ / static_cast<double>(n_samples - 1) : 0.0;
}

void MCEstimate::merge(const MCEstimate& other) {
    if (other.n_samples == 0) return;
    if (n_samples == 0) {
        *this = other;
        return;
    }
    const double na = n_samples, nb = other.n_samples;
    const double delta = other.value - value;
    value += delta * nb / (na + nb);
    m2_ += other.m2_ + delta * delta * na * nb / (na + nb);
    n_samples += other.n_samples;
    running_variance = n_samples > 1 ? m2_ / static_cast<double>(n_samples - 1) : 0.0;
}

void MCEstimate::scale(double c) {
    value *= c;
    m2_ *= c * c;
    running_variance *= c * c;
}

double MCEstimate::std_error() const {
    return n_samples > 0 ? std::sqrt(running_variance / static_cast<double>(n_samples)) : 0.0;
}

MCEstimate ergodic_average(const MapSystem& map, std::uint64_t seed, long n_steps, long burn_in,
                           const std::function<double(const Point&)>& f) {
    CounterRng rng(seed, /*stream=*/2);
    Point x = map.random_point(rng);
    for (long k = 0; k < burn_in; ++k) x = map.apply(x);
    MCEstimate est;
    for (long k = 0; k < n_steps; ++k) {
        x = map.apply(x);
        const double val = f(x);
        if (!std::isfinite(val)) throw NonFiniteState("ergodic_average: non-finite integrand", k);
        est.add(val);
    }
    return est;
}

MCEstimate ergodic_average_g(
    const MapSystem& map, int m, std::uint64_t seed, long n_steps, long burn_in,
    const std::function<double(const Point&, const Mat& q, const Vec& g)>& f) {
    CounterRng rng(seed, /*stream=*/2);
    DensityGradientRun run(map, map.random_point(rng), m, seed);
    for (long k = 0; k < burn_in; ++k) run.advance();
    MCEstimate est;
    for (long k = 0; k < n_steps; ++k) {
        run.advance();
        const double val = f(run.point(), run.basis(), run.gradient());
        if (!std::isfinite(val))
            throw NonFiniteState("ergodic_average_g: non-finite integrand", run.step());
        est.add(val);
    }
    return est;
}

McIntegralPair mc_integrate_pair(const MapSystem& map, const Observable& v, int m, long n_steps,
                                 long burn_in, std::uint64_t seed) {
    CounterRng rng(seed, /*stream=*/2);
    DensityGradientRun run(map, map.random_point(rng), m, seed);
    for (long k = 0; k < burn_in; ++k) run.advance();

    MCEstimate lhs, rhs, gsq;
    for (long k = 0; k < n_steps; ++k) {
        run.advance();
        const Point& x = run.point();
        const Vec grad_v = v.gradient(x);
        const Vec& g = run.gradient();
        double dir_sum = 0.0, g_sum = 0.0, g2 = 0.0;
        for (int j = 0; j < m; ++j) {
            dir_sum += grad_v.dot(run.basis().col(j));
            g_sum += g[j];
            g2 += g[j] * g[j];
        }
        lhs.add(dir_sum);
        rhs.add(-g_sum * v.eval(x));
        gsq.add(g2);
    }

    // the reference integrals use the Riemannian volume element, hence the
    // domain-volume scaling of both estimates
    const double vol = map.domain_volume();
    lhs.scale(vol);
    rhs.scale(vol);
    return {lhs, rhs, std::sqrt(std::max(0.0, gsq.value))};
}

double q_angle_stat(const MapSystem& map, long n_steps, long burn_in, std::uint64_t seed) {
    if (map.dim() != 2) throw DimensionMismatch("q_angle_stat: map must be 2D");
    CounterRng rng(seed, /*stream=*/3);
    Point x = map.random_point(rng);
    TangentFrame frame = init_frame(2, 1, seed);
    for (long k = 0; k < burn_in; ++k) {
        frame = step_frame(frame, map.jacobian(x));
        x = map.apply(x);
    }
    double max_angle = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        frame = step_frame(frame, map.jacobian(x));
        x = map.apply(x);
        max_angle = std::max(max_angle,
                             std::atan2(std::fabs(frame.q(1, 0)), std::fabs(frame.q(0, 0))));
    }
    return max_angle;
}

} // namespace srb
