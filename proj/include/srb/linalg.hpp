#pragma once

#include <array>
#include <cmath>

#include "srb/errors.hpp"

namespace srb {

// Largest dimension the dense kernels support. The built-in maps live in
// dimension <= 3; the cap leaves headroom for user-added systems.
inline constexpr int kMaxDim = 8;

// Fixed-capacity dense vector, value semantics, no heap.
class Vec {
public:
    Vec() = default;
    explicit Vec(int n, double fill = 0.0) : n_(n) {
        for (int i = 0; i < n_; ++i) v_[i] = fill;
    }

    int size() const { return n_; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double c) {
        for (int i = 0; i < n_; ++i) v_[i] *= c;
        return *this;
    }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i) m = std::max(m, std::fabs(v_[i]));
        return m;
    }
    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(v_[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> v_{};
    int n_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double c, Vec a) { return a *= c; }

// Dense row-major matrix with fixed capacity kMaxDim x kMaxDim.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols) {
        for (int i = 0; i < rows_ * cols_; ++i) a_[i] = fill;
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[i * cols_ + j]; }
    double operator()(int i, int j) const { return a_[i * cols_ + j]; }

    Vec col(int j) const {
        Vec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const Vec& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < rows_ * cols_; ++i) m = std::max(m, std::fabs(a_[i]));
        return m;
    }
    bool finite() const {
        for (int i = 0; i < rows_ * cols_; ++i)
            if (!std::isfinite(a_[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim * kMaxDim> a_{};
    int rows_ = 0, cols_ = 0;
};

Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
Mat transpose(const Mat& a);

struct QRPair {
    Mat q; // n x m, orthonormal columns
    Mat r; // m x m, upper triangular, positive diagonal
};

// Householder QR of an n x m matrix, n >= m, thin Q. Reflector signs are
// flipped afterwards so that diag(R) > 0; this keeps the propagated frame
// continuous in k and makes sum(log r_ii) usable for Lyapunov exponents.
// Throws DegenerateBasis when any |r_ii| < 1e-13 * max|a| (collapsed column).
QRPair qr_householder(const Mat& a);

// Back-substitution inverse of an upper-triangular matrix.
// Throws SingularR when any |r_ii| < 1e-13.
Mat invert_upper_triangular(const Mat& r);

// d = sin(theta_min) where cos(theta_min) is the largest singular value of
// qu^T qs (columns of qu, qs orthonormal). d = 0 iff the subspaces share a
// direction; d = 1 iff they are mutually orthogonal. The singular value is
// computed by one-sided Jacobi on the small product matrix.
double principal_angle_measure(const Mat& qu, const Mat& qs);

} // namespace srb
