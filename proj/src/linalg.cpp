#include "srb/linalg.hpp"

#include <algorithm>

namespace srb {

Mat operator*(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec operator*(const Mat& a, const Vec& x) {
    Vec y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

QRPair qr_householder(const Mat& a) {
    const int n = a.rows(), m = a.cols();
    if (n < m) throw DimensionMismatch("qr_householder: need rows >= cols");

    const double anorm = a.max_abs();
    Mat r = a;
    // reflector vectors, packed per column
    std::array<std::array<double, kMaxDim>, kMaxDim> v{};
    std::array<double, kMaxDim> vnorm2{};

    for (int j = 0; j < m; ++j) {
        double colnorm = 0.0;
        for (int i = j; i < n; ++i) colnorm += r(i, j) * r(i, j);
        colnorm = std::sqrt(colnorm);

        const double alpha = r(j, j) >= 0.0 ? -colnorm : colnorm;
        double vn2 = 0.0;
        for (int i = j; i < n; ++i) {
            double vi = r(i, j);
            if (i == j) vi -= alpha;
            v[j][i] = vi;
            vn2 += vi * vi;
        }
        vnorm2[j] = vn2;

        if (vn2 > 0.0) {
            for (int c = j; c < m; ++c) {
                double s = 0.0;
                for (int i = j; i < n; ++i) s += v[j][i] * r(i, c);
                s *= 2.0 / vn2;
                for (int i = j; i < n; ++i) r(i, c) -= s * v[j][i];
            }
        }
        r(j, j) = alpha;
        for (int i = j + 1; i < n; ++i) r(i, j) = 0.0;
    }

    // thin Q: apply reflectors to the leading m columns of the identity
    Mat q(n, m);
    for (int j = 0; j < m; ++j) q(j, j) = 1.0;
    for (int j = m - 1; j >= 0; --j) {
        if (vnorm2[j] <= 0.0) continue;
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int i = j; i < n; ++i) s += v[j][i] * q(i, c);
            s *= 2.0 / vnorm2[j];
            for (int i = j; i < n; ++i) q(i, c) -= s * v[j][i];
        }
    }

    // positive-diagonal convention
    for (int j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) {
            for (int c = j; c < m; ++c) r(j, c) = -r(j, c);
            for (int i = 0; i < n; ++i) q(i, j) = -q(i, j);
        }
    }

    for (int j = 0; j < m; ++j)
        if (std::fabs(r(j, j)) < 1e-13 * anorm || r(j, j) == 0.0)
            throw DegenerateBasis("qr_householder: collapsed column " + std::to_string(j));

    Mat rsq(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) rsq(i, j) = r(i, j);
    return {q, rsq};
}

Mat invert_upper_triangular(const Mat& r) {
    const int m = r.rows();
    if (r.cols() != m) throw DimensionMismatch("invert_upper_triangular: matrix not square");
    for (int i = 0; i < m; ++i)
        if (std::fabs(r(i, i)) < 1e-13)
            throw SingularR("invert_upper_triangular: diagonal entry " + std::to_string(i) +
                            " below 1e-13");

    Mat x(m, m);
    for (int j = m - 1; j >= 0; --j) {
        x(j, j) = 1.0 / r(j, j);
        for (int i = j - 1; i >= 0; --i) {
            double s = 0.0;
            for (int k = i + 1; k <= j; ++k) s += r(i, k) * x(k, j);
            x(i, j) = -s / r(i, i);
        }
    }
    return x;
}

double principal_angle_measure(const Mat& qu, const Mat& qs) {
    if (qu.rows() != qs.rows())
        throw DimensionMismatch("principal_angle_measure: row counts differ");

    // c = qu^T qs, mu x ms; largest singular value = cos of smallest angle
    Mat c = transpose(qu) * qs;
    const int rows = c.rows(), cols = c.cols();

    // one-sided Jacobi: rotate column pairs until mutually orthogonal
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p)
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    app += c(i, p) * c(i, p);
                    aqq += c(i, q) * c(i, q);
                    apq += c(i, p) * c(i, q);
                }
                if (std::fabs(apq) <= 1e-30 + 1e-16 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t), sn = cs * t;
                for (int i = 0; i < rows; ++i) {
                    const double cip = c(i, p), ciq = c(i, q);
                    c(i, p) = cs * cip - sn * ciq;
                    c(i, q) = sn * cip + cs * ciq;
                }
            }
        if (!rotated) break;
    }

    double sigma_max = 0.0;
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += c(i, j) * c(i, j);
        sigma_max = std::max(sigma_max, std::sqrt(s));
    }
    sigma_max = std::min(sigma_max, 1.0);
    return std::sqrt(std::max(0.0, (1.0 - sigma_max) * (1.0 + sigma_max)));
}

} // namespace srb
