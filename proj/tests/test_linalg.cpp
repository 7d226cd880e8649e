#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "srb/linalg.hpp"
#include "srb/rng.hpp"

using namespace srb;

namespace {

Mat random_matrix(int n, int m, CounterRng& rng) {
    Mat a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    return a;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::fabs(a(i, j) - b(i, j)));
    return d;
}

} // namespace

TEST_CASE("qr of identity leading columns") {
    Mat a(3, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    QRPair qr = qr_householder(a);
    CHECK(max_abs_diff(qr.q, a) < 1e-15);
    CHECK(max_abs_diff(qr.r, Mat::identity(2)) < 1e-15);
}

TEST_CASE("qr of a single column is the normalized column with positive r") {
    Mat a(2, 1);
    a(0, 0) = 3.0;
    a(1, 0) = 4.0;
    QRPair qr = qr_householder(a);
    CHECK(qr.q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(qr.q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(qr.r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("qr reconstruction and orthonormality on random 5x3 inputs") {
    CounterRng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        Mat a = random_matrix(5, 3, rng);
        QRPair qr;
        try {
            qr = qr_householder(a);
        } catch (const DegenerateBasis&) {
            continue; // random near-singular draw
        }
        CHECK(max_abs_diff(transpose(qr.q) * qr.q, Mat::identity(3)) < 1e-12);
        CHECK(max_abs_diff(qr.q * qr.r, a) < 1e-12 * std::max(1.0, a.max_abs()));
        for (int j = 0; j < 3; ++j) {
            CHECK(qr.r(j, j) > 0.0);
            for (int i = j + 1; i < 3; ++i) CHECK(qr.r(i, j) == 0.0);
        }
    }
}

TEST_CASE("qr is bitwise deterministic") {
    CounterRng rng(5);
    Mat a = random_matrix(4, 3, rng);
    QRPair qr1 = qr_householder(a);
    QRPair qr2 = qr_householder(a);
    CHECK(max_abs_diff(qr1.q, qr2.q) == 0.0);
    CHECK(max_abs_diff(qr1.r, qr2.r) == 0.0);
}

TEST_CASE("qr rejects collapsed columns") {
    Mat a(3, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0; // second column parallel to the first
    CHECK_THROWS_AS(qr_householder(a), DegenerateBasis);
}

TEST_CASE("upper triangular inverse: identity and diagonal") {
    CHECK(max_abs_diff(invert_upper_triangular(Mat::identity(3)), Mat::identity(3)) == 0.0);

    Mat d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    Mat di = invert_upper_triangular(d);
    CHECK(di(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(di(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(di(0, 1) == 0.0);
}

TEST_CASE("upper triangular inverse: 2x2 worked example") {
    Mat r(2, 2);
    r(0, 0) = 2.0;
    r(0, 1) = 1.0;
    r(1, 1) = 3.0;
    Mat ri = invert_upper_triangular(r);
    CHECK(ri(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ri(0, 1) == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(ri(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(max_abs_diff(r * ri, Mat::identity(2)) < 1e-15);
}

TEST_CASE("upper triangular inverse holds to 1e-10 up to condition 1e6") {
    CounterRng rng(11);
    const double diags[3] = {1e3, 1.0, 1e-3}; // cond ~ 1e6
    for (int trial = 0; trial < 50; ++trial) {
        Mat r(3, 3);
        for (int i = 0; i < 3; ++i) {
            r(i, i) = diags[i];
            for (int j = i + 1; j < 3; ++j) r(i, j) = 0.3 * diags[i] * rng.uniform(-1.0, 1.0);
        }
        Mat ri = invert_upper_triangular(r);
        CHECK(max_abs_diff(r * ri, Mat::identity(3)) < 1e-10);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < i; ++j) CHECK(ri(i, j) == 0.0);
    }
}

TEST_CASE("upper triangular inverse rejects near-zero diagonals") {
    Mat r(2, 2);
    r(0, 0) = 1.0;
    r(1, 1) = 1e-14;
    CHECK_THROWS_AS(invert_upper_triangular(r), SingularR);
}

TEST_CASE("principal angle measure: axis cases") {
    Mat e1(2, 1), e2(2, 1);
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;
    CHECK(principal_angle_measure(e1, e2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(principal_angle_measure(e1, e1) == doctest::Approx(0.0).epsilon(1e-15));

    const double alpha = M_PI / 6.0;
    Mat qs(2, 1);
    qs(0, 0) = std::cos(alpha);
    qs(1, 0) = std::sin(alpha);
    CHECK(principal_angle_measure(e1, qs) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("principal angle measure: symmetric and basis-independent") {
    CounterRng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        Mat qu = qr_householder(random_matrix(4, 2, rng)).q;
        Mat qs = qr_householder(random_matrix(4, 2, rng)).q;
        const double d1 = principal_angle_measure(qu, qs);
        const double d2 = principal_angle_measure(qs, qu);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));

        // re-base qu by an in-plane rotation: d must not move
        const double t = rng.uniform(0.0, 6.28);
        Mat rot(2, 2);
        rot(0, 0) = std::cos(t);
        rot(0, 1) = -std::sin(t);
        rot(1, 0) = std::sin(t);
        rot(1, 1) = std::cos(t);
        const double d3 = principal_angle_measure(qu * rot, qs);
        CHECK(std::fabs(d3 - d1) < 1e-12);
    }
}

TEST_CASE("principal angle measure rejects mismatched row counts") {
    Mat a(2, 1), b(3, 1);
    a(0, 0) = 1.0;
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(principal_angle_measure(a, b), DimensionMismatch);
}
