#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gthkit/families.hpp"
#include "gthkit/kernels.hpp"
#include "gthkit/matrix.hpp"

using namespace gthkit;

namespace {

DenseMatrix seeded(int rows, int cols, std::uint64_t seed) {
    // small deterministic fill, values in (0, 1)
    DenseMatrix m(rows, cols);
    std::uint64_t s = seed;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            s = s * 6364136223846793005ULL + 1442695040888963407ULL;
            m(i, j) = static_cast<double>(s >> 11) * 0x1.0p-53;
        }
    return m;
}

}  // namespace

TEST_CASE("backend selection") {
    CHECK_FALSE(use_parallel(Backend::Serial, 1L << 40));
    CHECK_FALSE(use_parallel(Backend::Auto, 8));  // tiny work stays serial
    CHECK(parallel_threads() >= 1);
    // Auto only pays for threading when there is more than one thread
    if (parallel_threads() > 1)
        CHECK(use_parallel(Backend::Auto, 1L << 40) == use_parallel(Backend::Parallel, 1));
    else
        CHECK_FALSE(use_parallel(Backend::Auto, 1L << 40));
}

TEST_CASE("matmul matches the straightforward triple loop") {
    const DenseMatrix a = seeded(7, 5, 1), b = seeded(5, 9, 2);
    const DenseMatrix c = matmul(a, b, Backend::Serial);
    REQUIRE(c.rows() == 7);
    REQUIRE(c.cols() == 9);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 9; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 5; ++k) dot += a(i, k) * b(k, j);
            CHECK(c(i, j) == doctest::Approx(dot).epsilon(1e-15));
        }
}

TEST_CASE("matmul: parallel path is bitwise identical to serial") {
    const DenseMatrix a = seeded(83, 83, 3), b = seeded(83, 83, 4);
    CHECK(max_abs_diff(matmul(a, b, Backend::Serial), matmul(a, b, Backend::Parallel)) == 0.0);
}

TEST_CASE("vecmat accumulates in ascending row order on both paths") {
    const DenseMatrix m = seeded(61, 61, 5);
    std::vector<double> v(61);
    for (int i = 0; i < 61; ++i) v[i] = 1.0 / (i + 1);

    std::vector<double> serial, parallel;
    vecmat(v, m, serial, Backend::Serial);
    vecmat(v, m, parallel, Backend::Parallel);
    REQUIRE(serial.size() == 61);
    REQUIRE(parallel.size() == 61);
    for (int j = 0; j < 61; ++j) {
        double dot = 0.0;
        for (int i = 0; i < 61; ++i) dot += v[i] * m(i, j);
        CHECK(serial[j] == dot);  // identical order: exactly the same value
        CHECK(parallel[j] == serial[j]);
    }
}

TEST_CASE("elimination_update: parallel path is bitwise identical to serial") {
    for (int n : {8, 40, 90}) {
        DenseMatrix w = random_dense_chain(n, 17).dense();
        // normalize the pivot row as the elimination proper would
        double s = 0.0;
        for (int k = 0; k < n - 1; ++k) s += w(n - 1, k);
        for (int k = 0; k < n - 1; ++k) w(n - 1, k) /= s;

        DenseMatrix ws = w, wp = w;
        elimination_update(ws, n, Backend::Serial);
        elimination_update(wp, n, Backend::Parallel);
        CHECK(max_abs_diff(ws, wp) == 0.0);

        // spot-check the arithmetic on one entry
        const double expect = w(1, 2) + w(1, n - 1) * w(n - 1, 2);
        CHECK(ws(1, 2) == expect);
        // pivot row and column untouched
        CHECK(ws(n - 1, 0) == w(n - 1, 0));
        CHECK(ws(0, n - 1) == w(0, n - 1));
    }
}

TEST_CASE("elimination_update skips exact-zero multipliers without changing bits") {
    DenseMatrix w(3, 3);
    w(0, 0) = 0.25;
    w(0, 2) = 0.0;  // zero multiplier: row 0 must be left exactly alone
    w(1, 2) = 0.5;
    w(2, 0) = 1.0;
    w(2, 1) = 0.0;
    DenseMatrix before = w;
    elimination_update(w, 3, Backend::Serial);
    CHECK(w(0, 0) == before(0, 0));
    CHECK(w(0, 1) == before(0, 1));
    CHECK(w(1, 0) == before(1, 0) + before(1, 2) * before(2, 0));
}

TEST_CASE("LU factorization solves small dense systems") {
    const int n = 6;
    DenseMatrix a = seeded(n, n, 9);
    for (int i = 0; i < n; ++i) a(i, i) += n;  // well conditioned

    std::vector<double> x_true(n);
    for (int i = 0; i < n; ++i) x_true[i] = i - 2.5;
    std::vector<double> b(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i] += a(i, j) * x_true[j];

    const auto f = lu_factor(a);
    REQUIRE(f.has_value());
    const std::vector<double> x = lu_solve(*f, b);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-12));

    // matrix right-hand side: A X = A gives X = I
    const DenseMatrix eye = lu_solve(*f, a, Backend::Serial);
    CHECK(max_abs_diff(eye, DenseMatrix::identity(n)) < 1e-12);
    CHECK(max_abs_diff(lu_solve(*f, a, Backend::Serial), lu_solve(*f, a, Backend::Parallel)) ==
          0.0);
}

TEST_CASE("LU reports singular inputs") {
    DenseMatrix a(3, 3);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;  // rows 1,2 dependent, column 3 empty
    CHECK_FALSE(lu_factor(a).has_value());
}
