#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gthkit/families.hpp"
#include "gthkit/gth.hpp"
#include "gthkit/rg.hpp"
#include "gthkit/stochastic.hpp"

using namespace gthkit;

TEST_CASE("factor shapes: R strictly upper, G strictly lower, psi_1 = 1") {
    const StochasticMatrix m = random_dense_chain(7, 19);
    const RgFactors f = rg_factorize(m);
    REQUIRE(f.n == 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j <= i; ++j) CHECK(f.r_measures(i, j) == 0.0);
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) CHECK(f.g_measures(i, j) == 0.0);
    CHECK(f.return_probs[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 1; j < 7; ++j) {
        CHECK(f.return_probs[j] > 0.0);
        CHECK(f.return_probs[j] < 1.0);
    }
}

TEST_CASE("G rows are first-entry distributions: they sum to 1") {
    const StochasticMatrix m = random_dense_chain(9, 23);
    const RgFactors f = rg_factorize(m);
    for (int i = 2; i <= 9; ++i) {
        double s = 0.0;
        for (int j = 1; j < i; ++j) s += f.g_measures(i - 1, j - 1);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("the triple product reconstructs I - P") {
    for (int n : {2, 3, 5, 10, 25, 60, 100}) {
        const StochasticMatrix m = random_dense_chain(n, 200 + n);
        const RgFactors f = rg_factorize(m);
        CHECK(rg_reconstruction_residual(f, m) < 1e-13);

        const DenseMatrix prod = rg_reconstruct(f);
        double diag_gap = 0.0;
        for (int i = 0; i < n; ++i)
            diag_gap = std::max(diag_gap, std::fabs(prod(i, i) - (1.0 - m(i, i))));
        CHECK(diag_gap < 1e-13);
    }
}

TEST_CASE("factorizing the trace and the matrix is the same thing") {
    const StochasticMatrix m = random_dense_chain(8, 31);
    const EliminationTrace trace = gth_forward(m);
    const RgFactors from_trace = rg_factorize(trace);
    const RgFactors from_matrix = rg_factorize(m);
    CHECK(max_abs_diff(from_trace.r_measures, from_matrix.r_measures) == 0.0);
    CHECK(max_abs_diff(from_trace.g_measures, from_matrix.g_measures) == 0.0);
    for (int j = 0; j < 8; ++j)
        CHECK(from_trace.return_probs[j] == from_matrix.return_probs[j]);
}

TEST_CASE("elimination-derived measures equal their first-passage definitions") {
    const StochasticMatrix m = random_dense_chain(8, 37);
    const RgFactors f = rg_factorize(m);
    for (int i = 1; i <= 8; ++i) {
        for (int j = 1; j <= 8; ++j) {
            if (i == j && j == 1) continue;  // 1/(1-psi_1) is the rank deficiency
            const double oracle = rg_measure_firstpassage(m, i, j);
            double derived;
            if (i < j) {
                derived = f.r_measures(i - 1, j - 1);
            } else if (i == j) {
                derived = 1.0 / (1.0 - f.return_probs[j - 1]);
            } else {
                derived = f.g_measures(i - 1, j - 1);
            }
            CHECK(derived == doctest::Approx(oracle).epsilon(1e-11));
        }
    }
}

TEST_CASE("measures are invariant under leading-subset censoring") {
    const StochasticMatrix m = random_dense_chain(9, 43);
    for (int level = 2; level <= 9; ++level) {
        const InvarianceReport report = verify_censoring_invariance(m, level);
        CHECK(report.level == level);
        CHECK(report.max_gap() < 1e-12);
        CHECK(report.max_gap() ==
              std::max({report.max_r_gap, report.max_g_gap, report.max_psi_gap}));
    }
}

TEST_CASE("the factors alone recover the stationary distribution") {
    const StochasticMatrix m = random_dense_chain(11, 47);
    const ProbabilityVector via_rg = solve_via_rg(rg_factorize(m));
    const ProbabilityVector via_gth = gth_solve(m);
    CHECK(l1_distance(via_rg, via_gth) < 1e-14);
}

TEST_CASE("two-state factors by hand") {
    DenseMatrix d(2, 2);
    d(0, 0) = 0.8;
    d(0, 1) = 0.2;
    d(1, 0) = 0.1;
    d(1, 1) = 0.9;
    const StochasticMatrix m = StochasticMatrix::checked(std::move(d));
    const RgFactors f = rg_factorize(m);
    // s_2 = p_21 = 0.1; r_12 = p_12/s_2 = 2; g_21 = p_21/s_2 = 1; psi_2 = p_22
    CHECK(f.r_measures(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f.g_measures(1, 0) == 1.0);
    CHECK(f.return_probs[1] == 0.9);
    CHECK(f.return_probs[0] == doctest::Approx(1.0).epsilon(1e-15));
}
