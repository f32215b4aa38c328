#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gthkit/censoring.hpp"
#include "gthkit/errors.hpp"
#include "gthkit/families.hpp"
#include "gthkit/gth.hpp"
#include "gthkit/stochastic.hpp"
#include "gthkit/truncation.hpp"

using namespace gthkit;

TEST_CASE("strategy ids parse and print back") {
    for (const char* id : {"censored", "last", "first", "uniform", "col:3", "linear:1,2,3"})
        CHECK(AugmentationStrategy::parse(id).id() == id);
    CHECK_THROWS_AS(AugmentationStrategy::parse("col:x"), ValidationError);
    CHECK_THROWS_AS(AugmentationStrategy::parse("col:0"), ValidationError);
    CHECK_THROWS_AS(AugmentationStrategy::parse("linear:"), ValidationError);
    CHECK_THROWS_AS(AugmentationStrategy::parse("linear:1,-2"), ValidationError);
    CHECK_THROWS_AS(AugmentationStrategy::parse("middle"), ValidationError);
}

TEST_CASE("augment places each row's deficit per the strategy") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    const SubstochasticMatrix corner = northwest_corner(spec, 4);
    const double deficit = 1.0 - (corner(3, 2) + corner(3, 3));  // only row 4 leaks

    SUBCASE("last column") {
        const StochasticMatrix p = augment(corner, AugmentationStrategy::last_column());
        CHECK(p(3, 3) == corner(3, 3) + deficit);
        CHECK(p(0, 0) == corner(0, 0));  // full rows untouched
        CHECK(validate_stochastic(p.dense(), 1e-15).ok());
    }
    SUBCASE("first column") {
        const StochasticMatrix p = augment(corner, AugmentationStrategy::first_column());
        CHECK(p(3, 0) == corner(3, 0) + deficit);
    }
    SUBCASE("fixed column") {
        const StochasticMatrix p = augment(corner, AugmentationStrategy::single_column(2));
        CHECK(p(3, 1) == corner(3, 1) + deficit);
        CHECK_THROWS_AS(augment(corner, AugmentationStrategy::single_column(9)),
                        ValidationError);
    }
    SUBCASE("uniform") {
        const StochasticMatrix p = augment(corner, AugmentationStrategy::uniform());
        CHECK(p(3, 1) == doctest::Approx(corner(3, 1) + deficit / 4).epsilon(1e-15));
        CHECK(validate_stochastic(p.dense(), 1e-15).ok());
    }
    SUBCASE("linear weights") {
        const StochasticMatrix p =
            augment(corner, AugmentationStrategy::linear({1.0, 1.0, 0.0, 2.0}));
        CHECK(p(3, 0) == doctest::Approx(corner(3, 0) + deficit * 0.25).epsilon(1e-15));
        CHECK(p(3, 2) == corner(3, 2));  // zero weight: untouched
        CHECK_THROWS_AS(augment(corner, AugmentationStrategy::linear({1.0})),
                        ValidationError);
    }
    SUBCASE("censored placement needs the chain, not just the corner") {
        CHECK_THROWS_AS(augment(corner, AugmentationStrategy::censored()), ValidationError);
    }
}

TEST_CASE("deficit conservation: augmented rows sum to 1 within 1e-15") {
    const CountableChainSpec spec = birth_death_walk(0.45);
    const SubstochasticMatrix corner = northwest_corner(spec, 12);
    for (const char* id : {"last", "first", "uniform", "col:5"}) {
        const StochasticMatrix p = augment(corner, AugmentationStrategy::parse(id));
        for (int i = 0; i < 12; ++i) {
            const double s = stable_sum(p.dense().row(i), 12);
            CHECK(std::fabs(s - 1.0) < 1e-15);
        }
    }
}

TEST_CASE("censored truncation of a skip-free-down walk is the last-column closure") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    const CensoredTruncation ct = censored_truncation(spec, 10);
    // the walk re-enters {1..10} only at state 10, so the censored chain is
    // exactly the last-column augmentation and the doubling stalls at once
    CHECK(ct.stall_gap == 0.0);
    CHECK(ct.omega == 80);  // 4N compared against 8N, returned at 8N
    const StochasticMatrix last =
        augment(northwest_corner(spec, 10), AugmentationStrategy::last_column());
    CHECK(max_abs_diff(ct.matrix.dense(), last.dense()) < 1e-14);
}

TEST_CASE("censored truncation respects its caps") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    OuterTruncation outer;
    outer.omega = 11;
    outer.omega_cap = 12;  // cannot double even once
    CHECK_THROWS_AS(censored_truncation(spec, 10, outer), ConvergenceError);
    CHECK_THROWS_AS(censored_truncation(spec, 10, {10, 0, {}, 1e-12}), ValidationError);
    CHECK_THROWS_AS(censored_truncation(spec, 0), ValidationError);
}

TEST_CASE("censored truncations are consistent across sizes") {
    // watching {1..N2} of the N1-state censored chain equals censoring to
    // {1..N2} directly
    const CountableChainSpec spec = birth_death_walk(0.45);
    const StochasticMatrix big = censored_truncation(spec, 12).matrix;
    const StochasticMatrix small = censored_truncation(spec, 5).matrix;
    const StochasticMatrix watched = censor(big, Partition::leading(12, 5));
    CHECK(max_abs_diff(small.dense(), watched.dense()) < 1e-11);
}

TEST_CASE("l1 error includes the tail and vanishes for perfect estimates") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    std::vector<double> exact(6);
    for (int k = 1; k <= 6; ++k) exact[k - 1] = spec.exact_stationary(k);
    const double err =
        l1_truncation_error(ProbabilityVector::unchecked(exact), spec, 6);
    CHECK(err == doctest::Approx(spec.stationary_tail(6)).epsilon(1e-12));

    // a one-state truncation: every strategy gives pi = (1)
    const double one = l1_truncation_error(ProbabilityVector::unchecked({1.0}), spec, 1);
    CHECK(one ==
          doctest::Approx(1.0 - spec.exact_stationary(1) + spec.stationary_tail(1))
              .epsilon(1e-12));

    CHECK_THROWS_AS(l1_truncation_error(ProbabilityVector::unchecked({1.0}), spec, 2),
                    ValidationError);
}

TEST_CASE("the censored strategy has the smallest l1 error on the grid") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    const std::vector<AugmentationStrategy> strategies{
        AugmentationStrategy::censored(), AugmentationStrategy::last_column(),
        AugmentationStrategy::first_column(), AugmentationStrategy::uniform()};
    const TruncationReport report =
        compare_augmentations(spec, {5, 10, 20}, strategies);
    CHECK(report.family == spec.id);
    REQUIRE(report.rows.size() == 12);
    CHECK(report.censored_minimal);
    CHECK(report.max_violation <= 1e-12);

    // rows come back strategy-major in the given order, sizes ascending
    CHECK(report.rows[0].strategy == "censored");
    CHECK(report.rows[0].n == 5);
    CHECK(report.rows[1].n == 10);
    CHECK(report.rows[4].strategy == "last");
    for (const TruncationRow& row : report.rows) {
        REQUIRE(row.ok);
        CHECK(row.error.empty());
        CHECK(row.stationary.size() == static_cast<std::size_t>(row.n));
        CHECK(row.l1_error >= 0.0);
    }

    // censored errors decrease with N
    CHECK(report.rows[0].l1_error > report.rows[1].l1_error);
    CHECK(report.rows[1].l1_error > report.rows[2].l1_error);
}

TEST_CASE("one-state truncations tie every strategy") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    const TruncationReport report = compare_augmentations(
        spec, {1},
        {AugmentationStrategy::censored(), AugmentationStrategy::last_column(),
         AugmentationStrategy::uniform()});
    REQUIRE(report.rows.size() == 3);
    for (const TruncationRow& row : report.rows) {
        REQUIRE(row.ok);
        CHECK(row.stationary == std::vector<double>{1.0});
        CHECK(row.l1_error == doctest::Approx(report.rows[0].l1_error).epsilon(1e-14));
    }
    CHECK(report.censored_minimal);
}

TEST_CASE("a family without an analytic distribution is rejected up front") {
    CountableChainSpec spec = birth_death_walk(0.3);
    spec.exact_stationary = nullptr;
    spec.tail_mass = nullptr;
    CHECK_THROWS_AS(
        compare_augmentations(spec, {5}, {AugmentationStrategy::last_column()}),
        ValidationError);
}

TEST_CASE("convergence study: both columns decay monotonically") {
    const CountableChainSpec spec = birth_death_walk(0.3);
    const std::vector<ConvergenceRow> rows = convergence_study(
        spec, AugmentationStrategy::censored(), {5, 10, 20, 40});
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k].l1_error <= rows[k - 1].l1_error + 1e-12);
        CHECK(rows[k].window_gap <= rows[k - 1].window_gap + 1e-12);
    }
    // the leading window of the censored chain reproduces the kernel
    CHECK(rows.back().window_gap < 1e-10);

    const std::vector<ConvergenceRow> heavier = convergence_study(
        spec, AugmentationStrategy::last_column(), {5, 10, 20});
    for (std::size_t k = 1; k < heavier.size(); ++k)
        CHECK(heavier[k].l1_error <= heavier[k - 1].l1_error + 1e-12);
}

TEST_CASE("heavier-tailed walks decay slower but still monotonically") {
    const CountableChainSpec spec = birth_death_walk(0.45);
    const std::vector<ConvergenceRow> rows = convergence_study(
        spec, AugmentationStrategy::censored(), {5, 10, 20, 40});
    for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(rows[k].l1_error <= rows[k - 1].l1_error + 1e-12);
    CHECK(rows.back().l1_error > 1e-8);  // rho = 9/11: still visible at N=40
}
