#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gthkit/kernels.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

/// Rule-based description of a countable-state chain on {1, 2, ...}.
/// Every row has finite explicit support, so northwest corners are exactly
/// computable. exact_stationary/tail_mass are present only for families with
/// an analytic stationary distribution.
struct CountableChainSpec {
    std::string id;
    double row_tol = kDefaultRowTol;
    std::function<std::vector<int>(int)> row_support;   // 1-based states
    std::function<double(int, int)> kernel;             // (i, j) -> p_ij
    std::function<double(int)> exact_stationary;        // j -> pi_j, may be empty
    std::function<double(int)> tail_mass;               // N -> sum_{k>N} pi_k, may be empty

    bool has_exact_stationary() const { return static_cast<bool>(exact_stationary); }
    /// Closed form when available, otherwise series summation down to 1e-18.
    double stationary_tail(int n) const;
};

/// Kernel rows over their support must sum to 1 within row_tol and the kernel
/// must vanish off-support; checks the first `rows` rows.
void validate_spec_rows(const CountableChainSpec& spec, int rows);

/// Top-left N x N block of the spec's transition matrix, exactly as given by
/// the kernel.
SubstochasticMatrix northwest_corner(const CountableChainSpec& spec, int n);

/// Rescales nonnegative weights into probabilities a_j / 2^bits that sum to
/// exactly 1 (the largest weight absorbs the rounding residual). Exact zeros
/// stay zero; the result is representable exactly in both double and rational
/// arithmetic.
std::vector<double> quantize_stochastic_row(const std::vector<double>& weights, int bits);

/// Reflecting birth-death walk on {1,2,...}: up with probability p, down with
/// 1-p, holding mass 1-p at state 1. p is snapped to the 2^-50 dyadic grid so
/// rows are exact; requires 0 < p < 1/2 for positive recurrence when an exact
/// stationary distribution is wanted (pi_j proportional to (p/(1-p))^(j-1)).
CountableChainSpec birth_death_walk(double p);

/// Wraps a finite chain as a countable spec (states above n() jump to 1).
CountableChainSpec embed_finite(const StochasticMatrix& m, const std::string& id);

/// Two blocks mixing internally with O(1) probabilities, coupled with total
/// mass eps (block A) and eps/2 (block B), so the block masses are (1/3, 2/3)
/// at every eps. Rows are exact dyadics on the 2^-50 grid. n must be even,
/// >= 4.
StochasticMatrix nearly_uncoupled_chain(int n, double eps);

/// Dense seeded chain, all entries positive, rows exact dyadics on the 2^-30
/// grid.
StochasticMatrix random_dense_chain(int n, std::uint64_t seed);

/// Parses countable-family ids such as "bd:p=0.3".
CountableChainSpec family_from_id(const std::string& id);

/// Parses finite-family ids "ncd:eps=1e-8" and "rand:seed=7" at a given size.
StochasticMatrix finite_family_instance(const std::string& id, int n);

/// Power-iteration oracle for pi = pi P. Iterate averaging (half a step of P
/// per sweep) makes it insensitive to periodicity; the returned vector
/// satisfies ||v - vP||_1 <= tol against the original matrix.
ProbabilityVector power_iteration_oracle(const StochasticMatrix& m, double tol = 1e-12,
                                         long max_iter = 1000000,
                                         Backend backend = Backend::Auto);

}  // namespace gthkit
