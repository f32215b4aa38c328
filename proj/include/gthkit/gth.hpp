#pragma once

#include <string>
#include <vector>

#include "gthkit/kernels.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

struct GthOptions {
    Backend backend = Backend::Auto;
    /// Neumaier accumulation for the level denominators and the back
    /// substitution sums (a measurable extra for the stability benchmark; the
    /// default is the plain ascending accumulation of the textbook
    /// algorithm).
    bool compensated_sums = false;
};

/// Ratios r_j = pi_j / pi_1 with r_1 = 1 exactly.
struct RatioVector {
    std::vector<double> values;
    int n() const { return static_cast<int>(values.size()); }
    /// 1-based.
    double r(int j) const { return values[j - 1]; }
};

/// Result of the forward eliminations. One N x N workspace packs everything
/// the later phases need:
///   - strictly upper (i,j), i < j : p^j_{i,j}, the level-j column coefficient
///   - diagonal      (j,j)        : psi_j = p^j_{j,j}
///   - strictly lower (j,i), i < j : p^j_{j,i} / s_j, the normalized exit row
/// together with the cached denominators s_j. Levels are reconstructible on
/// demand by re-running the elimination on the stored input.
class EliminationTrace {
public:
    EliminationTrace(StochasticMatrix input, DenseMatrix workspace,
                     std::vector<double> denominators);

    int size() const { return input_.n(); }
    const StochasticMatrix& input() const { return input_; }
    const DenseMatrix& workspace() const { return workspace_; }

    /// s_level = sum_{k < level} p^level_{level,k}; level in [2..N].
    double denominator(int level) const;
    /// psi_level = p^level_{level,level}; level in [1..N].
    double psi(int level) const;
    /// Raw column coefficient p^level_{i,level} for 1 <= i < level.
    double column_coefficient(int i, int level) const;
    /// Exit-row entry p^level_{level,j} / s_level for 1 <= j < level.
    double exit_probability(int level, int j) const;

    /// The level-k coefficient array (a k x k stochastic matrix), recomputed
    /// from the stored input; k in [1..N].
    DenseMatrix level(int k) const;

private:
    StochasticMatrix input_;
    DenseMatrix workspace_;
    std::vector<double> denominators_;  // denominators_[j-1] = s_j, j >= 2
};

/// One forward-elimination step: reduces an n' x n' coefficient array to
/// (n'-1) x (n'-1) via p_{i,j} + p_{i,n'} p_{n',j} / s_{n'} with the
/// denominator formed as the explicit sum of the exit row (no subtraction
/// anywhere). Throws ZeroDenominatorError when s_{n'} <= 0.
DenseMatrix gth_eliminate_step(const DenseMatrix& level, GthOptions opts = {});

/// Forward eliminations from state N down to state 2.
EliminationTrace gth_forward(const StochasticMatrix& m, GthOptions opts = {});

/// Back substitutions: r_1 = 1, r_j = sum_{i<j} r_i p^j_{i,j} / s_j.
RatioVector gth_back_substitute(const EliminationTrace& trace, GthOptions opts = {});

/// Full GTH solve: forward eliminations, back substitutions, normalization
/// pi_j = r_j / sum_k r_k.
ProbabilityVector gth_solve(const StochasticMatrix& m, GthOptions opts = {});

/// Textbook Gaussian elimination baseline: identical structure to gth_solve
/// except every denominator is formed as 1 - p^n_{n,n}. Mathematically the
/// same answer; in floating point it exists to exhibit the accuracy loss that
/// the explicit-sum rearrangement avoids. Throws PivotUnderflowError when a
/// diagonal reaches machine epsilon.
ProbabilityVector naive_gaussian_solve(const StochasticMatrix& m, GthOptions opts = {});

struct StabilityRow {
    std::string family;
    int n = 0;
    double eps = 0.0;
    double gth_relerr = 0.0;
    double ge_relerr = 0.0;  // NaN when the baseline failed outright
    double gth_ms = 0.0;
    double ge_ms = 0.0;
    std::string note;
};

/// Solves each family instance with gth_solve and naive_gaussian_solve and
/// measures both against the exact rational oracle. `eps_values` applies to
/// the nearly-uncoupled family; pass {0} for families without a coupling
/// parameter.
std::vector<StabilityRow> stability_benchmark(const std::string& family_id,
                                              const std::vector<int>& sizes,
                                              const std::vector<double>& eps_values,
                                              GthOptions opts = {});

}  // namespace gthkit
