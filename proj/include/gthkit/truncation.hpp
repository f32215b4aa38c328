#pragma once

#include <string>
#include <vector>

#include "gthkit/families.hpp"
#include "gthkit/kernels.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

/// How the row deficits of a northwest corner are put back to make it
/// stochastic.
struct AugmentationStrategy {
    enum class Kind { Censored, LastColumn, FirstColumn, ColumnJ, Linear, Uniform };

    Kind kind = Kind::LastColumn;
    int column = 0;  // 1-based target column for ColumnJ
    std::vector<double> weights;

    static AugmentationStrategy censored();
    static AugmentationStrategy last_column();
    static AugmentationStrategy first_column();
    static AugmentationStrategy single_column(int j);
    static AugmentationStrategy uniform();
    static AugmentationStrategy linear(std::vector<double> weights);

    /// "censored" | "last" | "first" | "col:J" | "uniform" | "linear:w1,w2,..."
    static AugmentationStrategy parse(const std::string& id);
    std::string id() const;
};

/// T_N + A_N where A_N places each row's deficit per the strategy. The
/// censored strategy is not valid here (it needs the chain spec, not just the
/// corner); use censored_truncation.
StochasticMatrix augment(const SubstochasticMatrix& corner, const AugmentationStrategy& strategy);

/// Outer-truncation device for realizing the censored chain: close the
/// omega x omega corner with `closure`, censor it to {1..N}, and double omega
/// until successive results stall below `tol`. Zero fields take their
/// defaults (omega = 4N, cap = 1024N).
struct OuterTruncation {
    long omega = 0;
    long omega_cap = 0;
    AugmentationStrategy closure = AugmentationStrategy::last_column();
    double tol = 1e-12;
};

struct CensoredTruncation {
    StochasticMatrix matrix;
    long omega = 0;        // outer size at which the doubling stalled
    double stall_gap = 0;  // max-entry gap between the last two iterates
};

/// The converged approximation of the true censored chain P^{E_N}. Throws
/// ConvergenceError (with the last gap) if the doubling hits the cap.
CensoredTruncation censored_truncation(const CountableChainSpec& spec, int n,
                                       OuterTruncation outer = {},
                                       Backend backend = Backend::Auto);

/// l1(N, infinity) = sum_{k<=N} |estimate_k - pi_k| + sum_{k>N} pi_k.
/// Requires the spec's analytic stationary distribution.
double l1_truncation_error(const ProbabilityVector& estimate, const CountableChainSpec& spec,
                           int n);

struct TruncationRow {
    std::string strategy;
    int n = 0;
    std::vector<double> stationary;
    double l1_error = 0.0;
    double runtime_ms = 0.0;
    double stall_gap = 0.0;  // censored rows only
    bool ok = false;
    std::string error;
};

struct TruncationReport {
    std::string family;
    std::vector<TruncationRow> rows;
    /// The censored strategy's error is minimal at every N (within 1e-12).
    bool censored_minimal = true;
    double max_violation = 0.0;
};

/// Builds every (strategy, N) cell, solves it, and measures the l1 error.
/// Cells run independently (grid-parallel); rows come back sorted by the
/// given strategy order, then N. Reducible cells are reported and skipped.
TruncationReport compare_augmentations(const CountableChainSpec& spec, std::vector<int> sizes,
                                       std::vector<AugmentationStrategy> strategies,
                                       OuterTruncation outer = {},
                                       Backend backend = Backend::Auto);

struct ConvergenceRow {
    int n = 0;
    double l1_error = 0.0;
    /// max entry gap between the built N-state matrix and the spec's kernel
    /// over the fixed leading window.
    double window_gap = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const CountableChainSpec& spec,
                                              const AugmentationStrategy& strategy,
                                              std::vector<int> sizes, int window = 3,
                                              OuterTruncation outer = {},
                                              Backend backend = Backend::Auto);

}  // namespace gthkit
