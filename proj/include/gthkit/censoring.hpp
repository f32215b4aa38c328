#pragma once

#include <cstdint>
#include <vector>

#include "gthkit/gth.hpp"
#include "gthkit/kernels.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

/// The four blocks of a transition matrix partitioned by a census set E:
///   [ T U ]   rows/cols of E first, then the complement,
///   [ D Q ]   in the partition's (ascending) order.
struct CensorBlocks {
    Partition partition;
    DenseMatrix T, U, D, Q;

    /// Undoes the permutation; equals the original matrix exactly.
    DenseMatrix reassemble() const;
};

CensorBlocks partition_blocks(const StochasticMatrix& m, const Partition& e);

/// How (I-Q)^{-1} D is realized inside censor().
enum class ComplementInverse {
    Solve,    // one LU solve with |E| right-hand sides (the default)
    Neumann,  // truncated series sum_k Q^k D, for substochastic corners
};

/// Transition matrix of the chain watched only on E: T + U (I-Q)^{-1} D.
/// Throws SingularComplementError when the complement block cannot drain
/// back into E (reducible input).
StochasticMatrix censor(const StochasticMatrix& m, const Partition& e,
                        ComplementInverse method = ComplementInverse::Solve,
                        Backend backend = Backend::Auto);

/// Restriction of a stationary vector to E, renormalized:
/// pi^E_j = pi_j / sum_{k in E} pi_k.
ProbabilityVector censor_stationary(const ProbabilityVector& pi, const Partition& e);

/// Expected number of visits to state `level` before the chain (re)enters
/// {1..level-1}, given it starts in state i <= level. For i = level this is
/// 1/s_level >= 1 (the start counts as a visit).
double visits_expected(const EliminationTrace& trace, int level, int i);
double visits_expected(const StochasticMatrix& m, int level, int i);

/// For from = level: probability that the first state visited in
/// {1..level-1} is `to`. For from = i < level: the probability of the joint
/// event "the first return step climbs to `level` and the subsequent entry
/// into {1..level-1} lands on `to`" -- exactly the (i,to) correction term of
/// the censoring update.
double first_entry_probability(const EliminationTrace& trace, int level, int from, int to);
double first_entry_probability(const StochasticMatrix& m, int level, int from, int to);

/// Simulated path of `steps` transitions starting at `start` (1-based
/// states, path has steps+1 entries). Reproducible for a fixed seed on any
/// platform.
std::vector<int> simulate_chain(const StochasticMatrix& m, int start, long steps,
                                std::uint64_t seed);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long paths = 0;
};

/// Monte-Carlo estimate of visits_expected(m, level, start) over `paths`
/// independent seeded paths. Path-parallel; the reduction is over integer
/// counts, so the estimate is independent of the thread count.
McEstimate mc_expected_visits(const StochasticMatrix& m, int level, int start, long paths,
                              std::uint64_t seed, Backend backend = Backend::Auto);

/// Monte-Carlo estimate of first_entry_probability(m, level, from, to).
McEstimate mc_first_entry(const StochasticMatrix& m, int level, int from, int to, long paths,
                          std::uint64_t seed, Backend backend = Backend::Auto);

/// Empirical state-occupancy frequencies over a single long path.
std::vector<double> mc_occupancy(const StochasticMatrix& m, int start, long steps,
                                 std::uint64_t seed);

}  // namespace gthkit
