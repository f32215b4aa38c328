#pragma once

#include <vector>

#include "gthkit/censoring.hpp"
#include "gthkit/gth.hpp"
#include "gthkit/stochastic.hpp"

namespace gthkit {

/// The factors of I - P = (I - R_U)(I - Psi_D)(I - G_L):
///   r_measures : strictly upper; r(i,j) = expected visits to j before
///                hitting any state below j, starting from i < j
///   return_probs : psi_j, the censored self-transition probability of the
///                  level-j chain (psi_1 carries the rank deficiency)
///   g_measures : strictly lower; g(i,j) = probability that the first entry
///                into the states below i lands on j
struct RgFactors {
    int n = 0;
    DenseMatrix r_measures;
    std::vector<double> return_probs;
    DenseMatrix g_measures;
};

/// Reads the factors off the forward-elimination workspace:
/// r_{i,n} = p^n_{i,n} / s_n, g_{n,j} = p^n_{n,j} / s_n, psi_n = p^n_{n,n}.
RgFactors rg_factorize(const EliminationTrace& trace);
RgFactors rg_factorize(const StochasticMatrix& m, GthOptions opts = {});

/// The triple product (I - R_U)(I - Psi_D)(I - G_L); callers compare it to
/// I - P.
DenseMatrix rg_reconstruct(const RgFactors& f, Backend backend = Backend::Auto);

/// max |(I - R_U)(I - Psi_D)(I - G_L) - (I - P)|.
double rg_reconstruction_residual(const RgFactors& f, const StochasticMatrix& m,
                                  Backend backend = Backend::Auto);

/// The same measures computed directly from their first-passage definitions
/// by solving taboo linear systems on the original matrix -- an oracle
/// independent of the elimination arrays. i <= j queries the r-measure
/// (i == j gives the diagonal visit count 1/(1-psi_j), which is not stored in
/// r_measures); i > j queries the g-measure.
double rg_measure_firstpassage(const StochasticMatrix& m, int i, int j);

/// Numerical check of the invariance of RG-measures under censoring: factors
/// of censor(m, {1..level}) against the factors of m, over every index pair
/// both chains share.
struct InvarianceReport {
    int level = 0;
    double max_r_gap = 0.0;
    double max_g_gap = 0.0;
    double max_psi_gap = 0.0;
    double max_gap() const;
};
InvarianceReport verify_censoring_invariance(const StochasticMatrix& m, int level);

/// Stationary vector obtained from the factors alone: the back substitution
/// r_j = sum_{i<j} r_i r_{i,j} followed by normalization.
ProbabilityVector solve_via_rg(const RgFactors& f);

}  // namespace gthkit
