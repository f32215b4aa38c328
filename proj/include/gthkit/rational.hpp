#pragma once

#include <gmpxx.h>

#include <vector>

#include "gthkit/matrix.hpp"

namespace gthkit {

using Rational = mpq_class;

/// Square matrix of exact rationals. Ground-truth side of the stability
/// comparisons; nothing in here ever rounds.
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    /// Exact conversion: every double is a rational.
    static RationalMatrix from_dense(const DenseMatrix& m);

    int n() const { return n_; }
    Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    DenseMatrix to_dense() const;

private:
    int n_ = 0;
    std::vector<Rational> a_;
};

/// Exact stationary vector of an irreducible rational chain: solves
/// x (I - P) = 0, sum x = 1 by fraction-free (Bareiss) elimination over big
/// integers followed by exact rational back substitution.
/// Throws SingularComplementError when the rank deficiency exceeds the
/// expected single dimension or the null vector is not strictly positive
/// (both mean the input is not an irreducible stochastic matrix).
std::vector<Rational> rational_solve(const RationalMatrix& p);

/// Residual row vector x (I - P), computed exactly.
std::vector<Rational> rational_residual(const RationalMatrix& p, const std::vector<Rational>& x);

/// max_j |approx_j - exact_j| / exact_j, evaluated in exact arithmetic and
/// rounded only at the very end.
double max_componentwise_rel_error(const std::vector<double>& approx,
                                   const std::vector<Rational>& exact);

double to_double(const Rational& q);

}  // namespace gthkit
