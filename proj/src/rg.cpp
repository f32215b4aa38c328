#include "gthkit/rg.hpp"

#include <algorithm>
#include <cmath>

#include "gthkit/errors.hpp"
#include "gthkit/kernels.hpp"

namespace gthkit {

RgFactors rg_factorize(const EliminationTrace& trace) {
    const int n = trace.size();
    RgFactors f;
    f.n = n;
    f.r_measures = DenseMatrix(n, n);
    f.g_measures = DenseMatrix(n, n);
    f.return_probs.resize(n);
    for (int j = 1; j <= n; ++j) f.return_probs[j - 1] = trace.psi(j);
    for (int j = 2; j <= n; ++j) {
        const double s = trace.denominator(j);
        for (int i = 1; i < j; ++i) {
            f.r_measures(i - 1, j - 1) = trace.column_coefficient(i, j) / s;
            f.g_measures(j - 1, i - 1) = trace.exit_probability(j, i);
        }
    }
    return f;
}

RgFactors rg_factorize(const StochasticMatrix& m, GthOptions opts) {
    return rg_factorize(gth_forward(m, opts));
}

DenseMatrix rg_reconstruct(const RgFactors& f, Backend backend) {
    const int n = f.n;
    DenseMatrix iu(n, n), id(n, n), il(n, n);
    for (int i = 0; i < n; ++i) {
        iu(i, i) = 1.0;
        il(i, i) = 1.0;
        id(i, i) = 1.0 - f.return_probs[i];
        for (int j = i + 1; j < n; ++j) iu(i, j) = -f.r_measures(i, j);
        for (int j = 0; j < i; ++j) il(i, j) = -f.g_measures(i, j);
    }
    return matmul(matmul(iu, id, backend), il, backend);
}

double rg_reconstruction_residual(const RgFactors& f, const StochasticMatrix& m,
                                  Backend backend) {
    if (f.n != m.n()) throw ValidationError("factor size does not match the matrix");
    DenseMatrix ip(f.n, f.n);
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) ip(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    return max_abs_diff(rg_reconstruct(f, backend), ip);
}

double rg_measure_firstpassage(const StochasticMatrix& m, int i, int j) {
    const int n = m.n();
    if (i < 1 || i > n || j < 1 || j > n)
        throw ValidationError("first-passage measure: indices outside [1,n]");
    // The taboo set is everything below the larger index; the linear system
    // runs over the remaining states.
    const int base = std::max(i, j);
    if (base < 2)
        throw ValidationError("first-passage measure: the (1,1) visit count diverges");
    const int k = n - base + 1;  // states base..n
    DenseMatrix sys(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            sys(a, b) = (a == b ? 1.0 : 0.0) - m(base - 1 + a, base - 1 + b);
    auto f = lu_factor(std::move(sys));
    if (!f)
        throw SingularComplementError(
            "first-passage system is singular: states above the taboo set do not drain");

    std::vector<double> rhs(k, 0.0);
    if (i >= j) {
        if (i == j) {
            // Expected visits to j before entering {1..j-1}, started at j.
            rhs[0] = 1.0;
            return lu_solve(*f, rhs)[0];
        }
        // g-measure: first entry into {1..i-1} lands on j, started at i.
        for (int a = 0; a < k; ++a) rhs[a] = m(base - 1 + a, j - 1);
        return lu_solve(*f, rhs)[0];
    }
    // r-measure: expected visits to j before entering {1..j-1}, started at
    // i < j; the start sits inside the taboo set, so condition on the first
    // step leaving it.
    rhs[0] = 1.0;
    const std::vector<double> visits = lu_solve(*f, rhs);
    double r = 0.0;
    for (int a = 0; a < k; ++a) r += m(i - 1, base - 1 + a) * visits[a];
    return r;
}

double InvarianceReport::max_gap() const {
    return std::max(max_r_gap, std::max(max_g_gap, max_psi_gap));
}

InvarianceReport verify_censoring_invariance(const StochasticMatrix& m, int level) {
    if (level < 1 || level > m.n())
        throw ValidationError("invariance check: level outside [1,N]");
    const RgFactors full = rg_factorize(m);
    const RgFactors part = rg_factorize(censor(m, Partition::leading(m.n(), level)));

    InvarianceReport rep;
    rep.level = level;
    for (int j = 1; j <= level; ++j) {
        rep.max_psi_gap = std::max(
            rep.max_psi_gap, std::fabs(full.return_probs[j - 1] - part.return_probs[j - 1]));
        for (int i = 1; i < j; ++i) {
            rep.max_r_gap =
                std::max(rep.max_r_gap,
                         std::fabs(full.r_measures(i - 1, j - 1) - part.r_measures(i - 1, j - 1)));
            rep.max_g_gap =
                std::max(rep.max_g_gap,
                         std::fabs(full.g_measures(j - 1, i - 1) - part.g_measures(j - 1, i - 1)));
        }
    }
    return rep;
}

ProbabilityVector solve_via_rg(const RgFactors& f) {
    if (f.n < 1) throw ValidationError("solve: empty factorization");
    std::vector<double> r(f.n, 0.0);
    r[0] = 1.0;
    for (int j = 1; j < f.n; ++j) {
        double sum = 0.0;
        for (int i = 0; i < j; ++i) sum += r[i] * f.r_measures(i, j);
        r[j] = sum;
    }
    const double total = stable_sum(r);
    for (double& x : r) x /= total;
    return ProbabilityVector::unchecked(std::move(r));
}

}  // namespace gthkit
