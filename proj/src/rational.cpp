#include "gthkit/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "gthkit/errors.hpp"

namespace gthkit {

RationalMatrix RationalMatrix::from_dense(const DenseMatrix& m) {
    RationalMatrix q(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) q.at(i, j) = Rational(m(i, j));
    return q;
}

DenseMatrix RationalMatrix::to_dense() const {
    DenseMatrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = at(i, j).get_d();
    return m;
}

double to_double(const Rational& q) { return q.get_d(); }

namespace {

// Rows of (I - P)^T scaled by the lcm of their denominators. Scaling rows of
// the coefficient matrix leaves the null space untouched.
std::vector<mpz_class> integer_system(const RationalMatrix& p) {
    const int n = p.n();
    std::vector<mpz_class> m(static_cast<std::size_t>(n) * n);
    mpz_class lcm, factor;
    for (int i = 0; i < n; ++i) {
        lcm = 1;
        for (int j = 0; j < n; ++j) {
            // a(i, j) = (I - P)^T (i, j) = delta_ij - p(j, i)
            Rational a = -p.at(j, i);
            if (i == j) a += 1;
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a.get_den().get_mpz_t());
        }
        for (int j = 0; j < n; ++j) {
            Rational a = -p.at(j, i);
            if (i == j) a += 1;
            mpz_divexact(factor.get_mpz_t(), lcm.get_mpz_t(), a.get_den().get_mpz_t());
            m[static_cast<std::size_t>(i) * n + j] = a.get_num() * factor;
        }
    }
    return m;
}

}  // namespace

std::vector<Rational> rational_solve(const RationalMatrix& p) {
    const int n = p.n();
    if (n < 1) throw ValidationError("rational_solve: empty matrix");
    std::vector<mpz_class> m = integer_system(p);
    auto at = [&](int i, int j) -> mpz_class& { return m[static_cast<std::size_t>(i) * n + j]; };

    // Fraction-free row echelon with column pivoting. After each step the
    // entries are minors of the scaled input, so the division is exact.
    std::vector<int> pivot_col;
    pivot_col.reserve(n);
    int free_col = -1;
    mpz_class prev = 1, num, t;
    int r = 0;
    for (int col = 0; col < n && r < n; ++col) {
        int piv = -1;
        for (int i = r; i < n; ++i) {
            if (at(i, col) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) {
            if (free_col >= 0)
                throw SingularComplementError(
                    "exact solve: rank deficiency above 1, chain is reducible");
            free_col = col;
            continue;
        }
        if (piv != r)
            for (int j = 0; j < n; ++j) std::swap(at(r, j), at(piv, j));
        for (int i = r + 1; i < n; ++i) {
            for (int j = col + 1; j < n; ++j) {
                num = at(r, col) * at(i, j) - at(i, col) * at(r, j);
                mpz_divexact(t.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = t;
            }
            at(i, col) = 0;
        }
        prev = at(r, col);
        pivot_col.push_back(col);
        ++r;
    }
    if (free_col < 0) free_col = n - 1;  // columns exhausted before rows
    if (static_cast<int>(pivot_col.size()) != n - 1)
        throw SingularComplementError("exact solve: rank deficiency above 1, chain is reducible");

    std::vector<Rational> x(n);
    x[free_col] = 1;
    for (int k = n - 2; k >= 0; --k) {
        const int c = pivot_col[k];
        Rational sum = 0;
        for (int j = c + 1; j < n; ++j) {
            if (at(k, j) != 0 && x[j] != 0) sum += Rational(at(k, j)) * x[j];
        }
        x[c] = -sum / Rational(at(k, c));
    }

    int sign = 0;
    for (int j = 0; j < n; ++j) {
        const int s = sgn(x[j]);
        if (s == 0) throw SingularComplementError("exact solve: null vector has a zero entry");
        if (sign == 0) sign = s;
        if (s != sign) throw SingularComplementError("exact solve: null vector changes sign");
    }
    Rational total = 0;
    for (int j = 0; j < n; ++j) total += x[j];
    for (int j = 0; j < n; ++j) {
        x[j] /= total;
        x[j].canonicalize();
    }
    return x;
}

std::vector<Rational> rational_residual(const RationalMatrix& p, const std::vector<Rational>& x) {
    const int n = p.n();
    if (static_cast<int>(x.size()) != n)
        throw ValidationError("rational_residual: length mismatch");
    std::vector<Rational> res(n);
    for (int j = 0; j < n; ++j) {
        Rational s = x[j];
        for (int i = 0; i < n; ++i) {
            if (p.at(i, j) != 0 && x[i] != 0) s -= x[i] * p.at(i, j);
        }
        res[j] = s;
    }
    return res;
}

double max_componentwise_rel_error(const std::vector<double>& approx,
                                   const std::vector<Rational>& exact) {
    if (approx.size() != exact.size())
        throw ValidationError("relative error: length mismatch");
    Rational worst = 0;
    for (std::size_t j = 0; j < exact.size(); ++j) {
        if (exact[j] == 0) {
            if (approx[j] == 0.0) continue;
            return std::numeric_limits<double>::infinity();
        }
        Rational diff = Rational(approx[j]) - exact[j];
        if (diff < 0) diff = -diff;
        Rational denom = exact[j] < 0 ? Rational(-exact[j]) : exact[j];
        Rational rel = diff / denom;
        if (rel > worst) worst = rel;
    }
    return worst.get_d();
}

}  // namespace gthkit
