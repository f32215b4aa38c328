#include "gthkit/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gthkit/errors.hpp"

namespace gthkit {

void ValidationResult::raise() const {
    if (issue) throw ValidationError(issue->message);
}

namespace {

ValidationResult fail(int row, int col, double deviation, const std::string& message) {
    return ValidationResult{ValidationIssue{row, col, deviation, message}};
}

ValidationResult check_entries(const DenseMatrix& m, double tol) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (!(v >= -tol && v <= 1.0 + tol) || std::isnan(v)) {
                const double dev = v < 0.0 ? -v : v - 1.0;
                std::ostringstream msg;
                msg << "entry (" << i + 1 << "," << j + 1 << ") = " << v
                    << " outside [0,1] by " << dev;
                return fail(i + 1, j + 1, dev, msg.str());
            }
        }
    }
    return {};
}

ValidationResult check_row_sums(const DenseMatrix& m, double tol, bool exact_one) {
    for (int i = 0; i < m.rows(); ++i) {
        const double sum = stable_sum(m.row(i), static_cast<std::size_t>(m.cols()));
        const double dev = sum - 1.0;
        const bool bad = exact_one ? std::fabs(dev) > tol : dev > tol;
        if (bad || std::isnan(sum)) {
            std::ostringstream msg;
            msg << "row " << i + 1 << " sums to " << sum
                << (exact_one ? " (expected 1)" : " (expected <= 1)");
            return fail(i + 1, 0, dev, msg.str());
        }
    }
    return {};
}

}  // namespace

ValidationResult validate_stochastic(const DenseMatrix& m, double tol) {
    if (m.rows() < 1 || m.rows() != m.cols())
        return fail(0, 0, 0.0, "matrix must be square with n >= 1");
    if (auto r = check_entries(m, tol); !r) return r;
    return check_row_sums(m, tol, /*exact_one=*/true);
}

ValidationResult validate_substochastic(const DenseMatrix& m, double tol) {
    if (m.rows() < 1 || m.rows() != m.cols())
        return fail(0, 0, 0.0, "matrix must be square with n >= 1");
    if (auto r = check_entries(m, tol); !r) return r;
    return check_row_sums(m, tol, /*exact_one=*/false);
}

StochasticMatrix StochasticMatrix::checked(DenseMatrix m, double tol) {
    validate_stochastic(m, tol).raise();
    return StochasticMatrix(std::move(m));
}

StochasticMatrix StochasticMatrix::unchecked(DenseMatrix m) {
    return StochasticMatrix(std::move(m));
}

SubstochasticMatrix SubstochasticMatrix::checked(DenseMatrix m, double tol) {
    validate_substochastic(m, tol).raise();
    return SubstochasticMatrix(std::move(m));
}

SubstochasticMatrix SubstochasticMatrix::unchecked(DenseMatrix m) {
    return SubstochasticMatrix(std::move(m));
}

ProbabilityVector ProbabilityVector::checked(std::vector<double> v, double tol) {
    if (v.empty()) throw ValidationError("probability vector must be non-empty");
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] >= -tol) || std::isnan(v[j])) {
            std::ostringstream msg;
            msg << "probability " << j + 1 << " = " << v[j] << " is negative";
            throw ValidationError(msg.str());
        }
    }
    const double sum = stable_sum(v);
    if (std::fabs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << "probabilities sum to " << sum << " (expected 1)";
        throw ValidationError(msg.str());
    }
    return ProbabilityVector(std::move(v));
}

ProbabilityVector ProbabilityVector::unchecked(std::vector<double> v) {
    return ProbabilityVector(std::move(v));
}

double l1_distance(const ProbabilityVector& a, const ProbabilityVector& b) {
    if (a.n() != b.n()) throw ValidationError("l1_distance: length mismatch");
    double d = 0.0;
    for (int i = 0; i < a.n(); ++i) d += std::fabs(a[i] - b[i]);
    return d;
}

Partition Partition::of(int n, std::vector<int> census_states) {
    if (n < 1) throw ValidationError("partition: state count must be >= 1");
    if (census_states.empty()) throw ValidationError("partition: census set must be non-empty");
    std::sort(census_states.begin(), census_states.end());
    for (std::size_t k = 0; k < census_states.size(); ++k) {
        const int s = census_states[k];
        if (s < 1 || s > n) {
            std::ostringstream msg;
            msg << "partition: state " << s << " outside [1," << n << "]";
            throw ValidationError(msg.str());
        }
        if (k > 0 && census_states[k - 1] == s) {
            std::ostringstream msg;
            msg << "partition: duplicate state " << s;
            throw ValidationError(msg.str());
        }
    }
    std::vector<int> complement;
    complement.reserve(n - census_states.size());
    std::size_t at = 0;
    for (int s = 1; s <= n; ++s) {
        if (at < census_states.size() && census_states[at] == s) {
            ++at;
        } else {
            complement.push_back(s);
        }
    }
    return Partition(n, std::move(census_states), std::move(complement));
}

Partition Partition::leading(int n, int k) {
    if (k < 1 || k > n) throw ValidationError("partition: leading size outside [1,n]");
    std::vector<int> census(k);
    for (int s = 1; s <= k; ++s) census[s - 1] = s;
    return Partition::of(n, std::move(census));
}

namespace {

// Reachability sweep over edges p > 0, forward or transposed.
int reach_count(const DenseMatrix& m, bool transpose) {
    const int n = m.rows();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w) {
            if (seen[w]) continue;
            const double p = transpose ? m(w, v) : m(v, w);
            if (p > 0.0) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

bool is_irreducible(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) return false;
    const int n = m.rows();
    return reach_count(m, false) == n && reach_count(m, true) == n;
}

bool is_irreducible(const StochasticMatrix& m) { return is_irreducible(m.dense()); }

}  // namespace gthkit
