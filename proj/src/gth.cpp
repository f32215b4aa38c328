#include "gthkit/gth.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "gthkit/errors.hpp"
#include "gthkit/families.hpp"
#include "gthkit/rational.hpp"

namespace gthkit {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Denominator of one elimination level: the explicit sum of the exit row,
// never 1 - diagonal.
double level_denominator(const double* exit_row, int len, bool compensated) {
    if (compensated) return stable_sum(exit_row, static_cast<std::size_t>(len));
    double s = 0.0;
    for (int k = 0; k < len; ++k) s += exit_row[k];
    return s;
}

[[noreturn]] void throw_zero_denominator(int level, double s) {
    throw ZeroDenominatorError(
        level, "elimination level " + std::to_string(level) + ": exit-row sum " +
                   std::to_string(s) +
                   " is not positive, the state cannot reach any lower state");
}

}  // namespace

EliminationTrace::EliminationTrace(StochasticMatrix input, DenseMatrix workspace,
                                   std::vector<double> denominators)
    : input_(std::move(input)),
      workspace_(std::move(workspace)),
      denominators_(std::move(denominators)) {}

double EliminationTrace::denominator(int level) const {
    if (level < 2 || level > size())
        throw ValidationError("denominator: level outside [2,N]");
    return denominators_[level - 1];
}

double EliminationTrace::psi(int level) const {
    if (level < 1 || level > size()) throw ValidationError("psi: level outside [1,N]");
    return workspace_(level - 1, level - 1);
}

double EliminationTrace::column_coefficient(int i, int level) const {
    if (level < 2 || level > size() || i < 1 || i >= level)
        throw ValidationError("column_coefficient: need 1 <= i < level <= N");
    return workspace_(i - 1, level - 1);
}

double EliminationTrace::exit_probability(int level, int j) const {
    if (level < 2 || level > size() || j < 1 || j >= level)
        throw ValidationError("exit_probability: need 1 <= j < level <= N");
    return workspace_(level - 1, j - 1);
}

DenseMatrix EliminationTrace::level(int k) const {
    if (k < 1 || k > size()) throw ValidationError("level: k outside [1,N]");
    DenseMatrix cur = input_.dense();
    for (int m = size(); m > k; --m) cur = gth_eliminate_step(cur);
    return cur;
}

DenseMatrix gth_eliminate_step(const DenseMatrix& level, GthOptions opts) {
    const int k = level.rows();
    if (k < 2 || level.cols() != k)
        throw ValidationError("eliminate step: need a square array of size >= 2");
    const double s = level_denominator(level.row(k - 1), k - 1, opts.compensated_sums);
    if (!(s > 0.0)) throw_zero_denominator(k, s);
    DenseMatrix out(k - 1, k - 1);
    for (int j = 0; j < k - 1; ++j) {
        const double ex = level(k - 1, j) / s;
        if (ex == 0.0) {
            for (int i = 0; i < k - 1; ++i) out(i, j) = level(i, j);
        } else {
            for (int i = 0; i < k - 1; ++i) out(i, j) = level(i, j) + level(i, k - 1) * ex;
        }
    }
    return out;
}

namespace {

// Shared forward sweep; `naive` switches the denominator to 1 - diagonal,
// everything else is identical.
EliminationTrace forward_sweep(const StochasticMatrix& m, GthOptions opts, bool naive) {
    const int n = m.n();
    DenseMatrix w = m.dense();
    std::vector<double> denominators(n, 0.0);
    for (int level = n; level >= 2; --level) {
        double s;
        if (naive) {
            s = 1.0 - w(level - 1, level - 1);
            if (s <= std::numeric_limits<double>::epsilon())
                throw PivotUnderflowError(
                    level, s,
                    "gaussian elimination level " + std::to_string(level) +
                        ": pivot 1 - diagonal reached machine epsilon");
        } else {
            s = level_denominator(w.row(level - 1), level - 1, opts.compensated_sums);
            if (!(s > 0.0)) throw_zero_denominator(level, s);
        }
        denominators[level - 1] = s;
        for (int j = 0; j < level - 1; ++j) w(level - 1, j) /= s;
        elimination_update(w, level, opts.backend);
    }
    return EliminationTrace(m, std::move(w), std::move(denominators));
}

}  // namespace

EliminationTrace gth_forward(const StochasticMatrix& m, GthOptions opts) {
    return forward_sweep(m, opts, /*naive=*/false);
}

RatioVector gth_back_substitute(const EliminationTrace& trace, GthOptions opts) {
    const int n = trace.size();
    const DenseMatrix& w = trace.workspace();
    RatioVector r;
    r.values.assign(n, 0.0);
    r.values[0] = 1.0;
    for (int j = 2; j <= n; ++j) {
        double sum;
        if (opts.compensated_sums) {
            double acc = 0.0, comp = 0.0;
            for (int i = 1; i < j; ++i) {
                const double term = r.values[i - 1] * w(i - 1, j - 1);
                const double t = acc + term;
                if (std::fabs(acc) >= std::fabs(term))
                    comp += (acc - t) + term;
                else
                    comp += (term - t) + acc;
                acc = t;
            }
            sum = acc + comp;
        } else {
            sum = 0.0;
            for (int i = 1; i < j; ++i) sum += r.values[i - 1] * w(i - 1, j - 1);
        }
        r.values[j - 1] = sum / trace.denominator(j);
    }
    return r;
}

namespace {

ProbabilityVector normalize_ratios(RatioVector r) {
    const double total = stable_sum(r.values);
    for (double& x : r.values) x /= total;
    return ProbabilityVector::unchecked(std::move(r.values));
}

}  // namespace

ProbabilityVector gth_solve(const StochasticMatrix& m, GthOptions opts) {
    return normalize_ratios(gth_back_substitute(gth_forward(m, opts), opts));
}

ProbabilityVector naive_gaussian_solve(const StochasticMatrix& m, GthOptions opts) {
    return normalize_ratios(gth_back_substitute(forward_sweep(m, opts, /*naive=*/true), opts));
}

std::vector<StabilityRow> stability_benchmark(const std::string& family_id,
                                              const std::vector<int>& sizes,
                                              const std::vector<double>& eps_values,
                                              GthOptions opts) {
    std::vector<StabilityRow> rows;
    for (int n : sizes) {
        for (double eps : eps_values) {
            StochasticMatrix m = [&]() {
                if (family_id == "ncd") return nearly_uncoupled_chain(n, eps);
                if (family_id == "rand")
                    return random_dense_chain(n, 1000 + static_cast<std::uint64_t>(n));
                return finite_family_instance(family_id, n);
            }();
            const std::vector<Rational> exact =
                rational_solve(RationalMatrix::from_dense(m.dense()));

            StabilityRow row;
            row.family = family_id;
            row.n = n;
            row.eps = eps;

            auto t0 = std::chrono::steady_clock::now();
            const ProbabilityVector pi = gth_solve(m, opts);
            row.gth_ms = elapsed_ms(t0);
            row.gth_relerr = max_componentwise_rel_error(pi.values(), exact);

            t0 = std::chrono::steady_clock::now();
            try {
                const ProbabilityVector ge = naive_gaussian_solve(m, opts);
                row.ge_ms = elapsed_ms(t0);
                row.ge_relerr = max_componentwise_rel_error(ge.values(), exact);
            } catch (const NumericalError& e) {
                row.ge_ms = elapsed_ms(t0);
                row.ge_relerr = std::numeric_limits<double>::quiet_NaN();
                row.note = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace gthkit
