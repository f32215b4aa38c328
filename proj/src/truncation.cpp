#include "gthkit/truncation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#include "gthkit/censoring.hpp"
#include "gthkit/errors.hpp"
#include "gthkit/gth.hpp"

namespace gthkit {

AugmentationStrategy AugmentationStrategy::censored() { return {Kind::Censored, 0, {}}; }
AugmentationStrategy AugmentationStrategy::last_column() { return {Kind::LastColumn, 0, {}}; }
AugmentationStrategy AugmentationStrategy::first_column() { return {Kind::FirstColumn, 0, {}}; }
AugmentationStrategy AugmentationStrategy::single_column(int j) { return {Kind::ColumnJ, j, {}}; }
AugmentationStrategy AugmentationStrategy::uniform() { return {Kind::Uniform, 0, {}}; }
AugmentationStrategy AugmentationStrategy::linear(std::vector<double> weights) {
    return {Kind::Linear, 0, std::move(weights)};
}

AugmentationStrategy AugmentationStrategy::parse(const std::string& id) {
    if (id == "censored") return censored();
    if (id == "last") return last_column();
    if (id == "first") return first_column();
    if (id == "uniform") return uniform();
    if (id.rfind("col:", 0) == 0) {
        char* end = nullptr;
        const long j = std::strtol(id.c_str() + 4, &end, 10);
        if (end == id.c_str() + 4 || *end != '\0' || j < 1)
            throw ValidationError("malformed column strategy '" + id + "'");
        return single_column(static_cast<int>(j));
    }
    if (id.rfind("linear:", 0) == 0) {
        std::vector<double> w;
        const char* s = id.c_str() + 7;
        while (*s != '\0') {
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s || (*end != ',' && *end != '\0') || !(v >= 0.0))
                throw ValidationError("malformed linear strategy '" + id + "'");
            w.push_back(v);
            s = (*end == ',') ? end + 1 : end;
        }
        if (w.empty()) throw ValidationError("linear strategy '" + id + "' has no weights");
        return linear(std::move(w));
    }
    throw ValidationError("unknown augmentation strategy '" + id + "'");
}

std::string AugmentationStrategy::id() const {
    switch (kind) {
        case Kind::Censored: return "censored";
        case Kind::LastColumn: return "last";
        case Kind::FirstColumn: return "first";
        case Kind::Uniform: return "uniform";
        case Kind::ColumnJ: return "col:" + std::to_string(column);
        case Kind::Linear: {
            std::string out = "linear:";
            char buf[32];
            for (std::size_t k = 0; k < weights.size(); ++k) {
                std::snprintf(buf, sizeof buf, "%g", weights[k]);
                if (k > 0) out += ',';
                out += buf;
            }
            return out;
        }
    }
    return "?";
}

StochasticMatrix augment(const SubstochasticMatrix& corner, const AugmentationStrategy& strategy) {
    const int n = corner.n();
    std::vector<double> w(n, 0.0);
    switch (strategy.kind) {
        case AugmentationStrategy::Kind::Censored:
            throw ValidationError(
                "the censored strategy rebuilds rows from the chain itself; use "
                "censored_truncation");
        case AugmentationStrategy::Kind::LastColumn: w[n - 1] = 1.0; break;
        case AugmentationStrategy::Kind::FirstColumn: w[0] = 1.0; break;
        case AugmentationStrategy::Kind::ColumnJ:
            if (strategy.column < 1 || strategy.column > n)
                throw ValidationError("augmentation column outside [1,n]");
            w[strategy.column - 1] = 1.0;
            break;
        case AugmentationStrategy::Kind::Uniform:
            for (double& v : w) v = 1.0 / n;
            break;
        case AugmentationStrategy::Kind::Linear: {
            if (static_cast<int>(strategy.weights.size()) != n)
                throw ValidationError("linear augmentation needs exactly n weights");
            const double total = stable_sum(strategy.weights);
            if (!(total > 0.0)) throw ValidationError("linear augmentation weights sum to zero");
            for (int j = 0; j < n; ++j) w[j] = strategy.weights[j] / total;
            break;
        }
    }

    DenseMatrix out = corner.dense();
    for (int i = 0; i < n; ++i) {
        const double deficit = 1.0 - stable_sum(out.row(i), static_cast<std::size_t>(n));
        if (deficit <= 0.0) continue;
        for (int j = 0; j < n; ++j)
            if (w[j] != 0.0) out(i, j) += deficit * w[j];
    }
    return StochasticMatrix::unchecked(std::move(out));
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Dense omega x omega censoring gets expensive and large fast; refuse before
// allocating gigabytes.
constexpr long kOmegaGuard = 20000;

StochasticMatrix realize_outer(const CountableChainSpec& spec, int n, long omega,
                               const AugmentationStrategy& closure, Backend backend) {
    const SubstochasticMatrix corner = northwest_corner(spec, static_cast<int>(omega));
    const StochasticMatrix closed = augment(corner, closure);
    return censor(closed, Partition::leading(static_cast<int>(omega), n),
                  ComplementInverse::Solve, backend);
}

}  // namespace

CensoredTruncation censored_truncation(const CountableChainSpec& spec, int n,
                                       OuterTruncation outer, Backend backend) {
    if (n < 1) throw ValidationError("censored truncation: size must be >= 1");
    long omega = outer.omega > 0 ? outer.omega : 4L * n;
    const long cap = outer.omega_cap > 0 ? outer.omega_cap : 1024L * n;
    if (omega <= n) throw ValidationError("censored truncation: omega must exceed N");

    StochasticMatrix cur = realize_outer(spec, n, omega, outer.closure, backend);
    double gap = 0.0;
    while (true) {
        const long next_omega = omega * 2;
        if (next_omega > cap)
            throw ConvergenceError(gap, "outer truncation hit its cap of " + std::to_string(cap) +
                                            " before the iterates stalled");
        if (next_omega > kOmegaGuard)
            throw ConvergenceError(gap, "outer truncation passed the dense-size guard of " +
                                            std::to_string(kOmegaGuard) +
                                            " before the iterates stalled");
        StochasticMatrix next = realize_outer(spec, n, next_omega, outer.closure, backend);
        gap = max_abs_diff(cur.dense(), next.dense());
        if (gap < outer.tol) return CensoredTruncation{std::move(next), next_omega, gap};
        cur = std::move(next);
        omega = next_omega;
    }
}

double l1_truncation_error(const ProbabilityVector& estimate, const CountableChainSpec& spec,
                           int n) {
    if (estimate.n() != n) throw ValidationError("l1 error: estimate length differs from N");
    if (!spec.has_exact_stationary())
        throw ValidationError("family '" + spec.id + "' has no analytic stationary distribution");
    double inside = 0.0;
    for (int k = 1; k <= n; ++k) inside += std::fabs(estimate[k - 1] - spec.exact_stationary(k));
    return inside + spec.stationary_tail(n);
}

TruncationReport compare_augmentations(const CountableChainSpec& spec, std::vector<int> sizes,
                                       std::vector<AugmentationStrategy> strategies,
                                       OuterTruncation outer, Backend backend) {
    if (sizes.empty() || strategies.empty())
        throw ValidationError("comparison needs at least one size and one strategy");
    spec.stationary_tail(0);  // fail early when no analytic distribution exists

    TruncationReport report;
    report.family = spec.id;
    const int cells = static_cast<int>(sizes.size() * strategies.size());
    report.rows.resize(cells);

    // Cells are independent; at most one gth_solve plus one truncation build
    // each, so a dynamic schedule over the grid is all the parallelism
    // needed.
    const bool par = use_parallel(backend, static_cast<long long>(cells) * 4096);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
    for (int c = 0; c < cells; ++c) {
        const AugmentationStrategy& strat = strategies[c / sizes.size()];
        const int n = sizes[c % sizes.size()];
        TruncationRow row;
        row.strategy = strat.id();
        row.n = n;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ProbabilityVector pi = [&] {
                if (strat.kind == AugmentationStrategy::Kind::Censored) {
                    CensoredTruncation ct = censored_truncation(spec, n, outer, backend);
                    row.stall_gap = ct.stall_gap;
                    return gth_solve(ct.matrix);
                }
                return gth_solve(augment(northwest_corner(spec, n), strat));
            }();
            row.l1_error = l1_truncation_error(pi, spec, n);
            row.stationary = std::move(pi).values();
            row.ok = true;
        } catch (const NumericalError& e) {
            row.error = e.what();
        } catch (const ValidationError& e) {
            row.error = e.what();
        }
        row.runtime_ms = elapsed_ms(t0);
        report.rows[c] = std::move(row);
    }

    for (std::size_t s = 0; s < strategies.size(); ++s) {
        if (strategies[s].kind != AugmentationStrategy::Kind::Censored) continue;
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const TruncationRow& cen = report.rows[s * sizes.size() + k];
            if (!cen.ok) continue;
            for (std::size_t o = 0; o < strategies.size(); ++o) {
                const TruncationRow& other = report.rows[o * sizes.size() + k];
                if (o == s || !other.ok) continue;
                report.max_violation =
                    std::max(report.max_violation, cen.l1_error - other.l1_error);
            }
        }
    }
    report.censored_minimal = report.max_violation <= 1e-12;
    return report;
}

std::vector<ConvergenceRow> convergence_study(const CountableChainSpec& spec,
                                              const AugmentationStrategy& strategy,
                                              std::vector<int> sizes, int window,
                                              OuterTruncation outer, Backend backend) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(sizes.size());
    for (int n : sizes) {
        StochasticMatrix m = [&] {
            if (strategy.kind == AugmentationStrategy::Kind::Censored)
                return censored_truncation(spec, n, outer, backend).matrix;
            return augment(northwest_corner(spec, n), strategy);
        }();
        ConvergenceRow row;
        row.n = n;
        row.l1_error = l1_truncation_error(gth_solve(m), spec, n);
        const int win = std::min(window, n);
        for (int i = 1; i <= win; ++i)
            for (int j = 1; j <= win; ++j)
                row.window_gap =
                    std::max(row.window_gap, std::fabs(m(i - 1, j - 1) - spec.kernel(i, j)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gthkit
