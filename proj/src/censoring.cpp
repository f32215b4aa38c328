#include "gthkit/censoring.hpp"

#include <cmath>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gthkit/errors.hpp"

namespace gthkit {

DenseMatrix CensorBlocks::reassemble() const {
    const int ne = static_cast<int>(partition.census().size());
    const int nc = static_cast<int>(partition.complement().size());
    DenseMatrix out(partition.n(), partition.n());
    auto place = [&](const DenseMatrix& block, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b)
                out(rows[a] - 1, cols[b] - 1) = block(static_cast<int>(a), static_cast<int>(b));
    };
    if (ne > 0) place(T, partition.census(), partition.census());
    if (ne > 0 && nc > 0) {
        place(U, partition.census(), partition.complement());
        place(D, partition.complement(), partition.census());
    }
    if (nc > 0) place(Q, partition.complement(), partition.complement());
    return out;
}

CensorBlocks partition_blocks(const StochasticMatrix& m, const Partition& e) {
    if (e.n() != m.n()) throw ValidationError("partition size does not match the matrix");
    const std::vector<int>& ce = e.census();
    const std::vector<int>& co = e.complement();
    const int ne = static_cast<int>(ce.size());
    const int nc = static_cast<int>(co.size());
    CensorBlocks b{e, DenseMatrix(ne, ne), DenseMatrix(ne, nc), DenseMatrix(nc, ne),
                   DenseMatrix(nc, nc)};
    for (int a = 0; a < ne; ++a)
        for (int c = 0; c < ne; ++c) b.T(a, c) = m(ce[a] - 1, ce[c] - 1);
    for (int a = 0; a < ne; ++a)
        for (int c = 0; c < nc; ++c) b.U(a, c) = m(ce[a] - 1, co[c] - 1);
    for (int a = 0; a < nc; ++a)
        for (int c = 0; c < ne; ++c) b.D(a, c) = m(co[a] - 1, ce[c] - 1);
    for (int a = 0; a < nc; ++a)
        for (int c = 0; c < nc; ++c) b.Q(a, c) = m(co[a] - 1, co[c] - 1);
    return b;
}

namespace {

// sum_k Q^k D by iterated multiplication; valid when Q's spectral radius is
// below 1, which censoring guarantees for chains that drain back into E.
DenseMatrix neumann_inverse_apply(const DenseMatrix& q, const DenseMatrix& d, Backend backend) {
    DenseMatrix total = d;
    DenseMatrix term = d, next;
    const long cap = 1000000;
    for (long it = 0; it < cap; ++it) {
        matmul(q, term, next, backend);
        term = next;
        double biggest = 0.0;
        for (int i = 0; i < term.rows(); ++i)
            for (int j = 0; j < term.cols(); ++j) {
                total(i, j) += term(i, j);
                biggest = std::max(biggest, term(i, j));
            }
        if (biggest < 1e-18) return total;
    }
    throw ConvergenceError(0.0, "complement series did not converge; chain may not drain");
}

}  // namespace

StochasticMatrix censor(const StochasticMatrix& m, const Partition& e, ComplementInverse method,
                        Backend backend) {
    if (e.n() != m.n()) throw ValidationError("partition size does not match the matrix");
    if (e.is_full()) return m;
    CensorBlocks b = partition_blocks(m, e);

    const int nc = b.Q.rows();
    DenseMatrix x;  // (I - Q)^{-1} D
    if (method == ComplementInverse::Solve) {
        DenseMatrix iq(nc, nc);
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j) iq(i, j) = (i == j ? 1.0 : 0.0) - b.Q(i, j);
        auto f = lu_factor(std::move(iq));
        if (!f)
            throw SingularComplementError(
                "I - Q is singular: the complement does not drain back into the census set");
        x = lu_solve(*f, b.D, backend);
    } else {
        x = neumann_inverse_apply(b.Q, b.D, backend);
    }

    DenseMatrix correction = matmul(b.U, x, backend);
    const int ne = b.T.rows();
    DenseMatrix watched(ne, ne);
    for (int i = 0; i < ne; ++i)
        for (int j = 0; j < ne; ++j) watched(i, j) = b.T(i, j) + correction(i, j);
    // A complement that keeps mass forever (no drain back into E) shows up
    // here as a row deficit; the Neumann path cannot detect it from the
    // series alone, since a zero D makes every term vanish.
    if (const ValidationResult v = validate_stochastic(watched, 1e-6); !v.ok())
        throw SingularComplementError("censored chain lost mass: " + v.issue->message);
    return StochasticMatrix::unchecked(std::move(watched));
}

ProbabilityVector censor_stationary(const ProbabilityVector& pi, const Partition& e) {
    if (e.n() != pi.n()) throw ValidationError("partition size does not match the vector");
    std::vector<double> restricted;
    restricted.reserve(e.census().size());
    for (int s : e.census()) restricted.push_back(pi[s - 1]);
    const double mass = stable_sum(restricted);
    if (!(mass > 0.0))
        throw ValidationError("stationary mass of the census set is zero");
    for (double& x : restricted) x /= mass;
    return ProbabilityVector::unchecked(std::move(restricted));
}

double visits_expected(const EliminationTrace& trace, int level, int i) {
    if (level < 2 || level > trace.size())
        throw ValidationError("visits_expected: level outside [2,N]");
    if (i < 1 || i > level) throw ValidationError("visits_expected: need 1 <= i <= level");
    const double s = trace.denominator(level);
    if (i == level) return 1.0 / s;
    return trace.column_coefficient(i, level) / s;
}

double visits_expected(const StochasticMatrix& m, int level, int i) {
    return visits_expected(gth_forward(m), level, i);
}

double first_entry_probability(const EliminationTrace& trace, int level, int from, int to) {
    if (level < 2 || level > trace.size())
        throw ValidationError("first_entry_probability: level outside [2,N]");
    if (to < 1 || to >= level)
        throw ValidationError("first_entry_probability: need 1 <= to < level");
    if (from < 1 || from > level)
        throw ValidationError("first_entry_probability: need 1 <= from <= level");
    if (from == level) return trace.exit_probability(level, to);
    return trace.column_coefficient(from, level) * trace.exit_probability(level, to);
}

double first_entry_probability(const StochasticMatrix& m, int level, int from, int to) {
    return first_entry_probability(gth_forward(m), level, from, to);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double next_uniform(std::mt19937_64& gen) {
    // 53 uniform bits; identical on every platform, unlike the library
    // distributions.
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// One transition by cumulative scan of the row. The leftover u >= row total
// (possible only through rounding) falls to the last positive entry.
int step_state(const DenseMatrix& p, int cur, std::mt19937_64& gen) {
    const double u = next_uniform(gen);
    const double* row = p.row(cur);
    const int n = p.cols();
    double acc = 0.0;
    int last_positive = cur;
    for (int j = 0; j < n; ++j) {
        if (row[j] <= 0.0) continue;
        acc += row[j];
        last_positive = j;
        if (u < acc) return j;
    }
    return last_positive;
}

constexpr long kPathStepCap = 10000000;

// Visits to `level` before the first arrival in {1..level-1}, raw-chain walk.
// The start never counts as an arrival; it counts as a visit when it is
// `level` itself.
long walk_visits(const DenseMatrix& p, int level, int start, std::mt19937_64& gen) {
    int cur = start - 1;
    long visits = (start == level) ? 1 : 0;
    for (long t = 0; t < kPathStepCap; ++t) {
        cur = step_state(p, cur, gen);
        if (cur < level - 1) return visits;
        if (cur == level - 1) ++visits;
    }
    throw ConvergenceError(static_cast<double>(kPathStepCap),
                           "simulated path failed to enter the lower set");
}

// Indicator of "visited `level`, then the first arrival in {1..level-1} was
// `to`".
bool walk_first_entry(const DenseMatrix& p, int level, int from, int to, std::mt19937_64& gen) {
    int cur = from - 1;
    bool climbed = (from == level);
    for (long t = 0; t < kPathStepCap; ++t) {
        cur = step_state(p, cur, gen);
        if (cur == level - 1) climbed = true;
        if (cur < level - 1) return climbed && cur == to - 1;
    }
    throw ConvergenceError(static_cast<double>(kPathStepCap),
                           "simulated path failed to enter the lower set");
}

McEstimate moments_to_estimate(unsigned long long total, unsigned __int128 total_sq,
                               long paths) {
    McEstimate est;
    est.paths = paths;
    est.mean = static_cast<double>(total) / static_cast<double>(paths);
    if (paths > 1) {
        const double sq = static_cast<double>(total_sq);
        const double var =
            (sq - est.mean * static_cast<double>(total)) / static_cast<double>(paths - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(paths));
    }
    return est;
}

}  // namespace

std::vector<int> simulate_chain(const StochasticMatrix& m, int start, long steps,
                                std::uint64_t seed) {
    if (start < 1 || start > m.n()) throw ValidationError("simulate: start outside [1,n]");
    if (steps < 0) throw ValidationError("simulate: negative step count");
    std::mt19937_64 gen(seed);
    std::vector<int> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    int cur = start - 1;
    path.push_back(cur + 1);
    for (long t = 0; t < steps; ++t) {
        cur = step_state(m.dense(), cur, gen);
        path.push_back(cur + 1);
    }
    return path;
}

McEstimate mc_expected_visits(const StochasticMatrix& m, int level, int start, long paths,
                              std::uint64_t seed, Backend backend) {
    if (level < 2 || level > m.n()) throw ValidationError("mc visits: level outside [2,N]");
    if (start < 1 || start > level) throw ValidationError("mc visits: need 1 <= start <= level");
    if (paths < 1) throw ValidationError("mc visits: need at least one path");
    const DenseMatrix& p = m.dense();
    unsigned long long total = 0;
    unsigned __int128 total_sq = 0;
    const bool par = use_parallel(backend, paths);
#ifdef _OPENMP
#pragma omp parallel if (par)
    {
        unsigned long long local = 0;
        unsigned __int128 local_sq = 0;
#pragma omp for schedule(static)
        for (long k = 0; k < paths; ++k) {
            std::mt19937_64 gen(splitmix64(seed ^ static_cast<std::uint64_t>(k)));
            const long v = walk_visits(p, level, start, gen);
            local += static_cast<unsigned long long>(v);
            local_sq += static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
        }
#pragma omp critical
        {
            total += local;
            total_sq += local_sq;
        }
    }
#else
    (void)par;
    for (long k = 0; k < paths; ++k) {
        std::mt19937_64 gen(splitmix64(seed ^ static_cast<std::uint64_t>(k)));
        const long v = walk_visits(p, level, start, gen);
        total += static_cast<unsigned long long>(v);
        total_sq += static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
    }
#endif
    return moments_to_estimate(total, total_sq, paths);
}

McEstimate mc_first_entry(const StochasticMatrix& m, int level, int from, int to, long paths,
                          std::uint64_t seed, Backend backend) {
    if (level < 2 || level > m.n()) throw ValidationError("mc entry: level outside [2,N]");
    if (from < 1 || from > level) throw ValidationError("mc entry: need 1 <= from <= level");
    if (to < 1 || to >= level) throw ValidationError("mc entry: need 1 <= to < level");
    if (paths < 1) throw ValidationError("mc entry: need at least one path");
    const DenseMatrix& p = m.dense();
    unsigned long long hits = 0;
    const bool par = use_parallel(backend, paths);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : hits) if (par)
    for (long k = 0; k < paths; ++k) {
        std::mt19937_64 gen(splitmix64(seed ^ static_cast<std::uint64_t>(k)));
        if (walk_first_entry(p, level, from, to, gen)) ++hits;
    }
#else
    (void)par;
    for (long k = 0; k < paths; ++k) {
        std::mt19937_64 gen(splitmix64(seed ^ static_cast<std::uint64_t>(k)));
        if (walk_first_entry(p, level, from, to, gen)) ++hits;
    }
#endif
    McEstimate est;
    est.paths = paths;
    est.mean = static_cast<double>(hits) / static_cast<double>(paths);
    est.std_error =
        std::sqrt(std::max(0.0, est.mean * (1.0 - est.mean)) / static_cast<double>(paths));
    return est;
}

std::vector<double> mc_occupancy(const StochasticMatrix& m, int start, long steps,
                                 std::uint64_t seed) {
    if (start < 1 || start > m.n()) throw ValidationError("occupancy: start outside [1,n]");
    if (steps < 1) throw ValidationError("occupancy: need at least one step");
    std::mt19937_64 gen(seed);
    std::vector<long> counts(m.n(), 0);
    int cur = start - 1;
    for (long t = 0; t < steps; ++t) {
        cur = step_state(m.dense(), cur, gen);
        ++counts[cur];
    }
    std::vector<double> freq(m.n());
    for (int j = 0; j < m.n(); ++j)
        freq[j] = static_cast<double>(counts[j]) / static_cast<double>(steps);
    return freq;
}

}  // namespace gthkit
