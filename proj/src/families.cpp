#include "gthkit/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <sstream>

#include "gthkit/errors.hpp"
#include "gthkit/gth.hpp"

namespace gthkit {

double CountableChainSpec::stationary_tail(int n) const {
    if (n < 0) throw ValidationError("stationary_tail: negative cutoff");
    if (tail_mass) return tail_mass(n);
    if (!exact_stationary)
        throw ValidationError("family '" + id + "' has no analytic stationary distribution");
    double acc = 0.0;
    for (int k = n + 1; k <= n + 10000000; ++k) {
        const double term = exact_stationary(k);
        acc += term;
        if (term < 1e-18) return acc;
    }
    throw ConvergenceError(0.0, "stationary_tail: series did not fall below 1e-18");
}

void validate_spec_rows(const CountableChainSpec& spec, int rows) {
    if (!spec.row_support || !spec.kernel)
        throw ValidationError("chain spec '" + spec.id + "' lacks a kernel");
    for (int i = 1; i <= rows; ++i) {
        std::vector<int> support = spec.row_support(i);
        if (support.empty())
            throw ValidationError("chain spec row " + std::to_string(i) + ": empty support");
        std::sort(support.begin(), support.end());
        int max_state = support.back();
        if (support.front() < 1)
            throw ValidationError("chain spec row " + std::to_string(i) + ": state below 1");
        for (std::size_t k = 1; k < support.size(); ++k) {
            if (support[k] == support[k - 1])
                throw ValidationError("chain spec row " + std::to_string(i) +
                                      ": duplicate support state " + std::to_string(support[k]));
        }
        double sum = 0.0;
        for (int j : support) {
            const double v = spec.kernel(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("chain spec entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") outside [0,1]");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > spec.row_tol)
            throw ValidationError("chain spec row " + std::to_string(i) +
                                  " does not sum to 1 over its support");
        std::size_t at = 0;
        for (int j = 1; j <= max_state + 2; ++j) {
            if (at < support.size() && support[at] == j) {
                ++at;
                continue;
            }
            if (spec.kernel(i, j) != 0.0)
                throw ValidationError("chain spec kernel nonzero off support at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

SubstochasticMatrix northwest_corner(const CountableChainSpec& spec, int n) {
    if (n < 1) throw ValidationError("northwest_corner: size must be >= 1");
    DenseMatrix m(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j : spec.row_support(i)) {
            if (j <= n) m(i - 1, j - 1) = spec.kernel(i, j);
        }
    }
    return SubstochasticMatrix::checked(std::move(m), spec.row_tol);
}

namespace {

// Integer allocation behind the dyadic rows: nonnegative weights to integers
// a_j >= 1 (for positive weights) summing exactly to `target`; the largest
// weight absorbs the rounding residual.
std::vector<long long> allocate_grid(const std::vector<double>& weights, long long target) {
    if (weights.empty()) throw ValidationError("quantize: empty weight vector");
    double total = 0.0;
    std::size_t argmax = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double w = weights[j];
        if (!(w >= 0.0) || std::isinf(w))
            throw ValidationError("quantize: weights must be finite and nonnegative");
        total += w;
        if (w > weights[argmax]) argmax = j;
    }
    if (!(total > 0.0)) throw ValidationError("quantize: weights sum to zero");
    std::vector<long long> a(weights.size(), 0);
    long long placed = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0.0) continue;
        a[j] = std::max(1LL, llround(weights[j] / total * static_cast<double>(target)));
        placed += a[j];
    }
    a[argmax] += target - placed;
    if (a[argmax] < 1)
        throw ValidationError("quantize: grid too coarse for these weights");
    return a;
}

}  // namespace

std::vector<double> quantize_stochastic_row(const std::vector<double>& weights, int bits) {
    if (bits < 1 || bits > 52) throw ValidationError("quantize: bits must lie in [1,52]");
    std::vector<long long> a = allocate_grid(weights, 1LL << bits);
    std::vector<double> row(weights.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = std::ldexp(static_cast<double>(a[j]), -bits);
    return row;
}

CountableChainSpec birth_death_walk(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("birth-death walk: p must lie in (0,1)");
    const std::vector<double> snapped = quantize_stochastic_row({p, 1.0 - p}, 50);
    const double up = snapped[0], down = snapped[1];

    CountableChainSpec spec;
    char idbuf[48];
    std::snprintf(idbuf, sizeof idbuf, "bd:p=%g", p);
    spec.id = idbuf;
    spec.row_support = [](int i) {
        return i == 1 ? std::vector<int>{1, 2} : std::vector<int>{i - 1, i + 1};
    };
    spec.kernel = [up, down](int i, int j) -> double {
        if (i == 1) return j == 1 ? down : (j == 2 ? up : 0.0);
        if (j == i + 1) return up;
        if (j == i - 1) return down;
        return 0.0;
    };
    if (up < down) {
        const double rho = up / down;
        spec.exact_stationary = [rho](int j) { return (1.0 - rho) * std::pow(rho, j - 1); };
        spec.tail_mass = [rho](int n) { return std::pow(rho, n); };
    }
    return spec;
}

CountableChainSpec embed_finite(const StochasticMatrix& m, const std::string& id) {
    auto mat = std::make_shared<StochasticMatrix>(m);
    const int n = m.n();

    CountableChainSpec spec;
    spec.id = id;
    spec.row_support = [mat, n](int i) {
        std::vector<int> support;
        if (i > n) {
            support.push_back(1);
            return support;
        }
        for (int j = 1; j <= n; ++j)
            if ((*mat)(i - 1, j - 1) > 0.0) support.push_back(j);
        return support;
    };
    spec.kernel = [mat, n](int i, int j) -> double {
        if (i > n) return j == 1 ? 1.0 : 0.0;
        if (j > n) return 0.0;
        return (*mat)(i - 1, j - 1);
    };
    // States above n are transient, so the stationary distribution is the
    // finite chain's, padded with zeros.
    try {
        auto pi = std::make_shared<ProbabilityVector>(gth_solve(*mat));
        spec.exact_stationary = [pi, n](int j) { return j <= n ? (*pi)[j - 1] : 0.0; };
        spec.tail_mass = [pi, n](int cut) {
            double tail = 0.0;
            for (int k = cut + 1; k <= n; ++k) tail += (*pi)[k - 1];
            return tail;
        };
    } catch (const NumericalError&) {
        // Reducible input: usable as a kernel, but without a stationary law.
    }
    return spec;
}

StochasticMatrix nearly_uncoupled_chain(int n, double eps) {
    if (n < 4 || n % 2 != 0)
        throw ValidationError("nearly uncoupled chain: n must be even and >= 4");
    if (!(eps > 0.0 && eps <= 0.25))
        throw ValidationError("nearly uncoupled chain: eps must lie in (0, 0.25]");
    const int h = n / 2;
    const long long grid = 1LL << 50;
    // Block A rows leak exactly twice the mass of block B rows, so the cut
    // balance pins the block masses at (1/3, 2/3) for every eps.
    const long long leak_a = 2 * std::max(1LL, llround(eps * std::ldexp(1.0, 49)));
    const long long leak_b = leak_a / 2;

    DenseMatrix m(n, n);
    for (int i = 1; i <= n; ++i) {
        const bool in_a = i <= h;
        const int lo = in_a ? 1 : h + 1;
        const long long inside = grid - (in_a ? leak_a : leak_b);
        std::vector<double> w(h);
        for (int k = 0; k < h; ++k)
            w[k] = 1.0 + static_cast<double>((i * 13 + (lo + k) * 7) % 4);
        std::vector<long long> a = allocate_grid(w, inside);
        for (int k = 0; k < h; ++k)
            m(i - 1, lo + k - 1) = std::ldexp(static_cast<double>(a[k]), -50);
        const int partner = in_a ? i + h : i - h;
        m(i - 1, partner - 1) = std::ldexp(static_cast<double>(in_a ? leak_a : leak_b), -50);
    }
    return StochasticMatrix::checked(std::move(m));
}

StochasticMatrix random_dense_chain(int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random chain: n must be >= 1");
    std::mt19937_64 gen(seed);
    DenseMatrix m(n, n);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            w[j] = 1.0 + std::ldexp(static_cast<double>(gen() >> 11), -53);
        std::vector<double> row = quantize_stochastic_row(w, 30);
        for (int j = 0; j < n; ++j) m(i, j) = row[j];
    }
    return StochasticMatrix::checked(std::move(m));
}

namespace {

double parse_param(const std::string& id, const std::string& prefix) {
    const std::string text = id.substr(prefix.size());
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ValidationError("malformed family parameter in '" + id + "'");
    return v;
}

}  // namespace

CountableChainSpec family_from_id(const std::string& id) {
    if (id.rfind("bd:p=", 0) == 0) return birth_death_walk(parse_param(id, "bd:p="));
    throw ValidationError("unknown countable family '" + id + "' (expected bd:p=<value>)");
}

StochasticMatrix finite_family_instance(const std::string& id, int n) {
    if (id.rfind("ncd:eps=", 0) == 0)
        return nearly_uncoupled_chain(n, parse_param(id, "ncd:eps="));
    if (id.rfind("rand:seed=", 0) == 0) {
        const double s = parse_param(id, "rand:seed=");
        if (s < 0 || s != std::floor(s))
            throw ValidationError("malformed seed in '" + id + "'");
        return random_dense_chain(n, static_cast<std::uint64_t>(s));
    }
    throw ValidationError("unknown finite family '" + id +
                          "' (expected ncd:eps=<value> or rand:seed=<value>)");
}

ProbabilityVector power_iteration_oracle(const StochasticMatrix& m, double tol, long max_iter,
                                         Backend backend) {
    const int n = m.n();
    std::vector<double> v(n, 1.0 / n), step(n);
    double gap = 0.0;
    for (long it = 0; it < max_iter; ++it) {
        vecmat(v, m.dense(), step, backend);
        gap = 0.0;
        for (int j = 0; j < n; ++j) gap += std::fabs(step[j] - v[j]);
        if (gap <= tol) {
            const double total = stable_sum(v);
            for (double& x : v) x /= total;
            return ProbabilityVector::unchecked(std::move(v));
        }
        // Averaging half a step keeps periodic chains converging.
        for (int j = 0; j < n; ++j) v[j] = 0.5 * (v[j] + step[j]);
    }
    throw ConvergenceError(gap, "power iteration did not reach tolerance");
}

}  // namespace gthkit
