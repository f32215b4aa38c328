#include "gthkit/kernels.hpp"

#include <cassert>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gthkit {

namespace {
// Below this many inner iterations the fork/join overhead wins.
constexpr long long kParallelCutoff = 1 << 14;
}  // namespace

bool use_parallel(Backend backend, long long work) {
#ifdef _OPENMP
    switch (backend) {
        case Backend::Serial: return false;
        case Backend::Parallel: return true;
        case Backend::Auto: return work >= kParallelCutoff && omp_get_max_threads() > 1;
    }
    return false;
#else
    (void)backend;
    (void)work;
    return false;
#endif
}

int parallel_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out, Backend backend) {
    assert(a.cols() == b.rows());
    const int n = a.rows(), k = a.cols(), m = b.cols();
    out = DenseMatrix(n, m, 0.0);
    const bool par = use_parallel(backend, static_cast<long long>(n) * k * m);

    auto row_product = [&](int i) {
        double* ci = out.row(i);
        const double* ai = a.row(i);
        for (int l = 0; l < k; ++l) {
            const double ail = ai[l];
            if (ail == 0.0) continue;
            const double* bl = b.row(l);
            for (int j = 0; j < m; ++j) ci[j] += ail * bl[j];
        }
    };
    if (par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) row_product(i);
    } else {
        for (int i = 0; i < n; ++i) row_product(i);
    }
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, Backend backend) {
    DenseMatrix out;
    matmul(a, b, out, backend);
    return out;
}

void vecmat(const std::vector<double>& v, const DenseMatrix& m, std::vector<double>& out,
            Backend backend) {
    const int n = m.rows(), c = m.cols();
    assert(static_cast<int>(v.size()) == n);
    out.assign(c, 0.0);
    const bool par = use_parallel(backend, static_cast<long long>(n) * c);
    if (par) {
        // Column-wise with ascending row accumulation: the same per-entry
        // operation order as the serial axpy sweep below.
#pragma omp parallel for schedule(static)
        for (int j = 0; j < c; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += v[i] * m(i, j);
            out[j] = acc;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double vi = v[i];
            if (vi == 0.0) continue;
            const double* ri = m.row(i);
            for (int j = 0; j < c; ++j) out[j] += vi * ri[j];
        }
    }
}

void elimination_update(DenseMatrix& w, int m, Backend backend) {
    assert(m >= 2 && m <= w.rows() && w.rows() == w.cols());
    const int top = m - 1;  // 0-based index of the state being removed
    const double* exit_row = w.row(top);
    const bool par = use_parallel(backend, static_cast<long long>(top) * top);

    auto update_row = [&](int i) {
        const double climb = w(i, top);
        if (climb == 0.0) return;
        double* wi = w.row(i);
        for (int j = 0; j < top; ++j) wi[j] += climb * exit_row[j];
    };
    if (par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < top; ++i) update_row(i);
    } else {
        for (int i = 0; i < top; ++i) update_row(i);
    }
}

std::optional<LuFactors> lu_factor(DenseMatrix a) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::fabs(a(i, k));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) return std::nullopt;
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(perm[k], perm[pivot]);
        }
        const double inv = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double factor = a(i, k) * inv;
            a(i, k) = factor;
            if (factor == 0.0) continue;
            double* ri = a.row(i);
            const double* rk = a.row(k);
            for (int j = k + 1; j < n; ++j) ri[j] -= factor * rk[j];
        }
    }
    return LuFactors{std::move(a), std::move(perm)};
}

namespace {

void lu_solve_column(const LuFactors& f, const DenseMatrix& b, int col, double* scratch,
                     DenseMatrix& out) {
    const int n = f.n();
    for (int i = 0; i < n; ++i) scratch[i] = b(f.perm[i], col);
    for (int i = 1; i < n; ++i) {
        double acc = scratch[i];
        const double* li = f.lu.row(i);
        for (int k = 0; k < i; ++k) acc -= li[k] * scratch[k];
        scratch[i] = acc;
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = scratch[i];
        const double* ui = f.lu.row(i);
        for (int k = i + 1; k < n; ++k) acc -= ui[k] * scratch[k];
        scratch[i] = acc / ui[i];
    }
    for (int i = 0; i < n; ++i) out(i, col) = scratch[i];
}

}  // namespace

DenseMatrix lu_solve(const LuFactors& f, const DenseMatrix& b, Backend backend) {
    assert(f.n() == b.rows());
    const int n = f.n(), m = b.cols();
    DenseMatrix out(n, m);
    const bool par = use_parallel(backend, static_cast<long long>(n) * n * m) && m > 1;
    if (par) {
#pragma omp parallel
        {
            std::vector<double> scratch(n);
#pragma omp for schedule(static)
            for (int col = 0; col < m; ++col) lu_solve_column(f, b, col, scratch.data(), out);
        }
    } else {
        std::vector<double> scratch(n);
        for (int col = 0; col < m; ++col) lu_solve_column(f, b, col, scratch.data(), out);
    }
    return out;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
    const int n = f.n();
    assert(static_cast<int>(b.size()) == n);
    DenseMatrix rhs(n, 1);
    for (int i = 0; i < n; ++i) rhs(i, 0) = b[i];
    DenseMatrix sol = lu_solve(f, rhs, Backend::Serial);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = sol(i, 0);
    return out;
}

}  // namespace gthkit
