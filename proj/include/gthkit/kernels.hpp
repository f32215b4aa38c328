#pragma once

#include <optional>
#include <vector>

#include "gthkit/matrix.hpp"

namespace gthkit {

/// Execution backend for the data-parallel kernels. Every parallel kernel is
/// written so each output element is produced by exactly the same sequence of
/// operations as the serial reference; results are bitwise identical.
enum class Backend {
    Auto,      // parallel above a size threshold, serial below
    Serial,    // reference path, always available
    Parallel,  // OpenMP path (falls back to serial when built without OpenMP)
};

/// True if `backend` resolves to the OpenMP path for a workload of `work`
/// inner-loop iterations.
bool use_parallel(Backend backend, long long work);

/// Number of OpenMP threads the parallel path would use (1 without OpenMP).
int parallel_threads();

/// out = a * b (dense). Row-parallel.
void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
            Backend backend = Backend::Auto);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b,
                   Backend backend = Backend::Auto);

/// out_j = sum_i v_i * m(i,j); accumulation in ascending i for every j on
/// both paths.
void vecmat(const std::vector<double>& v, const DenseMatrix& m, std::vector<double>& out,
            Backend backend = Backend::Auto);

/// One forward-elimination inner update on the leading m x m block of `w`:
/// assumes row m-1 (left of the diagonal) has already been divided by the
/// level denominator; adds w(i,m-1)*w(m-1,j) to w(i,j) for i,j < m-1.
/// Row-parallel over i.
void elimination_update(DenseMatrix& w, int m, Backend backend = Backend::Auto);

/// LU decomposition with partial pivoting, for the small dense solves behind
/// censoring and the first-passage systems. Empty result: no usable pivot.
struct LuFactors {
    DenseMatrix lu;
    std::vector<int> perm;
    int n() const { return lu.rows(); }
};
std::optional<LuFactors> lu_factor(DenseMatrix a);

/// Solve A * X = B for X given the factorization of A. Column-parallel over
/// right-hand sides.
DenseMatrix lu_solve(const LuFactors& f, const DenseMatrix& b,
                     Backend backend = Backend::Auto);
std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b);

}  // namespace gthkit
