#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace gthkit {

/// Dense row-major matrix of doubles. Plain value type; 0-based indexing.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
        assert(rows >= 0 && cols >= 0);
    }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool operator==(const DenseMatrix&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// max_{i,j} |a(i,j) - b(i,j)|; matrices must have equal shape.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// Neumaier compensated sum.
double stable_sum(const double* x, std::size_t n);
double stable_sum(const std::vector<double>& x);

}  // namespace gthkit
