#include "gthkit/matrix.hpp"

#include <cassert>
#include <cmath>

namespace gthkit {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    double gap = 0.0;
    const std::size_t total = static_cast<std::size_t>(a.rows()) * a.cols();
    for (std::size_t k = 0; k < total; ++k) {
        gap = std::max(gap, std::fabs(a.data()[k] - b.data()[k]));
    }
    return gap;
}

double stable_sum(const double* x, std::size_t n) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double t = sum + x[k];
        if (std::fabs(sum) >= std::fabs(x[k])) {
            comp += (sum - t) + x[k];
        } else {
            comp += (x[k] - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double stable_sum(const std::vector<double>& x) { return stable_sum(x.data(), x.size()); }

}  // namespace gthkit
