#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gthkit/matrix.hpp"

namespace gthkit {

inline constexpr double kDefaultRowTol = 1e-12;

/// First violation found while validating a matrix or vector.
/// row/col are 1-based state labels; col == 0 marks a row-sum violation.
struct ValidationIssue {
    int row = 0;
    int col = 0;
    double deviation = 0.0;
    std::string message;
};

struct ValidationResult {
    std::optional<ValidationIssue> issue;
    bool ok() const { return !issue.has_value(); }
    explicit operator bool() const { return ok(); }
    /// Throws ValidationError when not ok.
    void raise() const;
};

/// Entries in [0,1] and every row sum equal to 1, both within tol.
ValidationResult validate_stochastic(const DenseMatrix& m, double tol = kDefaultRowTol);
/// Entries in [0,1] and every row sum <= 1 + tol.
ValidationResult validate_substochastic(const DenseMatrix& m, double tol = kDefaultRowTol);

/// Row-stochastic transition matrix over states 1..n. Immutable once built.
class StochasticMatrix {
public:
    /// Validates and throws ValidationError on the first violation.
    static StochasticMatrix checked(DenseMatrix m, double tol = kDefaultRowTol);
    /// No validation; for matrices whose invariants hold by construction.
    static StochasticMatrix unchecked(DenseMatrix m);

    int n() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const DenseMatrix& dense() const { return m_; }

private:
    explicit StochasticMatrix(DenseMatrix m) : m_(std::move(m)) {}
    DenseMatrix m_;
};

/// Like StochasticMatrix but rows may sum to less than 1 (truncation corners,
/// complement blocks).
class SubstochasticMatrix {
public:
    static SubstochasticMatrix checked(DenseMatrix m, double tol = kDefaultRowTol);
    static SubstochasticMatrix unchecked(DenseMatrix m);

    int n() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const DenseMatrix& dense() const { return m_; }

private:
    explicit SubstochasticMatrix(DenseMatrix m) : m_(std::move(m)) {}
    DenseMatrix m_;
};

/// Nonnegative vector summing to 1.
class ProbabilityVector {
public:
    static ProbabilityVector checked(std::vector<double> v, double tol = kDefaultRowTol);
    static ProbabilityVector unchecked(std::vector<double> v);

    int n() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    const std::vector<double>& values() const { return v_; }

private:
    explicit ProbabilityVector(std::vector<double> v) : v_(std::move(v)) {}
    std::vector<double> v_;
};

/// ||a - b||_1.
double l1_distance(const ProbabilityVector& a, const ProbabilityVector& b);

/// A census subset E of {1..n} and its complement, both ascending, 1-based.
class Partition {
public:
    /// Throws ValidationError on empty/out-of-range/duplicate labels.
    static Partition of(int n, std::vector<int> census_states);
    /// E = {1..k}.
    static Partition leading(int n, int k);

    int n() const { return n_; }
    const std::vector<int>& census() const { return census_; }
    const std::vector<int>& complement() const { return complement_; }
    bool is_full() const { return complement_.empty(); }

private:
    Partition(int n, std::vector<int> census, std::vector<int> complement)
        : n_(n), census_(std::move(census)), complement_(std::move(complement)) {}
    int n_;
    std::vector<int> census_;
    std::vector<int> complement_;
};

/// True iff the directed graph on edges {(i,j): p(i,j) > 0} is strongly
/// connected.
bool is_irreducible(const DenseMatrix& m);
bool is_irreducible(const StochasticMatrix& m);

}  // namespace gthkit
