#pragma once

#include <stdexcept>
#include <string>

namespace gthkit {

/// Input failed a structural invariant (not a probability matrix, bad subset,
/// malformed file, missing analytic distribution, ...). CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Base for failures of the numerical procedures themselves. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An elimination denominator came out <= 0: the state being removed cannot
/// reach any lower state, i.e. the chain is reducible at that level.
class ZeroDenominatorError : public NumericalError {
public:
    ZeroDenominatorError(int level, const std::string& what)
        : NumericalError(what), level_(level) {}
    int level() const { return level_; }

private:
    int level_;
};

/// (I-Q) or a taboo system had no usable pivot; the complement block does not
/// drain back into the censored set, so the input chain is reducible.
class SingularComplementError : public NumericalError {
public:
    explicit SingularComplementError(const std::string& what) : NumericalError(what) {}
};

/// Naive Gaussian elimination hit a diagonal at or below machine epsilon.
class PivotUnderflowError : public NumericalError {
public:
    PivotUnderflowError(int level, double pivot, const std::string& what)
        : NumericalError(what), level_(level), pivot_(pivot) {}
    int level() const { return level_; }
    double pivot() const { return pivot_; }

private:
    int level_;
    double pivot_;
};

/// An iteration failed to reach its tolerance within its budget.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(double last_gap, const std::string& what)
        : NumericalError(what), last_gap_(last_gap) {}
    double last_gap() const { return last_gap_; }

private:
    double last_gap_;
};

}  // namespace gthkit
