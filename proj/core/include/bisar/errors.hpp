#ifndef BISAR_ERRORS_HPP
#define BISAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bisar {

/// Bad input: malformed config, out-of-range parameter, inconsistent
/// scenario. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while evaluating an otherwise well-formed problem (degenerate
/// geometry, unsatisfiable window, ...). CLI maps this to exit code 1.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Resolution-cell geometry too close to singular to score (near-parallel
/// gradients, forward-scatter blow-up).
class DegenerateGeometryError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

} // namespace bisar

#endif // BISAR_ERRORS_HPP
