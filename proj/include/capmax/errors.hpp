#ifndef CAPMAX_ERRORS_HPP
#define CAPMAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace capmax {

/// Invalid user input: bad dimensions, malformed config, out-of-range indices.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: factorization breakdown, degenerate columns,
/// non-finite objectives.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A raw model column collapsed below the representable threshold.
struct DegenerateColumnError : NumericalError {
    explicit DegenerateColumnError(int col)
        : NumericalError("degenerate column " + std::to_string(col) +
                         ": raw norm below 1e-14"),
          column(col) {}
    int column;
};

} // namespace capmax

#endif
