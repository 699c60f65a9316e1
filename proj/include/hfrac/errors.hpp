#pragma once

#include <stdexcept>
#include <string>

namespace hfrac {

/// Argument outside the mathematical domain of a function (endpoints, diagonal of a singular kernel).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Caller-side contract violation: bad parameters, missing data, dimension mismatch.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Mismatched dimensions between points, indices or coefficient sets.
struct DimensionError : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// A quadrature or convergence check did not reach its tolerance.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

inline void require_dim(std::size_t a, std::size_t b, const char* where) {
    if (a != b)
        throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
}

}  // namespace hfrac
