#pragma once

#include <stdexcept>
#include <string>

namespace adasurv {

// Bad user-supplied settings: unknown method names, degenerate fractions,
// rules referencing missing columns. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally broken input files (CSV syntax, bad model JSON). CLI exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed input that violates a data invariant (nonpositive time,
// unknown status symbol, all-censored dataset). CLI exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model/input disagreement at predict time (missing or extra feature
// columns, wrong covariate length). CLI exit code 3.
struct MismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation preconditions violated at the library level. CLI exit code 4.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace adasurv
