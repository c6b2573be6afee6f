#pragma once

#include <stdexcept>
#include <string>

namespace pospres {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input degree exceeds the order an operator is stored up to.
struct DegreeBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recovered canonical table fails to reproduce the action oracle.
struct InconsistentAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAlgebraElement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotGroupElement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInSubspace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeBudgetExceedsOperatorOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridPointOutsideK : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotDegreePreserving : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidTriplet : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativeTime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pospres
