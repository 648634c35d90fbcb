#pragma once

#include <stdexcept>
#include <string>

namespace diana {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A domain-type invariant was violated at construction or mutation.
struct ValidationError : Error {
    using Error::Error;
};

// Every candidate site is dead.
struct NoAliveSite : Error {
    using Error::Error;
};

// A priority value outside [-1, 1) was handed to the queue mapper.
struct OutOfRange : Error {
    using Error::Error;
};

// A job with neither service time nor data cannot be classified.
struct Unclassifiable : Error {
    using Error::Error;
};

// A group does not fit on any site, whole or partitioned.
struct CapacityExceeded : Error {
    using Error::Error;
};

// Aggregation requested before every subgroup finished.
struct IncompleteGroup : Error {
    using Error::Error;
};

// A job may migrate at most once.
struct AlreadyMigrated : Error {
    using Error::Error;
};

// Running jobs are never moved (non-preemption).
struct JobRunning : Error {
    using Error::Error;
};

// A node attempted to join the overlay twice.
struct DuplicateJoin : Error {
    using Error::Error;
};

// Failover requested for a single-node subgrid.
struct NoStandby : Error {
    using Error::Error;
};

// The metrics window does not satisfy the steady-state precondition.
struct NotSteadyState : Error {
    using Error::Error;
};

// Scenario file could not be tokenized; message carries line location.
struct ParseError : Error {
    using Error::Error;
};

// Scenario parsed but failed semantic validation; message names the field.
struct ScenarioInvalid : Error {
    using Error::Error;
};

}  // namespace diana
