// Structured error types shared by all nestlab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace nestlab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    using Error::Error;
};

// Root finding / preimages
struct NoSignChange : Error {
    using Error::Error;
};
struct PrecisionExhausted : Error {
    using Error::Error;
};
struct NotMonotone : Error {
    using Error::Error;
};
struct TargetOutside : Error {
    using Error::Error;
};

// Renormalization / nest
struct NotInDelta : Error {
    int kappa;
    NotInDelta(int k, const std::string& msg) : Error(msg), kappa(k) {}
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct WordNotFound : Error {
    using Error::Error;
};

// Parameter machinery
struct NotMonotoneObserved : Error {
    using Error::Error;
};
struct CombinatoricsUnstable : Error {
    using Error::Error;
};
struct CombinatoricsMismatch : Error {
    using Error::Error;
};

// Capacity
struct FamilyViolatesK : Error {
    using Error::Error;
};

// Sampling / rendering
struct NoAvoidingOrbits : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};

} // namespace nestlab
