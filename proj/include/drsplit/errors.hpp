#pragma once

#include <stdexcept>
#include <string>

namespace drs {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// solve_spd met a nonpositive pivot: the input was not positive definite.
struct NonSPD : Error {
    explicit NonSPD(const std::string& what) : Error(what) {}
};

struct NonPositiveScale : Error {
    explicit NonPositiveScale(const std::string& what) : Error(what) {}
};

struct NegativeThreshold : Error {
    explicit NegativeThreshold(const std::string& what) : Error(what) {}
};

struct NonPositiveLambda : Error {
    explicit NonPositiveLambda(const std::string& what) : Error(what) {}
};

struct NonPositiveStep : Error {
    explicit NonPositiveStep(const std::string& what) : Error(what) {}
};

// Inner Newton loop ran past its iteration budget before reaching tolerance.
struct InnerSolveFailed : Error {
    explicit InnerSolveFailed(const std::string& what) : Error(what) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

struct StreamExhausted : Error {
    explicit StreamExhausted(const std::string& what) : Error(what) {}
};

struct InvalidSparsity : Error {
    explicit InvalidSparsity(const std::string& what) : Error(what) {}
};

struct MuNotPositive : Error {
    explicit MuNotPositive(const std::string& what) : Error(what) {}
};

struct MaxIterations : Error {
    explicit MaxIterations(const std::string& what) : Error(what) {}
};

// An iterate left the finite range (divergence guard).
struct NonFiniteIterate : Error {
    explicit NonFiniteIterate(const std::string& what) : Error(what) {}
};

struct NonFiniteTrace : Error {
    explicit NonFiniteTrace(const std::string& what) : Error(what) {}
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& what) : Error(what) {}
};

struct IoFailure : Error {
    explicit IoFailure(const std::string& what) : Error(what) {}
};

}  // namespace drs
