#pragma once

#include <stdexcept>
#include <string>

namespace swst {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// QR / triangular solve hit a diagonal below the rank tolerance.
class SingularInput : public Error {
public:
    using Error::Error;
};

/// Eigenvalue iteration exceeded its sweep cap.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// The matrix family does not generate a solvable Lie algebra.
class NotSolvable : public Error {
public:
    using Error::Error;
};

/// No common eigenvector survived the tolerance during triangularization.
class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

/// A symbol sequence was asked for more symbols than its prefix holds.
class PrefixExhausted : public Error {
public:
    using Error::Error;
};

class SymbolOutOfRange : public Error {
public:
    using Error::Error;
};

class NotTriangular : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class InsufficientSeries : public Error {
public:
    using Error::Error;
};

class HorizonTooShort : public Error {
public:
    using Error::Error;
};

/// Precondition refused: the averaged matrix is not Hurwitz.
class StarConditionFails : public Error {
public:
    using Error::Error;
};

class GrowthBoundViolated : public Error {
public:
    using Error::Error;
};

/// Malformed scenario file or invalid field value.
class ScenarioError : public Error {
public:
    using Error::Error;
};

}  // namespace swst
