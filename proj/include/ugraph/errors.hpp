#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ugraph {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed DSL or matrix input. Carries a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Edge-index clauses overlap or leave a gap.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// A range elaborates to the empty set.
class EmptyRangeError : public Error {
public:
    using Error::Error;
};

/// A structurally valid spec that violates a semantic constraint
/// (source outside the universe, polynomial degree too high, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class UncoveredIndex : public Error {
public:
    using Error::Error;
};

class InvalidIndexSets : public Error {
public:
    using Error::Error;
};

class AllZeroWord : public Error {
public:
    using Error::Error;
};

/// Raised when an aligned period would exceed the configured bit budget.
class PeriodOverflow : public Error {
public:
    using Error::Error;
};

class UnknownAtDepth : public Error {
public:
    UnknownAtDepth(const std::string& msg, std::size_t depth) : Error(msg), depth_(depth) {}
    std::size_t depth() const noexcept { return depth_; }

private:
    std::size_t depth_;
};

class OracleUnknown : public Error {
public:
    using Error::Error;
};

class NonTermination : public Error {
public:
    using Error::Error;
};

class UndecidableAtHorizon : public Error {
public:
    using Error::Error;
};

class HorizonTooSmall : public Error {
public:
    using Error::Error;
};

class InfiniteUniverse : public Error {
public:
    using Error::Error;
};

class ZeroRow : public Error {
public:
    using Error::Error;
};

}  // namespace ugraph
