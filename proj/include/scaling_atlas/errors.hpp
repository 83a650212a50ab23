#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scaling_atlas {

/// Base class for all toolkit errors. Data/validation failures derive from
/// this; programming errors (bad arguments to library calls) use the
/// standard std::invalid_argument.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- CSV ingestion ---

class MalformedHeader : public Error {
public:
    using Error::Error;
};

class RowParseError : public Error {
public:
    RowParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateRow : public Error {
public:
    explicit DuplicateRow(std::size_t line)
        : Error("line " + std::to_string(line) + ": duplicate row"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// --- model evaluation ---

class NonFiniteResult : public Error {
public:
    explicit NonFiniteResult(const std::string& what) : Error(what), index_(SIZE_MAX) {}
    NonFiniteResult(const std::string& what, std::size_t index)
        : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
    /// Index of the offending element in a batch evaluation, SIZE_MAX otherwise.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// --- optimization ---

class NonFiniteStart : public Error {
public:
    using Error::Error;
};

// --- fitting ---

class EmptySet : public Error {
public:
    using Error::Error;
};

class MixedSlice : public Error {
public:
    using Error::Error;
};

class AllRestartsInfeasible : public Error {
public:
    using Error::Error;
};

class NonFiniteTruth : public Error {
public:
    using Error::Error;
};

// --- architecture accounting ---

class SideTooSmall : public Error {
public:
    using Error::Error;
};

// --- sampling ---

class FractionOutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace scaling_atlas
