#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cirsense {

/// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite tap, negative magnitude or otherwise malformed in-memory input.
class RejectedInput : public Error {
public:
    using Error::Error;
};

/// Profile has no strictly positive value, so no leading edge exists.
class NoLeadingEdge : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Profiles in one stream disagree on length or tap duration.
class StreamInconsistency : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A tap earlier than the direct path was mapped to a bistatic range.
class PreDirectPath : public Error {
public:
    using Error::Error;
};

/// Bistatic range shorter than the direct path.
class InfeasibleRange : public Error {
public:
    using Error::Error;
};

class UnknownLot : public Error {
public:
    using Error::Error;
};

/// Heatmap grid does not cover the lots.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Simulated path falls outside the CIR record.
class TruncationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Calibration and measurement disagree on K_taps or delta_t.
class ConstantMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed text line; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed line with the wrong number of fields.
class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace cirsense
