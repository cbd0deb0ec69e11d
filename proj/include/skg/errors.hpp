#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skg {

// Base class for everything this library throws on purpose.
// Index/prefix violations on the succinct structures use std::out_of_range.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (N-Triples, SPARQL). Carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A construct the engine deliberately does not implement (BIND, UNION, ...).
class UnsupportedFeature : public Error {
public:
    explicit UnsupportedFeature(const std::string& feature)
        : Error("unsupported feature: " + feature), feature_(feature) {}

    const std::string& feature() const { return feature_; }

private:
    std::string feature_;
};

// Corrupt or truncated serialized payloads.
class FormatError : public Error {
public:
    using Error::Error;
};

// Hierarchy encoding failures: cycles, identifiers wider than 64 bits.
class EncodingError : public Error {
public:
    using Error::Error;
};

// Dictionary miss on an operation that requires the entry to exist.
class LookupError : public Error {
public:
    using Error::Error;
};

// Ids that do not resolve, inconsistent store sections.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Datatype operation on an object property and similar kind mismatches.
class KindError : public Error {
public:
    using Error::Error;
};

}  // namespace skg
