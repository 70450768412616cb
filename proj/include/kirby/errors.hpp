#pragma once

#include <stdexcept>
#include <string>

namespace kirby {

// Malformed input: unparseable files, bad PD codes, invalid JSON shapes.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that violates a semantic invariant
// (e.g. a PD code whose faces don't close up, a link to a missing handle).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A Kirby move whose legality preconditions fail on the given structure.
class IllegalMoveError : public std::runtime_error {
public:
    explicit IllegalMoveError(const std::string& what) : std::runtime_error(what) {}
};

// An operation that is mathematically meaningful but outside what this
// implementation supports (e.g. Seifert matrices for non-braid-closure
// diagrams). Distinct from IllegalMoveError: nothing is wrong with the input.
class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kirby
