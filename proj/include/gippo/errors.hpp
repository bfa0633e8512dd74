#pragma once

#include <stdexcept>
#include <string>

namespace gippo {

// Exit-code mapping used by the CLI: ParamError -> 2, FormatError -> 3,
// everything else (StructuralError, std::exception) -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad parameter or usage (out-of-range value, empty input where data is required).
class ParamError : public Error {
public:
    explicit ParamError(const std::string& msg) : Error(msg) {}
};

// Malformed or semantically invalid input file (JSON, CSV, G-code).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// G-code stream reached an impossible state (e.g. extrusion before any position).
class StateError : public FormatError {
public:
    explicit StateError(const std::string& msg) : FormatError(msg) {}
};

// Internal invariant violation; indicates a bug, not bad input.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

}  // namespace gippo
