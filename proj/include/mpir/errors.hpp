#pragma once

#include <stdexcept>
#include <string>

namespace mpir {

/// Invalid or mutually inconsistent inputs (bad parameters, length or field mismatches).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Randomized construction gave up (e.g. no invertible matrix within the attempt cap).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decoding hit a system that cannot be solved; with honest servers this never fires.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed message-store file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mpir
