#pragma once

#include <stdexcept>
#include <string>

namespace hld {

/// Shape or ring mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RingMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix offered as a module map does not carry relations into relations.
class NotAModuleMap : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A complex is outside the cohomological range an operation requires.
class AmplitudeViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidComplex : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidLefschetzData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file; the message starts with the JSON location.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& where, const std::string& what)
        : std::invalid_argument(where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// The iterate at index n does not induce an isomorphism H^{-n} -> H^{n}.
class HardLefschetzViolation : public std::runtime_error {
public:
    explicit HardLefschetzViolation(int n)
        : std::runtime_error("hard Lefschetz fails at n=" + std::to_string(n)), n_(n) {}
    int n() const noexcept { return n_; }

private:
    int n_;
};

/// A homotopy produced internally failed re-verification. Indicates a bug.
class InternalWitnessFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace hld
