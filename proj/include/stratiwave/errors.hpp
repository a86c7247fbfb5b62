#pragma once

#include <stdexcept>
#include <string>

namespace stratiwave {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    structural,        // mismatched grids/orders, malformed inputs
    domain,            // evaluation point outside the represented region
    insufficient_data,
    profile_range,     // density non-positive where it must be evaluated
    stagnation,        // u >= c, or h_p <= 0
    divergence,        // non-finite values appeared
    no_laminar_flow,
    surface_escape,    // no sign change of psi in the vertical bracket
    convergence,       // iterative solver did not meet its tolerance
    schema,            // configuration / file format problems
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Stagnation failure that carries the offending vertical position.
class StagnationError : public Error {
public:
    StagnationError(double y, const std::string& what)
        : Error(ErrorKind::stagnation, what), y_(y) {}

    double y() const noexcept { return y_; }

private:
    double y_;
};

/// Recursion failure that carries the order at which it happened.
class DivergenceError : public Error {
public:
    DivergenceError(int order, const std::string& what)
        : Error(ErrorKind::divergence, what), order_(order) {}

    int order() const noexcept { return order_; }

private:
    int order_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace stratiwave
