#pragma once

#include <stdexcept>
#include <string>

namespace navsim {

// Base class for all navsim errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A parameters file omits a required coefficient.
class MissingCoefficientError : public Error {
public:
    explicit MissingCoefficientError(const std::string& name)
        : Error("missing coefficient: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// A parameters or scenario file contains a key the schema does not define.
class UnknownKeyError : public Error {
public:
    explicit UnknownKeyError(const std::string& key)
        : Error("unknown key: " + key) {}
};

// Effective inertia terms are non-positive; the momentum system cannot be solved.
class SingularMassMatrixError : public Error {
public:
    SingularMassMatrixError() : Error("singular mass matrix") {}
};

// An integration step produced NaN or infinity.
class NonFiniteStateError : public Error {
public:
    NonFiniteStateError() : Error("non-finite vessel state after integration step") {}
};

// Self-propulsion calibration found no thrust/resistance balance.
class NoEquilibriumError : public Error {
public:
    NoEquilibriumError() : Error("no self-propulsion equilibrium in (0, n_max]") {}
};

class DegeneratePathError : public Error {
public:
    DegeneratePathError() : Error("waypoints coincide; path direction undefined") {}
};

class EmptyListError : public Error {
public:
    explicit EmptyListError(const std::string& what) : Error(what) {}
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

class ShapeMismatchError : public Error {
public:
    explicit ShapeMismatchError(const std::string& what) : Error(what) {}
};

// Training loss became NaN/inf; training aborts with the last good checkpoint.
class NonFiniteLossError : public Error {
public:
    NonFiniteLossError() : Error("non-finite training loss") {}
};

// Bad config/scenario/parameter input (CLI exit code 2).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace navsim
