#pragma once

#include <stdexcept>
#include <string>

namespace lvse {

// Root of the library's exception hierarchy. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class ZeroNormError : public Error { public: using Error::Error; };
// Free-particle regime k^2 <= alpha^2, which has no plane-wave solution of the modified equation.
class ConditionError : public Error { public: using Error::Error; };
class OverflowError : public Error { public: using Error::Error; };
class ShapeError : public Error { public: using Error::Error; };
class SymmetryError : public Error { public: using Error::Error; };
class ConvergenceError : public Error { public: using Error::Error; };
class StagnationError : public ConvergenceError { public: using ConvergenceError::ConvergenceError; };
// A numerical invariant that holds by construction was found violated.
class InvariantError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

}  // namespace lvse
