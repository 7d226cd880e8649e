#pragma once

#include <stdexcept>
#include <string>

namespace srb {

// Base class for numerical failures. `step` carries the trajectory index at
// which the failure occurred, or -1 when there is no trajectory context.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg, long step = -1)
        : std::runtime_error(step >= 0 ? msg + " (step " + std::to_string(step) + ")" : msg),
          step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_ = -1;
};

// QR found a collapsed column: the requested basis dimension exceeds the
// effective rank (wrong unstable dimension, or a tangency).
class DegenerateBasis : public Error {
public:
    using Error::Error;
};

// Upper-triangular factor with a (near-)zero diagonal entry.
class SingularR : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A Lyapunov exponent sits too close to zero to count unstable directions.
class AmbiguousSpectrum : public Error {
public:
    using Error::Error;
};

// NaN/Inf appeared in a trajectory state.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

class ZeroDerivative : public Error {
public:
    using Error::Error;
};

// 1D map evaluated where its derivative is unbounded.
class DerivativeSingularity : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

class EmptyRow : public Error {
public:
    using Error::Error;
};

} // namespace srb
