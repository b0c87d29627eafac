#pragma once

#include <stdexcept>
#include <string>

namespace sigma_lattice {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Basis vectors are zero or collinear: they do not span the plane.
class DegenerateBasis : public Error {
public:
    using Error::Error;
};

/// Requested basis change has |det| != 1 and would change the point set.
class NotUnimodular : public Error {
public:
    using Error::Error;
};

/// A series did not converge within its iteration cap. For the weight-2
/// invariant this signals |Im tau| too small; reduce the basis first.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// Evaluation was requested within the pole exclusion radius of a lattice point.
class PoleAt : public Error {
public:
    using Error::Error;
};

/// p*z is not a lattice point to within tolerance.
class NotCommensurate : public Error {
public:
    using Error::Error;
};

/// Zero census winding sum (pole included) is nonzero: zeros were missed.
/// Retry with a denser seeding grid.
class IncompleteCensus : public Error {
public:
    using Error::Error;
};

/// A winding-number sample landed on (or too close to) a zero of the function.
class OnContour : public Error {
public:
    using Error::Error;
};

/// Number of prescribed zeros does not match the flux count.
class CountMismatch : public Error {
public:
    using Error::Error;
};

/// Many-body configuration size does not match the flux count.
class ParticleCountMismatch : public Error {
public:
    using Error::Error;
};

/// A wavefunction magnitude underflowed past the comparison floor; resample.
class NearZeroDivision : public Error {
public:
    using Error::Error;
};

/// Slater basis family is numerically linearly dependent.
class SingularBasis : public Error {
public:
    using Error::Error;
};

} // namespace sigma_lattice
