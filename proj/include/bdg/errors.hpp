#ifndef BDG_ERRORS_HPP
#define BDG_ERRORS_HPP

// Error types thrown by the library. Every failure mode that callers are
// expected to handle has its own class; messages carry the offending values.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdg {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A matrix required to be Hermitian or complex-symmetric is not.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

// The pairing matrix K fails the K = K^T requirement.
class NotSymmetricPairing : public Error {
public:
    using Error::Error;
};

// A matrix function requiring a positive (semi)definite argument saw an
// eigenvalue below the clip threshold.
class NotPSD : public Error {
public:
    using Error::Error;
};

// inverse/inv_sqrt applied to a matrix with an eigenvalue at numerical zero.
class Singular : public Error {
public:
    using Error::Error;
};

// The one-body operator h has an eigenvalue <= 0.
class NotPositive : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Trace requested for a non-square matrix.
class NonSquareTrace : public Error {
public:
    using Error::Error;
};

// A block operator required to anticommute with the conjugation does not.
class NotAntisymmetric : public Error {
public:
    using Error::Error;
};

// The detected kernel of a signed block operator has odd dimension, so it
// cannot be split into a conjugation-paired basis.
class OddKernel : public Error {
public:
    using Error::Error;
};

// The diagonalizability condition fails: the pairing strength reaches 1.
class GapViolation : public Error {
public:
    explicit GapViolation(double g_norm)
        : Error("gap violation: pairing strength " + std::to_string(g_norm) +
                " >= 1"),
          g_norm(g_norm) {}
    double g_norm;
};

// A Fock basis would exceed the configured dimension cap.
class SizeOverflow : public Error {
public:
    SizeOverflow(std::size_t dim, std::size_t cap)
        : Error("Fock dimension " + std::to_string(dim) + " exceeds cap " +
                std::to_string(cap)),
          dim(dim), cap(cap) {}
    std::size_t dim;
    std::size_t cap;
};

// A state vector expected to be normalized is not.
class NotNormalized : public Error {
public:
    using Error::Error;
};

// The truncated-Fock verification cannot be trusted: too much ground-state
// mass sits near the truncation shell.
class TruncationUnreliable : public Error {
public:
    explicit TruncationUnreliable(double tail_weight)
        : Error("truncation unreliable: tail weight " +
                std::to_string(tail_weight)),
          tail_weight(tail_weight) {}
    double tail_weight;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// A problem file could not be read or does not match the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace bdg

#endif
