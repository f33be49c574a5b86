#ifndef BDG_TYPES_HPP
#define BDG_TYPES_HPP

// Shared scalar and matrix aliases. The whole library is templated on the
// real scalar type; `double` is the default used by the CLI and the tests.

#include <complex>

#include <Eigen/Dense>

namespace bdg {

using Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

// Tolerances are relative to max(1, scale) so they behave across magnitudes.
template <typename Real>
Real relative_scale(Real x) {
    return x < Real(1) ? Real(1) : x;
}

}  // namespace bdg

#endif
