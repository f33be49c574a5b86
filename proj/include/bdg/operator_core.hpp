#ifndef BDG_OPERATOR_CORE_HPP
#define BDG_OPERATOR_CORE_HPP

// Dense complex operator algebra: spectral functions of Hermitian matrices,
// Takagi factorization of complex symmetric matrices, norms and the positive
// semidefinite ordering check. Everything is a pure function of its inputs.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "bdg/errors.hpp"
#include "bdg/types.hpp"

namespace bdg {

enum class Spectral { Sqrt, InvSqrt, Abs, Inverse };

template <typename Real>
struct MatrixNorms {
    Real spectral = 0;                    // largest singular value
    Real hilbert_schmidt = 0;             // Frobenius norm
    std::optional<Complex<Real>> trace;   // present for square matrices only
};

// M = unitary * diag(values) * unitary^T with non-negative values sorted
// descending; the columns u_n are fixed vectors of the anti-linear map
// f -> M conj(f) in the sense M conj(u_n) = values[n] * u_n.
template <typename Real>
struct TakagiFactorization {
    Matrix<Real> unitary;
    RealVector<Real> values;
};

// Entrywise max |M - M^dagger|.
template <typename Derived>
RealOf<Derived> hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("hermitian_defect: matrix is not square");
    }
    if (m.size() == 0) return RealOf<Derived>(0);
    return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff();
}

// Entrywise max |M - M^T|.
template <typename Derived>
RealOf<Derived> symmetric_defect(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("symmetric_defect: matrix is not square");
    }
    if (m.size() == 0) return RealOf<Derived>(0);
    return (m.derived() - m.derived().transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m, const char* what,
                       RealOf<Derived> rtol = RealOf<Derived>(1e-12)) {
    const auto scale = relative_scale(m.norm());
    if (hermitian_defect(m) > rtol * scale) {
        throw NotSymmetric(std::string(what) + ": matrix is not Hermitian");
    }
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* what,
                       RealOf<Derived> rtol = RealOf<Derived>(1e-12)) {
    const auto scale = relative_scale(m.norm());
    if (symmetric_defect(m) > rtol * scale) {
        throw NotSymmetric(std::string(what) + ": matrix is not symmetric");
    }
}

// Largest singular value, computed from the smaller Gram matrix.
template <typename Derived>
RealOf<Derived> operator_norm(const Eigen::MatrixBase<Derived>& m) {
    using Real = RealOf<Derived>;
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
    if (m.size() == 0) return Real(0);
    Mat gram;
    if (m.rows() <= m.cols()) {
        gram = m.derived() * m.derived().adjoint();
    } else {
        gram = m.derived().adjoint() * m.derived();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(Real(0), es.eigenvalues().maxCoeff()));
}

template <typename Derived>
RealOf<Derived> hs_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.norm();
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        throw NonSquareTrace("trace: matrix is not square");
    }
    return m.trace();
}

template <typename Derived>
MatrixNorms<RealOf<Derived>> norms(const Eigen::MatrixBase<Derived>& m) {
    MatrixNorms<RealOf<Derived>> out;
    out.spectral = operator_norm(m);
    out.hilbert_schmidt = m.norm();
    if (m.rows() == m.cols()) out.trace = Complex<RealOf<Derived>>(m.trace());
    return out;
}

// Spectral function of a Hermitian matrix: f is applied to eigenvalue
// clusters (relative gap 1e-12), so degenerate eigenvalues receive a single
// function value. Eigenvalues in [-clip*|M|, 0) are clipped to zero for
// sqrt/abs, rejected as NotPSD below that for sqrt/inv_sqrt/inverse, and
// rejected as Singular within clip*|M| of zero for inv_sqrt/inverse.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hermitian_function(const Eigen::MatrixBase<Derived>& m, Spectral f,
                   RealOf<Derived> clip = RealOf<Derived>(1e-12)) {
    using Real = RealOf<Derived>;
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
    require_hermitian(m, "hermitian_function");
    const Index n = m.rows();
    if (n == 0) return Mat(0, 0);

    Eigen::SelfAdjointEigenSolver<Mat> es(m.derived());
    RealVector<Real> lambda = es.eigenvalues();
    const Real scale =
        std::max(std::abs(lambda(0)), std::abs(lambda(n - 1)));
    const Real clip_thr = clip * scale;

    const bool needs_positive =
        f == Spectral::Sqrt || f == Spectral::InvSqrt || f == Spectral::Inverse;
    const bool needs_invertible =
        f == Spectral::InvSqrt || f == Spectral::Inverse;
    for (Index i = 0; i < n; ++i) {
        if (needs_positive && lambda(i) < -clip_thr) {
            throw NotPSD("hermitian_function: eigenvalue " +
                         std::to_string(lambda(i)) + " below -clip*|M|");
        }
        if (needs_invertible && std::abs(lambda(i)) <= clip_thr) {
            throw Singular("hermitian_function: eigenvalue " +
                           std::to_string(lambda(i)) + " within clip*|M| of 0");
        }
        if ((f == Spectral::Sqrt || f == Spectral::Abs) && lambda(i) < Real(0) &&
            lambda(i) >= -clip_thr) {
            lambda(i) = Real(0);
        }
    }

    const Real cluster_gap = Real(1e-12) * relative_scale(scale);
    RealVector<Real> fvals(n);
    Index lo = 0;
    while (lo < n) {
        Index hi = lo;
        while (hi + 1 < n && lambda(hi + 1) - lambda(hi) <= cluster_gap) ++hi;
        const Real mean =
            lambda.segment(lo, hi - lo + 1).sum() / Real(hi - lo + 1);
        Real value;
        switch (f) {
            case Spectral::Sqrt:
                value = std::sqrt(std::max(mean, Real(0)));
                break;
            case Spectral::InvSqrt:
                value = Real(1) / std::sqrt(mean);
                break;
            case Spectral::Abs:
                value = std::abs(mean);
                break;
            case Spectral::Inverse:
                value = Real(1) / mean;
                break;
            default:
                value = mean;
        }
        for (Index i = lo; i <= hi; ++i) fvals(i) = value;
        lo = hi + 1;
    }

    Mat result = es.eigenvectors() * fvals.asDiagonal() *
                 es.eigenvectors().adjoint();
    result = ((result + result.adjoint()) / Real(2)).eval();
    return result;
}

// True iff A <= B in the Loewner order, up to tol relative to the norms.
template <typename DerivedA, typename DerivedB>
bool psd_dominates(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b, RealOf<DerivedA> tol) {
    using Real = RealOf<DerivedA>;
    using Mat = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("psd_dominates: dimension mismatch");
    }
    require_hermitian(a, "psd_dominates (lhs)");
    require_hermitian(b, "psd_dominates (rhs)");
    if (a.size() == 0) return true;
    Mat diff = b.derived().template cast<typename DerivedA::Scalar>() - a.derived();
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    const Real scale = relative_scale(operator_norm(a) + operator_norm(b));
    return es.eigenvalues().minCoeff() >= -tol * scale;
}

// Sign that makes a column's largest-magnitude entry have positive real part
// (imaginary part breaking ties). The Takagi gauge per column is +-1.
template <typename Derived>
RealOf<Derived> takagi_sign(const Eigen::MatrixBase<Derived>& col) {
    using Real = RealOf<Derived>;
    Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    const Complex<Real> z = col(imax);
    const bool flip =
        z.real() < Real(0) || (z.real() == Real(0) && z.imag() < Real(0));
    return flip ? Real(-1) : Real(1);
}

// Unit phase that rotates a column so its largest-magnitude entry becomes
// real positive; the full U(1) gauge of an ordinary eigenvector.
template <typename Derived>
Complex<RealOf<Derived>> phase_factor(const Eigen::MatrixBase<Derived>& col) {
    using Real = RealOf<Derived>;
    Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    const Complex<Real> z = col(imax);
    const Real a = std::abs(z);
    if (a == Real(0)) return Complex<Real>(1, 0);
    return std::conj(z) / a;
}

// Takagi factorization M = U diag(sigma) U^T of a complex symmetric matrix.
//
// The anti-linear map f -> M conj(f) acts on real coordinates (x = a + ib)
// as the real symmetric matrix T = [[Re M, Im M], [Im M, -Re M]], whose
// spectrum is symmetric {+-sigma}. Eigenvectors (a; b) of eigenvalue sigma
// give columns u = a + ib with M conj(u) = sigma u, and real-orthonormal
// bases of a positive eigenvalue cluster are automatically complex
// orthonormal. Only the near-kernel cluster mixes the +-sigma pairs; there
// a complex structure extracted from the Gram matrix picks one vector of
// each conjugate pair.
template <typename Derived>
TakagiFactorization<RealOf<Derived>>
takagi_factorize(const Eigen::MatrixBase<Derived>& m) {
    using Real = RealOf<Derived>;
    require_symmetric(m, "takagi_factorize");
    const Index n = m.rows();
    TakagiFactorization<Real> out;
    out.unitary = Matrix<Real>(n, n);
    out.values = RealVector<Real>(n);
    if (n == 0) return out;

    Matrix<Real> ms =
        ((m.derived().template cast<Complex<Real>>() +
          m.derived().transpose().template cast<Complex<Real>>()) /
         Real(2))
            .eval();

    RealMatrix<Real> t(2 * n, 2 * n);
    t.topLeftCorner(n, n) = ms.real();
    t.topRightCorner(n, n) = ms.imag();
    t.bottomLeftCorner(n, n) = ms.imag();
    t.bottomRightCorner(n, n) = -ms.real();
    Eigen::SelfAdjointEigenSolver<RealMatrix<Real>> es(t);
    const RealVector<Real>& lambda = es.eigenvalues();
    const Real scale = std::max(std::abs(lambda(0)), std::abs(lambda(2 * n - 1)));
    const Real kernel_thr = Real(1e-13) * relative_scale(scale);

    const auto column_of = [&](Index i) {
        Vector<Real> w(n);
        w.real() = es.eigenvectors().col(i).head(n);
        w.imag() = es.eigenvectors().col(i).tail(n);
        return w;
    };

    // Strictly positive part, descending.
    Index filled = 0;
    for (Index i = 2 * n - 1;
         i >= 0 && filled < n && lambda(i) > kernel_thr; --i) {
        out.unitary.col(filled) = column_of(i);
        out.values(filled) = lambda(i);
        ++filled;
    }

    // Near-kernel cluster: candidates for all |lambda| <= kernel_thr.
    const Index missing = n - filled;
    if (missing > 0) {
        std::vector<Index> idx;
        for (Index i = 0; i < 2 * n; ++i) {
            if (std::abs(lambda(i)) <= kernel_thr) idx.push_back(i);
        }
        if (static_cast<Index>(idx.size()) < missing) {
            throw Error("takagi_factorize: kernel candidate set too small");
        }
        Matrix<Real> cand(n, static_cast<Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            cand.col(static_cast<Index>(j)) = column_of(idx[j]);
        }
        // i * Im(Gram) is Hermitian with eigenvalues +-1; its +1 eigenspace
        // selects one representative per conjugate pair, and cand * z / sqrt2
        // is complex orthonormal for orthonormal z in that eigenspace.
        Matrix<Real> gram = cand.adjoint() * cand;
        Matrix<Real> omega =
            Complex<Real>(0, 1) * gram.imag().template cast<Complex<Real>>();
        Eigen::SelfAdjointEigenSolver<Matrix<Real>> eso(omega);
        const Index c = cand.cols();
        for (Index j = 0; j < missing; ++j) {
            Vector<Real> w = cand * eso.eigenvectors().col(c - 1 - j);
            w /= w.norm();
            out.unitary.col(filled + j) = w;
            const Complex<Real> ray = w.dot(ms * w.conjugate());
            out.values(filled + j) = std::max(ray.real(), Real(0));
        }
        // Keep the values weakly descending inside the kernel block.
        std::vector<Index> order(static_cast<std::size_t>(missing));
        for (Index j = 0; j < missing; ++j) order[j] = filled + j;
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
            return out.values(a) > out.values(b);
        });
        Matrix<Real> cols(n, missing);
        RealVector<Real> vals(missing);
        for (Index j = 0; j < missing; ++j) {
            cols.col(j) = out.unitary.col(order[j]);
            vals(j) = out.values(order[j]);
        }
        out.unitary.rightCols(missing) = cols;
        out.values.tail(missing) = vals;
    }

    for (Index j = 0; j < n; ++j) {
        out.unitary.col(j) *= takagi_sign(out.unitary.col(j));
    }
    return out;
}

}  // namespace bdg

#endif
