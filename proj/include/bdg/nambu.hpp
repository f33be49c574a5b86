#ifndef BDG_NAMBU_HPP
#define BDG_NAMBU_HPP

// Types and validators for the doubled space H (+) H*.
//
// Basis convention: H* is identified with H by entrywise conjugation in a
// fixed orthonormal basis. The one-body conjugation J acts as x -> conj(x),
// and the doubled-space conjugation acts as (x1; x2) -> (conj(x2); conj(x1)).
// The pairing operator k: H -> H* becomes a complex symmetric matrix K, and
// the anti-linear pairing strength G acts as f -> M_G conj(f) with the
// complex symmetric matrix M_G = h^{-1/2} conj(K) (h^{-1/2})^T.

#include <array>

#include "bdg/errors.hpp"
#include "bdg/operator_core.hpp"
#include "bdg/types.hpp"

namespace bdg {

// Validated pair (h, K): h Hermitian positive definite, K symmetric.
template <typename Real = double>
struct Problem {
    Index dim = 0;
    Matrix<Real> h;
    Matrix<Real> k;
    Real h_min_eig = 0;
};

template <typename Real = double>
struct GramPairing {
    Matrix<Real> m_g;
    Real norm = 0;     // largest singular value of M_G
    Real hs_norm = 0;  // Frobenius norm of M_G
};

// Whether a block operator commutes (A-like) or anticommutes (B-like) with
// the doubled-space conjugation.
enum class BlockSymmetry { Commuting, Anticommuting };

// Self-adjoint operator on the doubled space with a fixed conjugation
// symmetry; `full` is the 2n x 2n matrix, block accessors are views.
template <typename Real = double>
struct BlockOperator {
    Index modes = 0;
    Matrix<Real> full;
    BlockSymmetry symmetry = BlockSymmetry::Commuting;

    auto tl() const { return full.topLeftCorner(modes, modes); }
    auto tr() const { return full.topRightCorner(modes, modes); }
    auto bl() const { return full.bottomLeftCorner(modes, modes); }
    auto br() const { return full.bottomRightCorner(modes, modes); }
};

// The (U, V) blocks of a Bogoliubov map; the full doubled-space matrix is
// [[U, conj(V)], [V, conj(U)]].
template <typename Real = double>
struct BogoliubovMap {
    Matrix<Real> u;
    Matrix<Real> v;
};

template <typename Real>
struct BogoliubovCertificate {
    // 0: U*U - 1 - V*V, 1: UU* - 1 - conj(V)V^T, 2: U^T V - V^T U,
    // 3: W*SW - S, 4: WSW* - S; all Frobenius, relative to the block sizes.
    std::array<Real, 5> relation_residuals{};
    bool pass = false;
};

template <typename Real>
struct ShaleReport {
    Real v_hs = 0;
};

// S = diag(1, -1) on the doubled space.
template <typename Real>
Matrix<Real> symplectic_sign(Index n) {
    Matrix<Real> s = Matrix<Real>::Identity(2 * n, 2 * n);
    s.bottomRightCorner(n, n) *= Real(-1);
    return s;
}

// Conjugate a doubled-space matrix by the conjugation: both block indices
// swap and every entry is conjugated.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
doubled_conjugation(const Eigen::MatrixBase<Derived>& m) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
    if (m.rows() != m.cols() || m.rows() % 2 != 0) {
        throw DimensionMismatch("doubled_conjugation: matrix must be 2n x 2n");
    }
    const Index n = m.rows() / 2;
    Mat out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = m.derived().bottomRightCorner(n, n).conjugate();
    out.topRightCorner(n, n) = m.derived().bottomLeftCorner(n, n).conjugate();
    out.bottomLeftCorner(n, n) = m.derived().topRightCorner(n, n).conjugate();
    out.bottomRightCorner(n, n) = m.derived().topLeftCorner(n, n).conjugate();
    return out;
}

// Apply the doubled-space conjugation to column vectors: swap halves and
// conjugate. Accepts a 2n x m matrix of columns.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
doubled_conjugation_columns(const Eigen::MatrixBase<Derived>& cols) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
    if (cols.rows() % 2 != 0) {
        throw DimensionMismatch(
            "doubled_conjugation_columns: rows must be even");
    }
    const Index n = cols.rows() / 2;
    Mat out(2 * n, cols.cols());
    out.topRows(n) = cols.derived().bottomRows(n).conjugate();
    out.bottomRows(n) = cols.derived().topRows(n).conjugate();
    return out;
}

template <typename Real>
Matrix<Real> assemble_bogoliubov(const BogoliubovMap<Real>& m) {
    const Index n = m.u.rows();
    if (m.u.cols() != n || m.v.rows() != n || m.v.cols() != n) {
        throw DimensionMismatch("assemble_bogoliubov: blocks must be square");
    }
    Matrix<Real> w(2 * n, 2 * n);
    w.topLeftCorner(n, n) = m.u;
    w.topRightCorner(n, n) = m.v.conjugate();
    w.bottomLeftCorner(n, n) = m.v;
    w.bottomRightCorner(n, n) = m.u.conjugate();
    return w;
}

template <typename DerivedH, typename DerivedK>
Problem<RealOf<DerivedH>> validate_problem(
    const Eigen::MatrixBase<DerivedH>& h_in,
    const Eigen::MatrixBase<DerivedK>& k_in) {
    using Real = RealOf<DerivedH>;
    const Matrix<Real> h = h_in.template cast<Complex<Real>>();
    const Matrix<Real> k = k_in.template cast<Complex<Real>>();
    if (h.rows() != h.cols() || k.rows() != k.cols() || h.rows() != k.rows()) {
        throw DimensionMismatch("validate_problem: h and K must be square "
                                "with matching dimension");
    }
    if (h.rows() == 0) {
        throw InvalidParams("validate_problem: dimension must be positive");
    }
    require_hermitian(h, "validate_problem (h)");
    {
        const Real scale = relative_scale(k.norm());
        if (symmetric_defect(k) > Real(1e-12) * scale) {
            throw NotSymmetricPairing("validate_problem: K is not symmetric");
        }
    }
    Problem<Real> p;
    p.dim = h.rows();
    p.h = ((h + h.adjoint()) / Real(2)).eval();
    p.k = ((k + k.transpose()) / Real(2)).eval();
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(p.h,
                                                   Eigen::EigenvaluesOnly);
    p.h_min_eig = es.eigenvalues().minCoeff();
    if (p.h_min_eig <= Real(0)) {
        throw NotPositive("validate_problem: h has eigenvalue " +
                          std::to_string(p.h_min_eig) + " <= 0");
    }
    return p;
}

template <typename Real>
GramPairing<Real> gram_pairing(const Problem<Real>& p) {
    GramPairing<Real> g;
    const Matrix<Real> h_inv_half = hermitian_function(p.h, Spectral::InvSqrt);
    g.m_g = h_inv_half * p.k.conjugate() * h_inv_half.transpose();
    g.m_g = ((g.m_g + g.m_g.transpose()) / Real(2)).eval();
    g.norm = operator_norm(g.m_g);
    g.hs_norm = g.m_g.norm();
    return g;
}

// The block Hamiltonian [[h, conj(K)], [K, conj(h)]]; commutes with the
// conjugation exactly because the blocks are built from h and K directly.
template <typename Real>
BlockOperator<Real> assemble_block_hamiltonian(const Problem<Real>& p) {
    const Index n = p.dim;
    BlockOperator<Real> a;
    a.modes = n;
    a.symmetry = BlockSymmetry::Commuting;
    a.full.resize(2 * n, 2 * n);
    a.full.topLeftCorner(n, n) = p.h;
    a.full.topRightCorner(n, n) = p.k.conjugate();
    a.full.bottomLeftCorner(n, n) = p.k;
    a.full.bottomRightCorner(n, n) = p.h.conjugate();
    return a;
}

// Build an anticommuting block operator from a full matrix by projecting
// onto the exact symmetry class; rejects inputs whose defect exceeds rtol.
template <typename Real>
BlockOperator<Real> anticommuting_block(const Matrix<Real>& full,
                                        Real rtol = Real(1e-10)) {
    if (full.rows() != full.cols() || full.rows() % 2 != 0) {
        throw DimensionMismatch("anticommuting_block: matrix must be 2n x 2n");
    }
    const Real scale = relative_scale(full.norm());
    require_hermitian(full, "anticommuting_block", rtol);
    if ((full + doubled_conjugation(full)).norm() > rtol * scale) {
        throw NotAntisymmetric(
            "anticommuting_block: operator does not anticommute with the "
            "conjugation");
    }
    BlockOperator<Real> b;
    b.modes = full.rows() / 2;
    b.symmetry = BlockSymmetry::Anticommuting;
    b.full = ((full + full.adjoint()) / Real(2)).eval();
    b.full = ((b.full - doubled_conjugation(b.full)) / Real(2)).eval();
    return b;
}

// Residuals of the Bogoliubov relations, each relative to the squared size
// of the blocks so that hyperbolically large maps are judged fairly.
template <typename Real>
BogoliubovCertificate<Real> validate_bogoliubov(const BogoliubovMap<Real>& m,
                                                Real tol) {
    const Index n = m.u.rows();
    if (m.u.cols() != n || m.v.rows() != n || m.v.cols() != n) {
        throw DimensionMismatch("validate_bogoliubov: blocks must be square");
    }
    BogoliubovCertificate<Real> cert;
    const Matrix<Real> id = Matrix<Real>::Identity(n, n);
    const Real block_scale =
        relative_scale(m.u.squaredNorm() + m.v.squaredNorm());
    cert.relation_residuals[0] =
        (m.u.adjoint() * m.u - id - m.v.adjoint() * m.v).norm() / block_scale;
    cert.relation_residuals[1] =
        (m.u * m.u.adjoint() - id - m.v.conjugate() * m.v.transpose()).norm() /
        block_scale;
    cert.relation_residuals[2] =
        (m.u.transpose() * m.v - m.v.transpose() * m.u).norm() / block_scale;

    const Matrix<Real> w = assemble_bogoliubov(m);
    const Matrix<Real> s = symplectic_sign<Real>(n);
    const Real full_scale = relative_scale(w.squaredNorm());
    cert.relation_residuals[3] =
        (w.adjoint() * s * w - s).norm() / full_scale;
    cert.relation_residuals[4] = (w * s * w.adjoint() - s).norm() / full_scale;

    cert.pass = true;
    for (const Real r : cert.relation_residuals) {
        if (!(r <= tol)) cert.pass = false;
    }
    return cert;
}

template <typename Real>
ShaleReport<Real> shale_check(const BogoliubovMap<Real>& m) {
    return ShaleReport<Real>{m.v.norm()};
}

}  // namespace bdg

#endif
