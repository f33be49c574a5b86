#ifndef BDG_DIAGONALIZER_HPP
#define BDG_DIAGONALIZER_HPP

// Constructive Bogoliubov diagonalization on the doubled space.
//
// The pipeline for a validated problem (h, K) with pairing strength |G| < 1:
//   A  = [[h, conj(K)], [K, conj(h)]]
//   B  = A^{1/2} S A^{1/2}          (anticommutes with the conjugation)
//   U_f diagonalizes B canonically   (fermionic block diagonalization)
//   V  = U_f |B|^{1/2} A^{-1/2}      (the bosonic Bogoliubov map)
// so that V A V* = diag(xi, conj(xi)) with xi > 0, together with a bundle of
// machine-checkable certificates: norm bounds on V, operator sandwiches,
// the stationarity equations for X = V*V and Y = U^T V, the joint spectral
// structure of (X, Y), and ground energy lower bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bdg/errors.hpp"
#include "bdg/nambu.hpp"
#include "bdg/operator_core.hpp"
#include "bdg/types.hpp"

namespace bdg {

// Deterministic ordering gauge for the eigenbasis inside the fermionic step.
// Results must agree up to this gauge; certificates are gauge independent.
enum class WOrder { DescendingXi, AscendingXi };

template <typename Real = double>
struct FermionicDiagonalization {
    Matrix<Real> unitary;  // 2n x 2n, commutes with the conjugation
    Matrix<Real> xi;       // n x n Hermitian, xi >= 0
};

template <typename Real = double>
struct QuasiFreeStructure {
    Matrix<Real> basis;        // orthonormal columns u_n
    RealVector<Real> lambdas;  // eigenvalues of X = V*V, descending
    Real residual = 0;         // worst defect of the paired eigen relations
};

template <typename Real = double>
struct CertificateBundle {
    Real g_norm = 0;
    Real g_hs = 0;

    Real v_opnorm = 0;
    Real v_opnorm_bound = 0;  // ((1+|G|)/(1-|G|))^{1/4}
    Real v_hs = 0;
    Real v_hs_bound = 0;  // 2 |G|_HS / (1-|G|)
    bool v_opnorm_bound_ok = false;
    bool v_hs_bound_ok = false;
    bool sandwich_ok = false;            // delta^{1/2} A <= |B| <= delta^{-1/2} A
    bool pairing_dominance_ok = false;   // K h^{-1} K^dag <= |G|^2 conj(h)

    bool bogoliubov_ok = false;          // canonical relations of (U, V)
    std::array<Real, 3> diag_eq_residuals{};
    bool diag_eq_ok = false;
    Real joint_structure_residual = 0;   // paired eigenstructure of (X, Y)
    Real yy_identity_residual = 0;       // |Y*Y - X - X^2|
    bool joint_structure_ok = false;
    Real offdiag_residual = 0;           // off-diagonal blocks of V A V*
    Real diag_block_residual = 0;        // diagonal blocks vs (xi, conj(xi))
    bool block_diagonal_ok = false;
    Real xi_min = 0;

    Real lower_bound_hs = 0;     // -(1/2) |K h^{-1/2}|_HS^2
    Real lower_bound_trace = 0;  // -(1/2) Tr(K h^{-1} K^dag)
    bool lower_bound_ok = false;

    bool pass() const {
        return v_opnorm_bound_ok && v_hs_bound_ok && sandwich_ok &&
               pairing_dominance_ok && bogoliubov_ok && diag_eq_ok &&
               joint_structure_ok && block_diagonal_ok && lower_bound_ok;
    }
};

template <typename Real = double>
struct DiagonalizationResult {
    BogoliubovMap<Real> map;
    Matrix<Real> xi;  // n x n Hermitian, numerically diagonal, xi > 0
    Real delta = 0;   // (1 - |G|) / (1 + |G|)
    Real ground_energy = 0;
    CertificateBundle<Real> certificates;
};

// B = A^{1/2} S A^{1/2}; Hermitian and anticommuting with the conjugation.
template <typename Real>
BlockOperator<Real> signed_block(const BlockOperator<Real>& a) {
    if (a.symmetry != BlockSymmetry::Commuting) {
        throw InvalidParams("signed_block: input must commute with the "
                            "conjugation");
    }
    const Index n = a.modes;
    const Matrix<Real> half = hermitian_function(a.full, Spectral::Sqrt);
    Matrix<Real> half_signed = half;
    half_signed.rightCols(n) *= Real(-1);
    return anticommuting_block((half_signed * half).eval());
}

namespace detail {

// X = V*V hermitized and Y = U^T V symmetrized, the quasi-free data of the
// transformed vacuum.
template <typename Real>
std::pair<Matrix<Real>, Matrix<Real>> vacuum_pair(
    const BogoliubovMap<Real>& m) {
    Matrix<Real> x = m.v.adjoint() * m.v;
    x = ((x + x.adjoint()) / Real(2)).eval();
    Matrix<Real> y = m.u.transpose() * m.v;
    y = ((y + y.transpose()) / Real(2)).eval();
    return {std::move(x), std::move(y)};
}

}  // namespace detail

// Canonical diagonalization of an anticommuting block operator: unitary U_f
// with U_f B U_f* = diag(xi, -conj(xi)), xi >= 0. The eigenbasis of the
// positive part is ordered by `order` with a deterministic phase; a kernel
// (flagged at |lambda| <= 1e-12 |B|) is split into conjugation-paired halves
// through a Takagi factorization of the restricted conjugation.
template <typename Real>
FermionicDiagonalization<Real> fermionic_block_diagonalize(
    const BlockOperator<Real>& b, WOrder order = WOrder::DescendingXi) {
    const Index n = b.modes;
    const Index d = 2 * n;
    const Real scale = relative_scale(b.full.norm());
    if (b.symmetry != BlockSymmetry::Anticommuting ||
        (b.full + doubled_conjugation(b.full)).norm() > Real(1e-10) * scale) {
        throw NotAntisymmetric(
            "fermionic_block_diagonalize: operator must anticommute with the "
            "conjugation");
    }

    Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(b.full);
    if (es.info() != Eigen::Success) {
        throw Error("fermionic_block_diagonalize: eigensolver failed");
    }
    const RealVector<Real>& evals = es.eigenvalues();
    const Real spectral_scale = evals.cwiseAbs().maxCoeff();
    const Real kernel_thr = Real(1e-12) * spectral_scale;

    std::vector<Index> positive;
    std::vector<Index> kernel;
    Index negatives = 0;
    for (Index i = 0; i < d; ++i) {
        if (std::abs(evals(i)) <= kernel_thr) {
            kernel.push_back(i);
        } else if (evals(i) > Real(0)) {
            positive.push_back(i);
        } else {
            ++negatives;
        }
    }
    if (kernel.size() % 2 != 0) {
        throw OddKernel("fermionic_block_diagonalize: kernel dimension " +
                        std::to_string(kernel.size()) + " is odd");
    }
    if (static_cast<Index>(positive.size()) != negatives) {
        throw Error("fermionic_block_diagonalize: spectrum is not symmetric");
    }
    const Index m = static_cast<Index>(kernel.size()) / 2;

    // Eigenvalues come back ascending; positive ones reversed are descending.
    std::reverse(positive.begin(), positive.end());

    Matrix<Real> w(d, n);
    Index col = 0;
    for (const Index i : positive) {
        w.col(col) = es.eigenvectors().col(i);
        w.col(col) *= phase_factor(w.col(col));
        ++col;
    }
    if (m > 0) {
        Matrix<Real> q_k(d, 2 * m);
        for (Index j = 0; j < 2 * m; ++j) {
            q_k.col(j) = es.eigenvectors().col(kernel[j]);
        }
        const Matrix<Real> c_k =
            q_k.adjoint() * doubled_conjugation_columns(q_k);
        const auto tf = takagi_factorize(c_k);
        if (tf.values.minCoeff() < Real(0.5)) {
            throw Error(
                "fermionic_block_diagonalize: kernel is not invariant under "
                "the conjugation");
        }
        const Matrix<Real> u_hat = q_k * tf.unitary;
        const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
        for (Index j = 0; j < m; ++j) {
            w.col(col) = (u_hat.col(2 * j + 1) +
                          Complex<Real>(0, 1) * u_hat.col(2 * j)) *
                         inv_sqrt2;
            w.col(col) *= phase_factor(w.col(col));
            ++col;
        }
    }
    if (order == WOrder::AscendingXi) {
        w = w.rowwise().reverse().eval();
    }

    FermionicDiagonalization<Real> out;
    Matrix<Real> columns(d, d);
    columns.leftCols(n) = w;
    columns.rightCols(n) = doubled_conjugation_columns(w);
    out.unitary = columns.adjoint();

    Matrix<Real> xi = w.adjoint() * b.full * w;
    xi = ((xi + xi.adjoint()) / Real(2)).eval();
    Matrix<Real> offdiag = xi;
    offdiag.diagonal().setZero();
    if (offdiag.norm() > Real(1e-10) * relative_scale(spectral_scale)) {
        throw Error(
            "fermionic_block_diagonalize: extracted xi is not diagonal");
    }
    out.xi = std::move(xi);
    return out;
}

// Both rigorous lower bounds for the ground energy: the Hilbert-Schmidt form
// -(1/2)|K h^{-1/2}|_HS^2 and the trace form -(1/2) Tr(K h^{-1} K^dag).
template <typename Real>
std::pair<Real, Real> ground_energy_lower_bounds(const Problem<Real>& p) {
    const Matrix<Real> h_inv_half = hermitian_function(p.h, Spectral::InvSqrt);
    const Real hs = hs_norm((p.k * h_inv_half).eval());
    const Matrix<Real> h_inv = hermitian_function(p.h, Spectral::Inverse);
    const Real tr = trace((p.k * h_inv * p.k.adjoint()).eval()).real();
    return {-hs * hs / Real(2), -tr / Real(2)};
}

template <typename Real>
bool ground_energy_bound_check(const Problem<Real>& p,
                               const DiagonalizationResult<Real>& r) {
    const auto [lb_hs, lb_trace] = ground_energy_lower_bounds(p);
    const Real slack = Real(1e-10);
    return r.ground_energy >= lb_hs - slack &&
           r.ground_energy >= lb_trace - slack;
}

// Residuals of the three stationarity equations satisfied by X = V*V and
// Y = U^T V, as absolute operator norms:
//   r1:  h X - X h + conj(K) Y - Y^dag K
//   r2:  conj(h) Y + Y h + K X + conj(X) K + K
//   r3:  U h V^dag + conj(V) conj(h) U^T + U conj(K) U^T + conj(V) K V^dag
template <typename Real>
std::array<Real, 3> diag_equation_residuals(
    const Problem<Real>& p, const DiagonalizationResult<Real>& r) {
    const auto [x, y] = detail::vacuum_pair(r.map);
    const Matrix<Real>& u = r.map.u;
    const Matrix<Real>& v = r.map.v;
    const Matrix<Real> line1 =
        p.h * x - x * p.h + p.k.conjugate() * y - y.adjoint() * p.k;
    const Matrix<Real> line2 = p.h.conjugate() * y + y * p.h + p.k * x +
                               x.conjugate() * p.k + p.k;
    const Matrix<Real> line3 = u * p.h * v.adjoint() +
                               v.conjugate() * p.h.conjugate() * u.transpose() +
                               u * p.k.conjugate() * u.transpose() +
                               v.conjugate() * p.k * v.adjoint();
    return {operator_norm(line1), operator_norm(line2), operator_norm(line3)};
}

// Joint eigenstructure of the quasi-free pair: an orthonormal basis u_n with
// X u_n = lambda_n u_n and the anti-linear pairing action realized as
// Y u_n = sqrt(lambda_n + lambda_n^2) conj(u_n). The basis is the Takagi
// basis of conj(Y): the relation conj(Y) Y = X + X^2 makes those columns
// eigenvectors of X, and the Takagi gauge fixes the phase in which both
// relations hold simultaneously.
template <typename Real>
QuasiFreeStructure<Real> quasi_free_structure(
    const DiagonalizationResult<Real>& r) {
    const auto [x, y] = detail::vacuum_pair(r.map);
    const Index n = x.rows();
    const auto tf = takagi_factorize(y.conjugate());

    QuasiFreeStructure<Real> out;
    out.basis = tf.unitary;
    out.lambdas.resize(n);
    out.residual = Real(0);
    for (Index j = 0; j < n; ++j) {
        const auto u_j = out.basis.col(j);
        const Real lambda = std::max(u_j.dot(x * u_j).real(), Real(0));
        out.lambdas(j) = lambda;
        const Real mu = std::sqrt(lambda + lambda * lambda);
        const Real defect_x = (x * u_j - lambda * u_j).norm();
        const Real defect_y = (y * u_j - mu * u_j.conjugate()).norm();
        out.residual = std::max({out.residual, defect_x, defect_y});
    }
    return out;
}

// Norm bounds, operator sandwiches, and the pairing dominance inequality.
// Fills the bound-related fields of the bundle; equation residuals and the
// remaining fields are populated by bosonic_diagonalize.
template <typename Real>
CertificateBundle<Real> certificate_bounds(const Problem<Real>& p,
                                           const DiagonalizationResult<Real>& r,
                                           Real tol = Real(1e-9)) {
    CertificateBundle<Real> c;
    const auto gp = gram_pairing(p);
    c.g_norm = gp.norm;
    c.g_hs = gp.hs_norm;
    const Real delta = (Real(1) - gp.norm) / (Real(1) + gp.norm);

    c.v_opnorm = operator_norm(assemble_bogoliubov(r.map));
    c.v_opnorm_bound = std::pow((Real(1) + gp.norm) / (Real(1) - gp.norm),
                                Real(0.25));
    c.v_opnorm_bound_ok = c.v_opnorm <= c.v_opnorm_bound * (Real(1) + tol);

    c.v_hs = r.map.v.norm();
    c.v_hs_bound = Real(2) * gp.hs_norm / (Real(1) - gp.norm);
    c.v_hs_bound_ok = c.v_hs <= c.v_hs_bound * (Real(1) + tol);

    const auto a = assemble_block_hamiltonian(p);
    const auto b = signed_block(a);
    const Matrix<Real> b_abs = hermitian_function(b.full, Spectral::Abs);
    const Real sqrt_delta = std::sqrt(delta);
    c.sandwich_ok =
        psd_dominates((sqrt_delta * a.full).eval(), b_abs, tol) &&
        psd_dominates(b_abs, (a.full / sqrt_delta).eval(), tol);

    const Matrix<Real> h_inv = hermitian_function(p.h, Spectral::Inverse);
    const Matrix<Real> lhs = p.k * h_inv * p.k.adjoint();
    const Matrix<Real> rhs = gp.norm * gp.norm * p.h.conjugate();
    c.pairing_dominance_ok = psd_dominates(
        ((lhs + lhs.adjoint()) / Real(2)).eval(),
        ((rhs + rhs.adjoint()) / Real(2)).eval(), tol);
    return c;
}

// Full pipeline: validated problem -> Bogoliubov map, excitation operator,
// ground energy, and the complete certificate bundle.
template <typename Real>
DiagonalizationResult<Real> bosonic_diagonalize(
    const Problem<Real>& p, Real tol = Real(1e-9),
    WOrder order = WOrder::DescendingXi) {
    const Index n = p.dim;
    const auto gp = gram_pairing(p);
    if (gp.norm >= Real(1)) {
        throw GapViolation(gp.norm);
    }

    const auto a = assemble_block_hamiltonian(p);
    const auto b = signed_block(a);
    const auto fd = fermionic_block_diagonalize(b, order);
    const Matrix<Real> b_abs = hermitian_function(b.full, Spectral::Abs);
    const Matrix<Real> b_abs_half = hermitian_function(b_abs, Spectral::Sqrt);
    const Matrix<Real> a_inv_half = hermitian_function(a.full,
                                                       Spectral::InvSqrt);
    const Matrix<Real> v_full = fd.unitary * b_abs_half * a_inv_half;

    DiagonalizationResult<Real> r;
    r.map.u = v_full.topLeftCorner(n, n);
    r.map.v = v_full.bottomLeftCorner(n, n);
    r.xi = fd.xi;
    r.delta = (Real(1) - gp.norm) / (Real(1) + gp.norm);

    const Matrix<Real> h_half = hermitian_function(p.h, Spectral::Sqrt);
    const auto [x, y] = detail::vacuum_pair(r.map);
    r.ground_energy = trace((h_half * x * h_half).eval()).real() +
                      trace((p.k.conjugate() * y).eval()).real();

    CertificateBundle<Real>& c = r.certificates;
    c = certificate_bounds(p, r, tol);
    c.bogoliubov_ok = validate_bogoliubov(r.map, tol).pass;

    c.diag_eq_residuals = diag_equation_residuals(p, r);
    const Real eq_scale = Real(1e-8) *
        relative_scale(operator_norm(p.h) + operator_norm(p.k));
    c.diag_eq_ok = c.diag_eq_residuals[0] <= eq_scale &&
                   c.diag_eq_residuals[1] <= eq_scale &&
                   c.diag_eq_residuals[2] <= eq_scale;

    const auto qf = quasi_free_structure(r);
    c.joint_structure_residual = qf.residual;
    c.yy_identity_residual =
        operator_norm((y.adjoint() * y - x - x * x).eval());
    c.joint_structure_ok =
        c.joint_structure_residual <= Real(1e-8) &&
        c.yy_identity_residual <= Real(1e-9) * relative_scale(x.norm());

    const Matrix<Real> transformed = v_full * a.full * v_full.adjoint();
    const Real block_scale = relative_scale(transformed.norm());
    c.offdiag_residual =
        std::max(transformed.topRightCorner(n, n).norm(),
                 transformed.bottomLeftCorner(n, n).norm()) / block_scale;
    c.diag_block_residual =
        std::max((transformed.topLeftCorner(n, n) - r.xi).norm(),
                 (transformed.bottomRightCorner(n, n) - r.xi.conjugate())
                     .norm()) / block_scale;
    c.block_diagonal_ok =
        c.offdiag_residual <= tol && c.diag_block_residual <= tol;

    Eigen::SelfAdjointEigenSolver<Matrix<Real>> xi_es(r.xi,
                                                      Eigen::EigenvaluesOnly);
    c.xi_min = xi_es.eigenvalues().minCoeff();

    const auto [lb_hs, lb_trace] = ground_energy_lower_bounds(p);
    c.lower_bound_hs = lb_hs;
    c.lower_bound_trace = lb_trace;
    c.lower_bound_ok = ground_energy_bound_check(p, r);
    return r;
}

}  // namespace bdg

#endif
