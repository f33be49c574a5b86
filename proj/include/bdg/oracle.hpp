#ifndef BDG_ORACLE_HPP
#define BDG_ORACLE_HPP

// Closed-form reference solution for simultaneously diagonal h and k.
//
// When h and k are real diagonal matrices every mode decouples, and the
// diagonalizing map is an explicit per-mode 2x2 hyperbolic rotation. The
// formulas here are evaluated directly from the scalar closed forms, with
// no eigensolver involved, so they serve as an independent ground truth
// for the iterative pipeline.

#include <cmath>
#include <vector>

#include "bdg/errors.hpp"
#include "bdg/nambu.hpp"
#include "bdg/types.hpp"

namespace bdg {

// Diagonal instance: h_diag > 0 entrywise, k_diag real and possibly signed.
// g_diag = |k|/h is recorded at construction; the instance admits a gapped
// diagonalization iff max g < 1.
template <typename Real = double>
struct CommutativeInstance {
    RealVector<Real> h_diag;
    RealVector<Real> k_diag;
    RealVector<Real> g_diag;
};

template <typename Real = double>
struct CommutativeDiagonalization {
    RealVector<Real> xi_diag;
    std::vector<Eigen::Matrix<Real, 2, 2>> v_blocks;
    Real v_opnorm = 0;
    Real v_hs = 0;
    Real e0 = 0;
};

// Ratio sweep of the closed forms against their advertised asymptotic
// envelopes, over a user-supplied grid of coupling strengths.
template <typename Real = double>
struct ScalingReport {
    RealVector<Real> grid;
    RealVector<Real> map_norm_ratio;
    RealVector<Real> pairing_hs_ratio;
    RealVector<Real> energy_ratio;
    Real bracket_lo = Real(0.25);
    Real bracket_hi = Real(4);
    bool within_brackets = false;
    Real max_saturation_defect = 0;
};

template <typename DerivedH, typename DerivedK>
CommutativeInstance<RealOf<DerivedH>> commutative_instance(
    const Eigen::MatrixBase<DerivedH>& h_diag,
    const Eigen::MatrixBase<DerivedK>& k_diag) {
    using Real = RealOf<DerivedH>;
    if (h_diag.size() == 0) {
        throw InvalidParams("commutative instance needs at least one mode");
    }
    if (h_diag.size() != k_diag.size() || h_diag.cols() != 1 ||
        k_diag.cols() != 1) {
        throw DimensionMismatch("h_diag and k_diag must be equal-length "
                                "column vectors");
    }
    CommutativeInstance<Real> c;
    c.h_diag = h_diag.real();
    c.k_diag = k_diag.real();
    if (c.h_diag.minCoeff() <= Real(0)) {
        throw NotPositive("diagonal h must be strictly positive");
    }
    c.g_diag = c.k_diag.cwiseAbs().cwiseQuotient(c.h_diag);
    return c;
}

namespace detail {

template <typename Real>
void require_gapped(const CommutativeInstance<Real>& c) {
    const Real g = c.g_diag.maxCoeff();
    if (g >= Real(1)) throw GapViolation(static_cast<double>(g));
}

}  // namespace detail

template <typename Real>
CommutativeDiagonalization<Real> commutative_diagonalize(
    const CommutativeInstance<Real>& c) {
    detail::require_gapped(c);
    const Index n = c.h_diag.size();
    CommutativeDiagonalization<Real> d;
    d.xi_diag.resize(n);
    d.v_blocks.reserve(static_cast<std::size_t>(n));
    Real hs_sq = 0;
    Real opnorm = 0;
    for (Index i = 0; i < n; ++i) {
        const Real h = c.h_diag(i);
        const Real k = c.k_diag(i);
        const Real g = c.g_diag(i);
        const Real s = std::sqrt(Real(1) - g * g);
        const Real cc = std::sqrt(Real(0.5) + Real(0.5) / s);
        const Real t = (k / h) / (Real(1) + s);
        d.xi_diag(i) = h * s;
        Eigen::Matrix<Real, 2, 2> block;
        block << cc, -cc * t, -cc * t, cc;
        d.v_blocks.push_back(block);
        hs_sq += cc * cc * t * t;
        opnorm = std::max(opnorm, cc * (Real(1) + std::abs(t)));
    }
    d.v_opnorm = opnorm;
    d.v_hs = std::sqrt(hs_sq);
    d.e0 = Real(0.5) * (d.xi_diag - c.h_diag).sum();
    return d;
}

// Assembles the per-mode blocks into a full map on the doubled space,
// suitable for validate_bogoliubov.
template <typename Real>
BogoliubovMap<Real> commutative_map(const CommutativeDiagonalization<Real>& d) {
    const Index n = d.xi_diag.size();
    BogoliubovMap<Real> m;
    m.u = Matrix<Real>::Zero(n, n);
    m.v = Matrix<Real>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& block = d.v_blocks[static_cast<std::size_t>(i)];
        m.u(i, i) = block(0, 0);
        m.v(i, i) = block(1, 0);
    }
    return m;
}

// Per-mode check of -k^2/(2h) >= xi - h >= -k^2/h.
template <typename Real>
bool commutative_energy_bounds(const CommutativeInstance<Real>& c) {
    detail::require_gapped(c);
    const auto d = commutative_diagonalize(c);
    for (Index i = 0; i < c.h_diag.size(); ++i) {
        const Real h = c.h_diag(i);
        const Real k = c.k_diag(i);
        const Real shift = d.xi_diag(i) - h;
        const Real slack = Real(1e-12) * std::max(Real(1), h);
        if (shift > -Real(0.5) * k * k / h + slack) return false;
        if (shift < -k * k / h - slack) return false;
    }
    return true;
}

template <typename Real>
ScalingReport<Real> commutative_scaling_relations(const RealVector<Real>& g_grid) {
    if (g_grid.size() == 0) throw InvalidParams("empty coupling grid");
    if (g_grid.minCoeff() <= Real(0) || g_grid.maxCoeff() >= Real(1)) {
        throw InvalidParams("coupling grid must lie strictly inside (0, 1)");
    }
    const Index m = g_grid.size();
    ScalingReport<Real> report;
    report.grid = g_grid;
    report.map_norm_ratio.resize(m);
    report.pairing_hs_ratio.resize(m);
    report.energy_ratio.resize(m);
    bool within = true;
    Real defect = 0;
    for (Index i = 0; i < m; ++i) {
        const Real g = g_grid(i);
        RealVector<Real> one = RealVector<Real>::Ones(1);
        const auto d = commutative_diagonalize(
            commutative_instance(one, (g * one).eval()));
        const Real envelope = std::pow(Real(1) - g, Real(-0.25));
        report.map_norm_ratio(i) = d.v_opnorm / envelope;
        report.pairing_hs_ratio(i) = d.v_hs / (envelope * g);
        report.energy_ratio(i) = std::abs(d.e0) / (g * g / Real(2));
        defect = std::max(defect,
                          std::abs(d.v_opnorm *
                                       std::pow(Real(1) - g, Real(0.25)) *
                                       std::pow(Real(1) + g, Real(-0.25)) -
                                   Real(1)));
        for (const Real r : {report.map_norm_ratio(i),
                             report.pairing_hs_ratio(i),
                             report.energy_ratio(i)}) {
            within = within && r >= report.bracket_lo && r <= report.bracket_hi;
        }
    }
    report.within_brackets = within;
    report.max_saturation_defect = defect;
    return report;
}

}  // namespace bdg

#endif
