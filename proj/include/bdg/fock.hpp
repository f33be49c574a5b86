#ifndef BDG_FOCK_HPP
#define BDG_FOCK_HPP

// Truncated bosonic Fock space: an independent brute-force oracle for the
// diagonalizer. The basis is graded by total particle number N <= n_max,
// lexicographic inside each shell. Ladder operators are exact on the
// truncated space; the CCR holds exactly on the sector N <= n_max - 1, and
// every verification reports the ground-state mass near the truncation
// shell so that unreliable comparisons fail loudly instead of silently.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "bdg/diagonalizer.hpp"
#include "bdg/errors.hpp"
#include "bdg/nambu.hpp"
#include "bdg/operator_core.hpp"
#include "bdg/types.hpp"

namespace bdg {

inline constexpr std::size_t kFockDimensionCap = 200000;

struct FockBasis {
    Index modes = 0;
    int n_max = 0;
    std::vector<std::vector<int>> states;
    std::map<std::vector<int>, Index> index;

    Index dim() const { return static_cast<Index>(states.size()); }
};

template <typename Real = double>
struct FockOperator {
    FockBasis basis;
    Matrix<Real> matrix;
};

template <typename Real = double>
struct DensityMatrixPair {
    Matrix<Real> gamma;
    Matrix<Real> alpha;
};

template <typename Real = double>
struct SpectrumReport {
    RealVector<Real> levels;     // lowest eigenvalues of the Fock Hamiltonian
    RealVector<Real> reference;  // E0 + sums over the spectrum of xi
    RealVector<Real> level_errors;
    Real gamma_error = 0;
    Real alpha_error = 0;
    Real tail_weight = 0;
};

namespace detail {

inline std::size_t fock_dimension(Index modes, int n_max) {
    double approx = 1.0;
    for (Index i = 1; i <= modes; ++i) {
        approx *= static_cast<double>(n_max + i) / static_cast<double>(i);
    }
    if (approx > 1e15) {
        throw SizeOverflow(static_cast<std::size_t>(1e15), kFockDimensionCap);
    }
    unsigned long long dim = 1;
    for (Index i = 1; i <= modes; ++i) {
        dim = dim * static_cast<unsigned long long>(n_max + i) /
              static_cast<unsigned long long>(i);
    }
    return static_cast<std::size_t>(dim);
}

inline void enumerate_shell(Index mode, int remaining, std::vector<int>& occ,
                            std::vector<std::vector<int>>& out) {
    if (mode + 1 == static_cast<Index>(occ.size())) {
        occ[mode] = remaining;
        out.push_back(occ);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        occ[mode] = k;
        enumerate_shell(mode + 1, remaining - k, occ, out);
    }
}

}  // namespace detail

inline FockBasis build_basis(Index modes, int n_max,
                             std::size_t cap = kFockDimensionCap) {
    if (modes < 1 || n_max < 0) {
        throw InvalidParams("build_basis: need modes >= 1 and n_max >= 0");
    }
    const std::size_t dim = detail::fock_dimension(modes, n_max);
    if (dim > cap) {
        throw SizeOverflow(dim, cap);
    }
    FockBasis b;
    b.modes = modes;
    b.n_max = n_max;
    b.states.reserve(dim);
    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    for (int total = 0; total <= n_max; ++total) {
        detail::enumerate_shell(0, total, occ, b.states);
    }
    for (Index i = 0; i < b.dim(); ++i) {
        b.index.emplace(b.states[static_cast<std::size_t>(i)], i);
    }
    return b;
}

// Annihilation matrices a_i in the truncated basis; creation operators are
// their adjoints, which truncates the raised component above N = n_max.
template <typename Real = double>
std::vector<Eigen::SparseMatrix<Complex<Real>>> ladder_matrices(
    const FockBasis& b) {
    using Sparse = Eigen::SparseMatrix<Complex<Real>>;
    using Triplet = Eigen::Triplet<Complex<Real>>;
    const Index d = b.dim();
    std::vector<Sparse> out;
    out.reserve(static_cast<std::size_t>(b.modes));
    for (Index m = 0; m < b.modes; ++m) {
        std::vector<Triplet> entries;
        for (Index col = 0; col < d; ++col) {
            const auto& occ = b.states[static_cast<std::size_t>(col)];
            const int n_m = occ[static_cast<std::size_t>(m)];
            if (n_m == 0) continue;
            std::vector<int> lowered = occ;
            --lowered[static_cast<std::size_t>(m)];
            const Index row = b.index.at(lowered);
            entries.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                 Complex<Real>(std::sqrt(Real(n_m)), 0));
        }
        Sparse a(d, d);
        a.setFromTriplets(entries.begin(), entries.end());
        out.push_back(std::move(a));
    }
    return out;
}

// H = sum h_mn a_m^dag a_n + (1/2) sum (K_mn a_m a_n + conj(K_mn) a_m^dag
// a_n^dag) on the truncated space. With K = 0 this is the second
// quantization dGamma(h), so the same builder also produces dGamma(xi).
template <typename Real>
FockOperator<Real> build_quadratic_hamiltonian(const FockBasis& b,
                                               const Problem<Real>& p) {
    using Sparse = Eigen::SparseMatrix<Complex<Real>>;
    if (p.dim != b.modes) {
        throw DimensionMismatch("build_quadratic_hamiltonian: problem has " +
                                std::to_string(p.dim) + " modes, basis has " +
                                std::to_string(b.modes));
    }
    const auto a = ladder_matrices<Real>(b);
    const Index d = b.dim();
    Sparse h_sparse(d, d);
    for (Index m = 0; m < b.modes; ++m) {
        const Sparse a_m_dag = Sparse(a[static_cast<std::size_t>(m)]
                                          .adjoint());
        for (Index n = 0; n < b.modes; ++n) {
            if (p.h(m, n) != Complex<Real>(0)) {
                h_sparse += p.h(m, n) *
                            Sparse(a_m_dag * a[static_cast<std::size_t>(n)]);
            }
            if (p.k(m, n) != Complex<Real>(0)) {
                const Sparse lower = Sparse(a[static_cast<std::size_t>(m)] *
                                            a[static_cast<std::size_t>(n)]);
                h_sparse += (p.k(m, n) / Real(2)) * lower +
                            (std::conj(p.k(m, n)) / Real(2)) *
                                Sparse(lower.adjoint());
            }
        }
    }
    FockOperator<Real> op;
    op.basis = b;
    op.matrix = Matrix<Real>(h_sparse);
    op.matrix = ((op.matrix + op.matrix.adjoint()) / Real(2)).eval();
    return op;
}

// gamma_mn = <psi, a_n^dag a_m psi>, alpha_mn = <psi, a_n^dag a_m^dag psi>.
// Both are exact under the truncation: a_m psi lives in shells <= n_max - 1,
// so the component raised past the cutoff is orthogonal to every factor.
template <typename Real>
DensityMatrixPair<Real> one_particle_density_matrices(
    const FockBasis& b, const Vector<Real>& psi) {
    if (psi.size() != b.dim()) {
        throw DimensionMismatch(
            "one_particle_density_matrices: state dimension mismatch");
    }
    if (std::abs(psi.norm() - Real(1)) > Real(1e-10)) {
        throw NotNormalized("one_particle_density_matrices: state norm " +
                            std::to_string(psi.norm()));
    }
    const auto a = ladder_matrices<Real>(b);
    const Index n = b.modes;
    std::vector<Vector<Real>> lowered(static_cast<std::size_t>(n));
    std::vector<Vector<Real>> raised(static_cast<std::size_t>(n));
    for (Index m = 0; m < n; ++m) {
        lowered[static_cast<std::size_t>(m)] =
            a[static_cast<std::size_t>(m)] * psi;
        raised[static_cast<std::size_t>(m)] =
            a[static_cast<std::size_t>(m)].adjoint() * psi;
    }
    DensityMatrixPair<Real> pair;
    pair.gamma.resize(n, n);
    pair.alpha.resize(n, n);
    for (Index m = 0; m < n; ++m) {
        for (Index k = 0; k < n; ++k) {
            pair.gamma(m, k) = lowered[static_cast<std::size_t>(k)].dot(
                lowered[static_cast<std::size_t>(m)]);
            pair.alpha(m, k) = lowered[static_cast<std::size_t>(k)].dot(
                raised[static_cast<std::size_t>(m)]);
        }
    }
    pair.gamma = ((pair.gamma + pair.gamma.adjoint()) / Real(2)).eval();
    pair.alpha = ((pair.alpha + pair.alpha.transpose()) / Real(2)).eval();
    return pair;
}

// Eq.-(6) style energy from the one-particle density matrices alone.
template <typename Real>
Real quadratic_form_energy(const DensityMatrixPair<Real>& pair,
                           const Problem<Real>& p) {
    if (pair.gamma.rows() != p.dim || pair.alpha.rows() != p.dim) {
        throw DimensionMismatch("quadratic_form_energy: dimension mismatch");
    }
    const Matrix<Real> h_half = hermitian_function(p.h, Spectral::Sqrt);
    return trace((h_half * pair.gamma * h_half).eval()).real() +
           trace((p.k.conjugate() * pair.alpha).eval()).real();
}

namespace detail {

// The lowest `count` values of E0 + sum_i m_i xi_i over occupation vectors.
template <typename Real>
RealVector<Real> reference_levels(const RealVector<Real>& xi, Real e0,
                                  Index count) {
    std::vector<Real> sums;
    const int budget = static_cast<int>(count);
    // Depth-first enumeration of all occupations with at most `count`
    // quanta: any occupation with more quanta exceeds at least `count`
    // of the enumerated sums, so the lowest `count` values are exact.
    struct Frame {
        Index mode;
        int used;
        Real value;
    };
    std::vector<Frame> frames{{0, 0, Real(0)}};
    while (!frames.empty()) {
        const Frame f = frames.back();
        frames.pop_back();
        if (f.mode == xi.size()) {
            sums.push_back(f.value);
            continue;
        }
        for (int q = 0; q + f.used <= budget; ++q) {
            frames.push_back({f.mode + 1, f.used + q,
                              f.value + Real(q) * xi(f.mode)});
        }
    }
    std::sort(sums.begin(), sums.end());
    RealVector<Real> out(count);
    for (Index j = 0; j < count; ++j) {
        out(j) = e0 + sums[static_cast<std::size_t>(j)];
    }
    return out;
}

}  // namespace detail

// Spectral and density-matrix verification of a diagonalization result
// against exact diagonalization on the truncated Fock space.
template <typename Real>
SpectrumReport<Real> verify_spectrum(const Problem<Real>& p,
                                     const DiagonalizationResult<Real>& r,
                                     int n_max, Index levels) {
    if (levels < 1) {
        throw InvalidParams("verify_spectrum: need at least one level");
    }
    const auto gp = gram_pairing(p);
    if (gp.norm >= Real(1)) {
        throw GapViolation(gp.norm);
    }
    const FockBasis basis = build_basis(p.dim, n_max);
    if (basis.dim() < levels) {
        throw InvalidParams("verify_spectrum: truncated space smaller than "
                            "the requested level count");
    }
    const auto h_op = build_quadratic_hamiltonian(basis, p);
    Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(h_op.matrix);
    if (es.info() != Eigen::Success) {
        throw Error("verify_spectrum: eigensolver failed");
    }

    SpectrumReport<Real> report;
    const Vector<Real> ground = es.eigenvectors().col(0);
    Real tail = 0;
    for (Index i = 0; i < basis.dim(); ++i) {
        int total = 0;
        for (const int q : basis.states[static_cast<std::size_t>(i)]) {
            total += q;
        }
        if (total >= basis.n_max - 1) {
            tail += std::norm(ground(i));
        }
    }
    report.tail_weight = tail;
    if (tail > Real(1e-6)) {
        throw TruncationUnreliable(static_cast<double>(tail));
    }

    Eigen::SelfAdjointEigenSolver<Matrix<Real>> xi_es(r.xi,
                                                      Eigen::EigenvaluesOnly);
    report.levels = es.eigenvalues().head(levels);
    report.reference = detail::reference_levels<Real>(
        xi_es.eigenvalues(), r.ground_energy, levels);
    report.level_errors =
        (report.levels - report.reference).cwiseAbs();

    const auto pair = one_particle_density_matrices(basis, ground);
    const auto [x, y] = detail::vacuum_pair(r.map);
    report.gamma_error = (pair.gamma - x).norm();
    Matrix<Real> alpha_expected = y;
    Index i_max = 0, j_max = 0;
    pair.alpha.cwiseAbs().maxCoeff(&i_max, &j_max);
    const Complex<Real> got = pair.alpha(i_max, j_max);
    const Complex<Real> want = alpha_expected(i_max, j_max);
    if (std::abs(got) > Real(0) && std::abs(want) > Real(0)) {
        alpha_expected *= (got / std::abs(got)) * (std::abs(want) / want);
    }
    report.alpha_error = (pair.alpha - alpha_expected).norm();
    return report;
}

// Trace-form lower bounds: the unconditional -(1/2) Tr(K h^{-1} K^dag) and
// the sharpened variant -(sqrt(delta')/2) Tr(K h^{-1} K^dag), delta' = |G|^2.
template <typename Real>
std::pair<Real, Real> sharpened_lower_bounds(const Problem<Real>& p) {
    const Matrix<Real> h_inv = hermitian_function(p.h, Spectral::Inverse);
    const Real tr = trace((p.k * h_inv * p.k.adjoint()).eval()).real();
    const Real g = gram_pairing(p).norm;
    return {-tr / Real(2), -g * tr / Real(2)};
}

template <typename Real>
bool lower_bound_check(const Problem<Real>& p, Real e0) {
    const auto [plain, sharpened] = sharpened_lower_bounds(p);
    const Real slack = Real(1e-10);
    return e0 >= plain - slack && e0 >= sharpened - slack;
}

}  // namespace bdg

#endif
