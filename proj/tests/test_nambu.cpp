#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bdg/nambu.hpp"
#include "test_support.hpp"

using bdgtest::Cplx;
using bdgtest::Mat;
using bdgtest::Rng;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("validate_problem accepts a positive h with symmetric K") {
    const Mat h = diag2(1.0, 4.0);
    Mat k(2, 2);
    k << Cplx(0.1, 0.2), Cplx(0.3, -0.1), Cplx(0.3, -0.1), Cplx(0.0, 0.5);
    const auto p = bdg::validate_problem(h, k);
    CHECK(p.dim == 2);
    CHECK(p.h_min_eig == doctest::Approx(1.0));
    CHECK((p.h - h).norm() == doctest::Approx(0.0));
    CHECK((p.k - k).norm() == doctest::Approx(0.0));
}

TEST_CASE("validate_problem rejects bad inputs") {
    const Mat h = diag2(1.0, 4.0);

    SUBCASE("antisymmetric pairing") {
        Mat k(2, 2);
        k << 0.0, 0.3, -0.3, 0.0;
        CHECK_THROWS_AS(bdg::validate_problem(h, k),
                        bdg::NotSymmetricPairing);
    }
    SUBCASE("h with a zero mode") {
        CHECK_THROWS_AS(bdg::validate_problem(diag2(0.0, 1.0), Mat::Zero(2, 2)),
                        bdg::NotPositive);
    }
    SUBCASE("h with a negative eigenvalue") {
        CHECK_THROWS_AS(
            bdg::validate_problem(diag2(-0.5, 1.0), Mat::Zero(2, 2)),
            bdg::NotPositive);
    }
    SUBCASE("non-Hermitian h") {
        Mat bad(2, 2);
        bad << 1.0, Cplx(0.0, 0.4), Cplx(0.0, 0.4), 2.0;
        CHECK_THROWS_AS(bdg::validate_problem(bad, Mat::Zero(2, 2)),
                        bdg::NotSymmetric);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(bdg::validate_problem(h, Mat::Zero(3, 3)),
                        bdg::DimensionMismatch);
    }
    SUBCASE("empty problem") {
        CHECK_THROWS_AS(bdg::validate_problem(Mat::Zero(0, 0), Mat::Zero(0, 0)),
                        bdg::InvalidParams);
    }
}

TEST_CASE("gram_pairing on a diagonal problem divides mode by mode") {
    const auto p = bdg::validate_problem(diag2(1.0, 4.0), diag2(0.5, 1.0));
    const auto g = bdg::gram_pairing(p);
    CHECK((g.m_g - diag2(0.5, 0.25)).norm() <= 1e-12);
    CHECK(g.norm == doctest::Approx(0.5));
    CHECK(g.hs_norm == doctest::Approx(std::sqrt(0.3125)));
}

TEST_CASE("gram_pairing stays symmetric and submultiplicative") {
    Rng rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::Index n = 1 + rng.integer(0, 5);
        const Mat h = bdgtest::random_positive(n, rng, 0.2);
        const Mat k = bdgtest::random_symmetric(n, rng);
        const auto p = bdg::validate_problem(h, k);
        const auto g = bdg::gram_pairing(p);
        CHECK(bdg::symmetric_defect(g.m_g) == 0.0);
        const double h_inv_norm =
            bdg::operator_norm(bdg::hermitian_function(p.h, bdg::Spectral::Inverse));
        CHECK(g.norm <= bdg::operator_norm(p.k) * h_inv_norm + 1e-12);
        CHECK(g.norm <= g.hs_norm + 1e-14);
    }
}

TEST_CASE("assemble_block_hamiltonian reproduces the single mode example") {
    const auto p = bdg::validate_problem(Mat::Identity(1, 1),
                                         Mat::Identity(1, 1) * 0.6);
    const auto a = bdg::assemble_block_hamiltonian(p);
    Mat expect(2, 2);
    expect << 1.0, 0.6, 0.6, 1.0;
    CHECK((a.full - expect).norm() == doctest::Approx(0.0));
    Eigen::SelfAdjointEigenSolver<Mat> es(a.full);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.4));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.6));
}

TEST_CASE("the block Hamiltonian commutes with the conjugation exactly") {
    Rng rng(72);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::Index n = 1 + rng.integer(0, 5);
        const auto p = bdg::validate_problem(
            bdgtest::random_positive(n, rng, 0.2),
            bdgtest::random_symmetric(n, rng));
        const auto a = bdg::assemble_block_hamiltonian(p);
        CHECK(a.symmetry == bdg::BlockSymmetry::Commuting);
        CHECK((bdg::doubled_conjugation(a.full) - a.full).norm() == 0.0);
        CHECK(bdg::hermitian_defect(a.full) == 0.0);
    }
}

TEST_CASE("doubled_conjugation is an involution and flips the sign matrix") {
    Rng rng(73);
    const Mat m = bdgtest::random_matrix(6, 6, rng);
    CHECK((bdg::doubled_conjugation(bdg::doubled_conjugation(m)) - m).norm() ==
          0.0);
    const Mat s = bdg::symplectic_sign<double>(3);
    CHECK((bdg::doubled_conjugation(s) + s).norm() == 0.0);
    CHECK_THROWS_AS(bdg::doubled_conjugation(Mat::Zero(3, 3)),
                    bdg::DimensionMismatch);
}

TEST_CASE("anticommuting_block accepts true anticommuting operators") {
    SUBCASE("signed product of the single mode example") {
        const Mat b = diag2(0.8, -0.8);
        const auto blk = bdg::anticommuting_block(b);
        CHECK(blk.modes == 1);
        CHECK((blk.full - b).norm() == 0.0);
    }
    SUBCASE("projected random Hermitian input") {
        Rng rng(74);
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::Index n = 1 + rng.integer(0, 4);
            const Mat f0 = bdgtest::random_hermitian(2 * n, rng);
            const Mat f = (f0 - bdg::doubled_conjugation(f0)) / 2.0;
            const auto blk = bdg::anticommuting_block(f);
            CHECK((blk.full - f).norm() <= 1e-14 * f.norm());
            CHECK((blk.full + bdg::doubled_conjugation(blk.full)).norm() ==
                  0.0);
        }
    }
    SUBCASE("rejects a commuting operator") {
        const auto p = bdg::validate_problem(Mat::Identity(1, 1),
                                             Mat::Identity(1, 1) * 0.6);
        const auto a = bdg::assemble_block_hamiltonian(p);
        CHECK_THROWS_AS(bdg::anticommuting_block(a.full),
                        bdg::NotAntisymmetric);
    }
}

TEST_CASE("validate_bogoliubov accepts the identity and hyperbolic maps") {
    SUBCASE("identity") {
        bdg::BogoliubovMap<double> m{Mat::Identity(3, 3), Mat::Zero(3, 3)};
        const auto cert = bdg::validate_bogoliubov(m, 1e-12);
        CHECK(cert.pass);
        for (double r : cert.relation_residuals) CHECK(r == 0.0);
    }
    SUBCASE("large hyperbolic rotation stays within relative tolerance") {
        Rng rng(75);
        const Eigen::Index n = 4;
        const Mat q = bdgtest::random_unitary(n, rng);
        const double t = 20.0;
        bdg::BogoliubovMap<double> m{std::cosh(t) * q,
                                     std::sinh(t) * q.conjugate()};
        const auto cert = bdg::validate_bogoliubov(m, 1e-12);
        CHECK(cert.pass);
    }
}

TEST_CASE("validate_bogoliubov rejects maps breaking the relations") {
    SUBCASE("U = V = identity") {
        bdg::BogoliubovMap<double> m{Mat::Identity(2, 2), Mat::Identity(2, 2)};
        const auto cert = bdg::validate_bogoliubov(m, 1e-9);
        CHECK_FALSE(cert.pass);
        CHECK(cert.relation_residuals[0] > 0.1);
    }
    SUBCASE("asymmetric U^T V") {
        Mat v(2, 2);
        v << 0.0, 0.1, -0.1, 0.0;
        Mat u = Mat::Identity(2, 2) * std::sqrt(1.01);
        bdg::BogoliubovMap<double> m{u, v};
        const auto cert = bdg::validate_bogoliubov(m, 1e-9);
        CHECK_FALSE(cert.pass);
        CHECK(cert.relation_residuals[2] > 1e-3);
    }
    SUBCASE("block shape mismatch") {
        bdg::BogoliubovMap<double> m{Mat::Identity(2, 2), Mat::Zero(3, 3)};
        CHECK_THROWS_AS(bdg::validate_bogoliubov(m, 1e-9),
                        bdg::DimensionMismatch);
    }
}

TEST_CASE("shale_check reports the Hilbert-Schmidt size of V") {
    Mat v(2, 2);
    v << 0.3, 0.0, 0.0, 0.4;
    bdg::BogoliubovMap<double> m{Mat::Identity(2, 2), v};
    CHECK(bdg::shale_check(m).v_hs == doctest::Approx(0.5));
}

TEST_CASE("assemble_bogoliubov lays out the four blocks") {
    Rng rng(76);
    const Mat u = bdgtest::random_matrix(3, 3, rng);
    const Mat v = bdgtest::random_matrix(3, 3, rng);
    const Mat w = bdg::assemble_bogoliubov(bdg::BogoliubovMap<double>{u, v});
    CHECK((w.topLeftCorner(3, 3) - u).norm() == 0.0);
    CHECK((w.bottomLeftCorner(3, 3) - v).norm() == 0.0);
    CHECK((w.topRightCorner(3, 3) - v.conjugate()).norm() == 0.0);
    CHECK((w.bottomRightCorner(3, 3) - u.conjugate()).norm() == 0.0);
    CHECK((bdg::doubled_conjugation(w) - w).norm() == 0.0);
}
