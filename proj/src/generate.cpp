#include "bdg/generate.hpp"

#include <cmath>
#include <random>

#include "bdg/errors.hpp"

namespace bdg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bit-exact uniform/gaussian stream; avoids std:: distributions, whose
// output is implementation defined.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    double gauss() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return std::sqrt(-2.0 * std::log(u)) *
               std::cos(2.0 * kPi * uniform());
    }

    Complex<double> cgauss() { return {gauss(), gauss()}; }

    Index integer(Index lo, Index hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<Index>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

Matrix<double> random_symmetric(Index n, Stream& s) {
    Matrix<double> a(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) a(r, c) = s.cgauss();
    }
    return (a + a.transpose()) / 2.0;
}

// Hermitian positive matrix with prescribed log-uniform eigenvalues, so the
// conditioning of h is controlled rather than accidental.
Matrix<double> random_positive(Index n, Stream& s, double eig_lo,
                               double eig_hi) {
    Matrix<double> a(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) a(r, c) = s.cgauss();
    }
    const Eigen::HouseholderQR<Matrix<double>> qr(a);
    const Matrix<double> q = qr.householderQ();
    RealVector<double> eigs(n);
    for (Index i = 0; i < n; ++i) {
        eigs(i) = std::exp(s.uniform(std::log(eig_lo), std::log(eig_hi)));
    }
    if (n > 0) eigs(0) = eig_lo;
    if (n > 1) eigs(n - 1) = eig_hi;
    return q * eigs.cast<Complex<double>>().asDiagonal() * q.adjoint();
}

double pairing_norm(const Matrix<double>& h, const Matrix<double>& k) {
    const Matrix<double> hm = hermitian_function(h, Spectral::InvSqrt);
    const Matrix<double> m = hm * k.conjugate() * hm.transpose();
    return operator_norm(((m + m.transpose()) / 2.0).eval());
}

// Rescales k so the pairing strength hits the target exactly (to 1e-12).
Matrix<double> rescale_pairing(const Matrix<double>& h,
                               const Matrix<double>& k0, double gnorm) {
    const double base = pairing_norm(h, k0);
    if (base <= 0.0) {
        throw InvalidParams("generated pairing is zero; cannot rescale");
    }
    double lo = 0.0;
    double hi = 2.0 * gnorm / base;
    while (pairing_norm(h, (hi * k0).eval()) < gnorm) hi *= 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = (lo + hi) / 2.0;
        const double g = pairing_norm(h, (mid * k0).eval());
        if (std::abs(g - gnorm) <= 1e-12) return mid * k0;
        (g < gnorm ? lo : hi) = mid;
    }
    return ((lo + hi) / 2.0) * k0;
}

Problem<double> generate_commutative(Index modes, double gnorm, Stream& s) {
    RealVector<double> h(modes), g(modes);
    for (Index i = 0; i < modes; ++i) {
        h(i) = s.uniform(0.5, 2.0);
        g(i) = s.uniform(0.0, gnorm);
    }
    g(s.integer(0, modes - 1)) = gnorm;
    Matrix<double> hm = Matrix<double>::Zero(modes, modes);
    Matrix<double> km = Matrix<double>::Zero(modes, modes);
    for (Index i = 0; i < modes; ++i) {
        const double sign = s.uniform() < 0.5 ? -1.0 : 1.0;
        hm(i, i) = h(i);
        km(i, i) = sign * g(i) * h(i);
    }
    return validate_problem(hm, km);
}

Problem<double> generate_random(Index modes, double gnorm, Stream& s) {
    const Matrix<double> h = random_positive(modes, s, 0.2, 2.0);
    const Matrix<double> k0 = random_symmetric(modes, s);
    return validate_problem(h, rescale_pairing(h, k0, gnorm));
}

Problem<double> generate_laplacian(Index modes, double gnorm, Stream& s) {
    Matrix<double> h = Matrix<double>::Zero(modes, modes);
    for (Index i = 0; i < modes; ++i) {
        h(i, i) = 2.0 + s.uniform(0.1, 1.1);
        if (i + 1 < modes) {
            h(i, i + 1) = -1.0;
            h(i + 1, i) = -1.0;
        }
    }
    Matrix<double> k0 = Matrix<double>::Zero(modes, modes);
    for (Index i = 0; i < modes; ++i) {
        k0(i, i) = s.cgauss();
        if (i + 1 < modes) {
            const Complex<double> z = s.cgauss();
            k0(i, i + 1) = z;
            k0(i + 1, i) = z;
        }
    }
    return validate_problem(h, rescale_pairing(h, k0, gnorm));
}

}  // namespace

InstanceKind instance_kind_from_string(const std::string& name) {
    if (name == "commutative") return InstanceKind::Commutative;
    if (name == "random") return InstanceKind::Random;
    if (name == "laplacian") return InstanceKind::Laplacian;
    throw InvalidParams("unknown instance kind: " + name);
}

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::Commutative: return "commutative";
        case InstanceKind::Random: return "random";
        case InstanceKind::Laplacian: return "laplacian";
    }
    return "unknown";
}

Problem<double> generate_instance(InstanceKind kind, Index modes,
                                  double gnorm, std::uint64_t seed) {
    if (modes < 1) throw InvalidParams("modes must be at least 1");
    if (!(gnorm > 0.0) || !(gnorm < 1.0)) {
        throw InvalidParams("gnorm must lie in (0, 1)");
    }
    Stream s(seed);
    switch (kind) {
        case InstanceKind::Commutative:
            return generate_commutative(modes, gnorm, s);
        case InstanceKind::Random:
            return generate_random(modes, gnorm, s);
        case InstanceKind::Laplacian:
            return generate_laplacian(modes, gnorm, s);
    }
    throw InvalidParams("unknown instance kind");
}

}  // namespace bdg
