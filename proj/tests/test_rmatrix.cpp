#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellqdet/rmatrix.hpp"
#include "ellqdet/sampling.hpp"
#include "oracles.hpp"

using namespace ellqdet;
using Matrix = Eigen::MatrixXcd;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

Matrix kron(const TensorOperator& a, const TensorOperator& b) { return oracle::kron(a.matrix(), b.matrix()); }

// Cartesian power with the branch fixed by a logarithm.
cplx cpow(LogComplex x, double a) { return std::exp(a * x.log()); }

}  // namespace

TEST_CASE("S coefficients: period N in c and joint Z_N shift")
{
    Sampler s(3);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelParams params = s.params(3);
        const LogComplex z = s.spectral();
        for (int a = 1; a <= 3; ++a) {
            for (int b = 1; b <= 3; ++b) {
                for (int c = -2; c <= 4; ++c) {
                    const cplx base = s_coeff(params, a, b, c, z);
                    CHECK(rel(s_coeff(params, a, b, c + 3, z), base) < 1e-12);
                    for (int n = 1; n <= 3; ++n) {
                        CHECK(rel(s_hat(params, a + n, b + n, c + n, z), s_hat(params, a, b, c, z)) < 1e-12);
                        if (a + n <= 3 && b + n <= 3) CHECK(rel(s_coeff(params, a + n, b + n, c + n, z), base) < 1e-12);
                    }
                }
            }
        }
    }
    const ModelParams params = Sampler(1).params(3);
    CHECK_THROWS_AS(s_coeff(params, 0, 1, 1, LogComplex{}), DimensionError);
    CHECK_THROWS_AS(s_coeff(params, 1, 4, 1, LogComplex{}), DimensionError);
}

TEST_CASE("kappa_inv matches the direct double-product oracle")
{
    Sampler s(5);
    for (int n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const ModelParams params = s.params(n);
            const LogComplex z2 = s.spectral().pow(2.0);
            const cplx p = params.p();
            const cplx q = params.q();
            const cplx q2n = std::pow(q, 2 * n);
            const cplx w = z2.value();
            const auto P = [&](cplx x) { return oracle::pochhammer2(x, p, q2n, 60); };
            const cplx pq = p * std::pow(q, 2 * n - 2);
            const cplx expected = P(q2n / w) * P(q * q * w) * P(p / w) * P(pq * w) /
                                  (P(q2n * w) * P(q * q / w) * P(p * w) * P(pq / w));
            CHECK(rel(kappa_inv(params, z2), expected) < 1e-12);
        }
    }
}

TEST_CASE("eta is finite and nonzero at generic points")
{
    Sampler s(6);
    for (int n = 2; n <= 4; ++n) {
        const ModelParams params = s.params(n);
        const cplx e = eta(params, s.spectral());
        CHECK(std::isfinite(std::abs(e)));
        CHECK(std::abs(e) > 1e-8);
    }
}

TEST_CASE("tau: q^N periodicity, pole, and the unitarity scalar")
{
    Sampler s(7);
    for (int n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const ModelParams params = s.params(n);
            const LogComplex z = s.spectral();
            CHECK(rel(tau(params, params.log_q.pow(n) * z), tau(params, z)) < 1e-11);

            const LogComplex qh = params.log_q.pow(0.5);
            const cplx u = unitarity_function(params, z);
            CHECK(rel(tau(params, qh / z) * tau(params, qh * z), u) < 1e-11);

            const cplx q2n = std::pow(params.q(), 2 * n);
            const cplx zz = z.value();
            const cplx expected = cpow(z, 2.0 / n - 2.0) * oracle::theta(params.q() * zz * zz, q2n) /
                                  oracle::theta(params.q() / (zz * zz), q2n);
            CHECK(rel(tau(params, z), expected) < 1e-12);
        }
        const ModelParams params = s.params(n);
        CHECK_THROWS_AS(tau(params, params.log_q.pow(0.5)), PoleError);
    }
}

TEST_CASE("rho matches the direct product oracle")
{
    Sampler s(8);
    for (int n = 2; n <= 4; ++n) {
        const ModelParams params = s.params(n);
        const LogComplex z = s.spectral();
        const cplx q = params.q();
        const cplx q2n = std::pow(q, 2 * n);
        const cplx zv = z.value();
        const cplx expected = cpow(params.log_q, 1.0 / n - 1.0) * oracle::pochhammer(q * q * zv, q2n, 400) *
                              oracle::pochhammer(std::pow(q, 2 * n - 2) * zv, q2n, 400) /
                              (oracle::pochhammer(zv, q2n, 400) * oracle::pochhammer(q2n * zv, q2n, 400));
        CHECK(rel(rho(params, z), expected) < 1e-13);
    }
}

TEST_CASE("elliptic selection rule and sign factor")
{
    Sampler s(9);
    for (int n = 2; n <= 4; ++n) {
        const ModelParams params = s.params(n);
        const LogComplex z = s.spectral();
        const Matrix r = build_r(params, RKind::EllipticR, z).matrix();
        const cplx e = eta(params, z);
        for (int a = 1; a <= n; ++a)
            for (int c = 1; c <= n; ++c)
                for (int b = 1; b <= n; ++b)
                    for (int d = 1; d <= n; ++d) {
                        const cplx entry = r((a - 1) * n + (c - 1), (b - 1) * n + (d - 1));
                        if ((a + c - b - d) % n != 0) {
                            CHECK(entry == cplx{0.0, 0.0});
                            CHECK_THROWS_AS(omega_sign(n, a, b, c, d), DimensionError);
                            continue;
                        }
                        const int sgn = omega_sign(n, a, b, c, d);
                        CHECK(std::abs(sgn) == 1);
                        CHECK(rel(entry, static_cast<double>(sgn) * e * s_coeff(params, a, b, c, z)) < 1e-14);
                    }
    }
}

TEST_CASE("N = 2 zero pattern is the eight-vertex pattern")
{
    Sampler s(10);
    const ModelParams params = s.params(2);
    const Matrix r = build_r(params, RKind::EllipticR, s.spectral()).matrix();
    const bool nonzero[4][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK((r(i, j) != cplx{0.0, 0.0}) == nonzero[i][j]);
}

TEST_CASE("eight-vertex builder agrees with the generic builder")
{
    Sampler s(11);
    const Matrix dd = kron(build_g_half(2), build_g_half(2));
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams params = s.params(2);
        const LogComplex z = s.spectral();
        const Matrix r = build_r(params, RKind::EllipticR, z).matrix();
        const Matrix r8 = build_r(params, RKind::EightVertex, z).matrix();
        for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 3}}) {
            CHECK(rel(r8(i, j), r(i, j)) < 1e-12);
        }
        CHECK(rel(r8(0, 3), -r(0, 3)) < 1e-12);
        CHECK(rel(dd * r8 * dd.inverse(), r) < 1e-12);
    }
}

TEST_CASE("trigonometric kinds")
{
    Sampler s(12);
    const ModelParams params = s.params(3);
    CHECK_THROWS_AS(build_r(params, RKind::Homogeneous, LogComplex{}), PoleError);
    CHECK_THROWS_AS(build_r(params, RKind::Principal, LogComplex{}), PoleError);

    // Homogeneous at generic z, written out entry by entry.
    const LogComplex z = s.spectral();
    const cplx q = params.q();
    const cplx zv = z.value();
    const Matrix r = build_r(params, RKind::Homogeneous, z).matrix();
    const cplx rh = rho(params, z);
    CHECK(rel(r(0, 0), rh) < 1e-14);
    CHECK(rel(r(1, 1), rh * q * (1.0 - zv) / (1.0 - q * q * zv)) < 1e-14);
    CHECK(rel(r(1, 3), rh * (1.0 - q * q) / (1.0 - q * q * zv)) < 1e-14);
    CHECK(rel(r(3, 1), rh * zv * (1.0 - q * q) / (1.0 - q * q * zv)) < 1e-14);
    CHECK(r(1, 2) == cplx{0.0, 0.0});

    // Non-elliptic differs from principal only by the q powers on e_ii⊗e_jj.
    const Matrix pr = build_r(params, RKind::Principal, z).matrix();
    const Matrix ne = build_r(params, RKind::NonElliptic, z).matrix();
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const long ij = (i - 1) * 3 + (j - 1);
            const long ji = (j - 1) * 3 + (i - 1);
            CHECK(ne(ij, ji) == pr(ij, ji));
            if (i == j) continue;
            const double e = static_cast<double>(i < j ? 2 * j - 2 * i - 3 : 2 * j - 2 * i + 3) / 3;
            CHECK(rel(ne(ij, ij), pr(ij, ij) * cpow(params.log_q, e)) < 1e-14);
        }
    }
}

TEST_CASE("kind tags")
{
    for (RKind k : all_kinds()) CHECK(parse_kind(to_string(k)) == k);
    CHECK(all_kinds().size() == 6);
    CHECK_THROWS_AS(parse_kind("belavin"), KindError);
    CHECK(is_elliptic(RKind::EightVertex));
    CHECK_FALSE(is_elliptic(RKind::Principal));
    const ModelParams params = Sampler(1).params(3);
    CHECK_THROWS_AS(build_r(params, RKind::EightVertex, LogComplex(cplx{0.1, 0.2})), KindError);
}

TEST_CASE("V, alpha, F")
{
    for (int n = 2; n <= 5; ++n) CHECK(build_v(n, LogComplex{}).matrix().isIdentity(0.0));
    const LogComplex z(cplx{0.3, 0.7});
    const TensorOperator v = build_v(3, z);
    CHECK(rel(v(0, 0), std::exp(2.0 / 3.0 * z.log())) < 1e-15);
    CHECK(v(1, 1) == cplx{1.0, 0.0});

    CHECK(alpha(2, 1, 2) == Rational(0));
    CHECK(alpha(3, 1, 2) == Rational(1, 6));
    CHECK(alpha(3, 1, 3) == Rational(-1, 6));
    for (int n = 2; n <= 6; ++n)
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) CHECK(alpha(n, j, i) == -alpha(n, i, j));
    CHECK_THROWS(alpha(3, 0, 1));

    Sampler s(13);
    CHECK(build_f(s.params(2)).matrix().isIdentity(1e-15));
    const ModelParams params = s.params(3);
    const TensorOperator f = build_f(params);
    const TensorOperator f21 = swap_slots(f);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            const long idx = (i - 1) * 3 + (j - 1);
            const Rational a = alpha(3, j, i);
            const double e = static_cast<double>(a.numerator()) / static_cast<double>(a.denominator());
            CHECK(rel(f21(idx, idx), cpow(params.log_q, e)) < 1e-14);
        }
}

TEST_CASE("g, h and g^{1/2}")
{
    for (int n = 2; n <= 5; ++n) {
        Matrix gn = Matrix::Identity(n, n);
        Matrix hn = Matrix::Identity(n, n);
        for (int k = 0; k < n; ++k) {
            gn = gn * build_g(n).matrix();
            hn = hn * build_h(n).matrix();
        }
        CHECK((gn - Matrix::Identity(n, n)).norm() < 1e-14);
        CHECK(hn.isIdentity(0.0));
        for (int branch : {0, 1}) {
            const Matrix gh = build_g_half(n, branch).matrix();
            CHECK((gh * gh - build_g(n).matrix()).norm() < 1e-14);
        }
        CHECK(build_h(n)(0, 1) == cplx{1.0, 0.0});
        CHECK(build_h(n)(n - 1, 0) == cplx{1.0, 0.0});
    }
}

TEST_CASE("h-invariance: literal shift at N = 2, gauged shift for all N")
{
    Sampler s(14);
    for (int n = 2; n <= 4; ++n) {
        const ModelParams params = s.params(n);
        const Matrix r = build_r(params, RKind::EllipticR, s.spectral()).matrix();
        const Matrix hg = kron(build_h_gauged(n), build_h_gauged(n));
        CHECK(rel(hg * r, r * hg) < 1e-11);
        const Matrix h = kron(build_h(n), build_h(n));
        if (n == 2) {
            CHECK(rel(h * r, r * h) < 1e-11);
        } else {
            CHECK(rel(h * r, r * h) > 1e-3);
        }
    }
}

TEST_CASE("regularized evaluation")
{
    Sampler s(15);
    const ModelParams params = s.params(3);
    const LogComplex z = s.spectral();
    CHECK(rel(build_r_regularized(params, RKind::EllipticR, z).matrix(), build_r(params, RKind::EllipticR, z).matrix()) <
          1e-12);
    CHECK(rel(build_r_regularized(params, RKind::EllipticR, LogComplex{}).matrix(), oracle::flip(3)) < 1e-12);
    CHECK_THROWS_AS(build_r_regularized(params, RKind::EllipticR, z, 0.0, 1), DomainError);
}

TEST_CASE("model parameters")
{
    const ModelParams params = ModelParams::from_values(3, {0.5, 0.1}, {0.2, -0.1}, 1.5);
    CHECK(rel(params.log_p_star().value(), params.p() * std::pow(params.q(), -3.0)) < 1e-14);
    CHECK(rel(ModelParams::from_values(3, {0.5, 0.1}, {0.2, -0.1}).log_p_star().value(), params.p()) < 1e-15);
    CHECK(params.with_p(LogComplex::from_value(0.3)).p() == cplx{0.3, 0.0} * 1.0);
    CHECK(params.validate().empty());

    CHECK_THROWS_AS(ModelParams::from_values(1, 0.5, 0.1).validate(), DomainError);
    CHECK_THROWS_AS(ModelParams::from_values(2, 0.5, 1.2).validate(), DomainError);
    CHECK_THROWS_AS(ModelParams::from_values(2, 1.01, 0.1).validate(), DomainError);
    CHECK_FALSE(ModelParams::from_values(2, cplx{0.0, 0.99999}, 0.1).validate().empty());
    CHECK_FALSE(ModelParams::from_values(3, 0.99, 0.1).validate().empty());
    CHECK_THROWS_AS(build_r(ModelParams::from_values(2, 0.5, 1.2), RKind::EllipticR, LogComplex{}), DomainError);
}

TEST_CASE("sampler is deterministic and generic")
{
    Sampler a(42);
    Sampler b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.spectral().log() == b.spectral().log());
    Sampler c(43);
    for (int i = 0; i < 100; ++i) {
        const double r = c.spectral().modulus();
        CHECK(r >= 0.5 * (1 - 1e-15));
        CHECK(r <= 2.0 * (1 + 1e-15));
        const ModelParams params = c.params(2);
        CHECK(params.validate().empty());
        CHECK(std::abs(params.p()) < 0.5 + 1e-15);
    }
    int calls = 0;
    const int got = resample_on_pole([&] {
        if (++calls < 3) throw PoleError("x");
        return calls;
    });
    CHECK(got == 3);
    CHECK_THROWS_AS(resample_on_pole([]() -> int { throw PoleError("x"); }, 4), PoleError);
}
