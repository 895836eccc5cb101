#include "ellqdet/rmatrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "ellqdet/special_functions.hpp"

namespace ellqdet {

namespace {

constexpr double kPi = LogComplex::kPi;
constexpr std::array<RKind, 6> kKinds{RKind::EllipticR, RKind::Homogeneous, RKind::Principal,
                                      RKind::NonElliptic, RKind::EllipticRhat, RKind::EightVertex};

std::string describe(LogComplex x)
{
    const cplx v = x.value();
    return fmt::format("{:.6g}{:+.6g}i (log {:.6g}{:+.6g}i)", v.real(), v.imag(), x.log().real(), x.log().imag());
}

cplx guarded_theta(LogComplex x, LogComplex base, const TruncationPolicy& policy, const char* what)
{
    const auto est = theta_estimate(x, base, policy);
    if (est.min_factor < kPoleThreshold) {
        throw PoleError(fmt::format("{}: Theta vanishes at argument {} (base {})", what, describe(x), describe(base)));
    }
    return est.value;
}

cplx guarded_pochhammer(LogComplex x, std::span<const LogComplex> bases, const TruncationPolicy& policy,
                        const char* what)
{
    const auto est = pochhammer_estimate(x, bases, policy);
    if (est.min_factor < kPoleThreshold) {
        throw PoleError(fmt::format("{}: Pochhammer symbol vanishes at argument {}", what, describe(x)));
    }
    return est.value;
}

cplx guarded_linear(cplx denominator, const char* what)
{
    if (std::abs(denominator) < kPoleThreshold) {
        throw PoleError(fmt::format("{}: denominator {:.3g}{:+.3g}i vanishes", what, denominator.real(), denominator.imag()));
    }
    return denominator;
}

void check_index(int n, int i)
{
    if (i < 1 || i > n) throw DimensionError(fmt::format("index {} outside 1..{}", i, n));
}

int mod_n(int x, int n) { return ((x % n) + n) % n; }

TensorOperator diagonal(int n, const std::vector<cplx>& d)
{
    Eigen::VectorXcd v(static_cast<long>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<long>(i)) = d[i];
    return {n, d.size() == static_cast<std::size_t>(n) ? 1 : 2, v.asDiagonal().toDenseMatrix()};
}

TensorOperator build_elliptic(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    const cplx normalization = eta(params, z);
    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(n * n, n * n);
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            for (int c = 1; c <= n; ++c) {
                const int d = mod_n(a + c - b - 1, n) + 1;
                m((a - 1) * n + (c - 1), (b - 1) * n + (d - 1)) =
                    static_cast<double>(omega_sign(n, a, b, c, d)) * normalization * s_coeff(params, a, b, c, z);
            }
        }
    }
    return {n, 2, std::move(m)};
}

TensorOperator build_eight_vertex(const ModelParams& params, LogComplex z)
{
    if (params.n != 2) throw KindError(fmt::format("eightvertex requires N = 2, got N = {}", params.n));
    const auto& pol = params.policy;
    const LogComplex p = params.log_p;
    const LogComplex q = params.log_q;
    const LogComplex p2 = p.pow(2.0);
    const LogComplex z2 = z.pow(2.0);
    const LogComplex q2 = q.pow(2.0);
    const auto th = [&](LogComplex x) { return theta(x, p2, pol); };
    const auto den = [&](LogComplex x) { return guarded_theta(x, p2, pol, "eightvertex"); };

    const cplx a = z.inv().value() * th(p * z2) * th(p * q2) / den(p * q2 * z2);
    const cplx b = (q / z).value() * th(z2) * th(p * q2) / den(q2 * z2);
    const cplx c = th(p * z2) * th(q2) / den(q2 * z2);
    const cplx d = -(p.pow(0.5) / (q * z2)).value() * th(z2) * th(q2) / den(p * q2 * z2);

    const std::array<LogComplex, 1> pb{p};
    const std::array<LogComplex, 1> p2b{p2};
    const cplx pp = pochhammer_inf(p, pb, pol);
    const cplx prefactor = kappa_inv(params, z2) * pochhammer_inf(p2, p2b, pol) / (pp * pp);

    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = a;
    m(1, 1) = m(2, 2) = b;
    m(1, 2) = m(2, 1) = c;
    m(0, 3) = m(3, 0) = d;
    return {2, 2, prefactor * m};
}

// Shared layout of the three trigonometric R-matrices:
// diag_same on e_ii⊗e_ii, diag_other(i, j) on e_ii⊗e_jj, flip(i, j) on e_ij⊗e_ji.
template <typename DiagOther, typename Flip>
TensorOperator trigonometric(int n, cplx normalization, DiagOther diag_other, Flip flip)
{
    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(n * n, n * n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const long ij = (i - 1) * n + (j - 1);
            const long ji = (j - 1) * n + (i - 1);
            if (i == j) {
                m(ij, ij) = 1.0;
            } else {
                m(ij, ij) = diag_other(i, j);
                m(ij, ji) = flip(i, j);
            }
        }
    }
    return {n, 2, normalization * m};
}

// Exponent (2j - 2i - N)/N for i < j and (2j - 2i + N)/N for i > j.
double principal_exponent(int n, int i, int j)
{
    return static_cast<double>(i < j ? 2 * j - 2 * i - n : 2 * j - 2 * i + n) / n;
}

}  // namespace

std::string_view to_string(RKind kind)
{
    switch (kind) {
    case RKind::EllipticR: return "elliptic";
    case RKind::EllipticRhat: return "elliptic-hat";
    case RKind::EightVertex: return "eightvertex";
    case RKind::Homogeneous: return "homogeneous";
    case RKind::Principal: return "principal";
    case RKind::NonElliptic: return "nonelliptic";
    }
    return "unknown";
}

RKind parse_kind(std::string_view tag)
{
    for (RKind k : kKinds) {
        if (to_string(k) == tag) return k;
    }
    throw KindError(fmt::format("unknown R-matrix kind '{}'", tag));
}

std::span<const RKind> all_kinds() { return kKinds; }

bool is_elliptic(RKind kind)
{
    return kind == RKind::EllipticR || kind == RKind::EllipticRhat || kind == RKind::EightVertex;
}

int omega_sign(int n, int a, int b, int c, int d)
{
    const int diff = a + c - b - d;
    if (mod_n(diff, n) != 0) throw DimensionError("omega_sign: entry violates a + c = b + d (mod N)");
    return mod_n(diff / n, 2) == 0 ? 1 : -1;
}

cplx s_hat(const ModelParams& params, int a, int b, int c, LogComplex z)
{
    const int n = params.n;
    const LogComplex pn = params.log_p.pow(n);
    const LogComplex z2 = z.pow(2.0);
    const LogComplex q2 = params.log_q.pow(2.0);
    const auto pk = [&](int k) { return params.log_p.pow(k); };
    const cplx num = theta(pk(n + c - a) * q2 * z2, pn, params.policy);
    const cplx den = guarded_theta(pk(n + c - b) * z2, pn, params.policy, "S") *
                     guarded_theta(pk(n + b - a) * q2, pn, params.policy, "S");
    return num / den;
}

cplx s_coeff(const ModelParams& params, int a, int b, int c, LogComplex z)
{
    check_index(params.n, a);
    check_index(params.n, b);
    const double n = params.n;
    const cplx log_prefactor = 2.0 * (b - a) / n * z.log() + 2.0 * (c - b) / n * params.log_q.log() +
                               static_cast<double>((b - a) * (c - b)) / n * params.log_p.log();
    return std::exp(log_prefactor) * s_hat(params, a, b, c, z);
}

cplx kappa_inv(const ModelParams& params, LogComplex z2)
{
    const int n = params.n;
    const LogComplex p = params.log_p;
    const LogComplex q2n = params.log_q.pow(2.0 * n);
    const LogComplex q2 = params.log_q.pow(2.0);
    const LogComplex pq = p * params.log_q.pow(2.0 * n - 2.0);
    const std::array<LogComplex, 2> bases{p, q2n};
    const auto& pol = params.policy;

    const cplx num = pochhammer_inf(q2n / z2, bases, pol) * pochhammer_inf(q2 * z2, bases, pol) *
                     pochhammer_inf(p / z2, bases, pol) * pochhammer_inf(pq * z2, bases, pol);
    const cplx den = guarded_pochhammer(q2n * z2, bases, pol, "kappa") * guarded_pochhammer(q2 / z2, bases, pol, "kappa") *
                     guarded_pochhammer(p * z2, bases, pol, "kappa") * guarded_pochhammer(pq / z2, bases, pol, "kappa");
    return num / den;
}

cplx eta(const ModelParams& params, LogComplex z)
{
    params.validate();
    const int n = params.n;
    const LogComplex p = params.log_p;
    const LogComplex pn = p.pow(n);
    const LogComplex z2 = z.pow(2.0);
    const LogComplex q2 = params.log_q.pow(2.0);
    const auto& pol = params.policy;
    const std::array<LogComplex, 1> pnb{pn};
    const std::array<LogComplex, 1> pb{p};

    const cplx ratio = pochhammer_inf(pn, pnb, pol) / pochhammer_inf(p, pb, pol);
    const cplx thetas = theta(q2, p, pol) * theta(p * z2, p, pol) / guarded_theta(q2 * z2, p, pol, "eta");
    return z.pow(2.0 / n).value() * kappa_inv(params, z2) * ratio * ratio * ratio * thetas;
}

cplx tau(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    const LogComplex base = params.log_q.pow(2.0 * n);
    const LogComplex z2 = z.pow(2.0);
    const cplx num = theta(params.log_q * z2, base, params.policy);
    const cplx den = guarded_theta(params.log_q / z2, base, params.policy, "tau");
    return z.pow(2.0 / n - 2.0).value() * num / den;
}

cplx unitarity_function(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    const LogComplex base = params.log_q.pow(2.0 * n);
    const LogComplex z2 = z.pow(2.0);
    const LogComplex q2 = params.log_q.pow(2.0);
    const auto& pol = params.policy;
    const cplx num = theta(q2 * z2, base, pol) * theta(q2 / z2, base, pol);
    const cplx den = guarded_theta(z2, base, pol, "U") * guarded_theta(z2.inv(), base, pol, "U");
    return params.log_q.pow(2.0 / n - 2.0).value() * num / den;
}

cplx rho(const ModelParams& params, LogComplex z)
{
    params.validate();
    const int n = params.n;
    const LogComplex q = params.log_q;
    const LogComplex q2n = q.pow(2.0 * n);
    const std::array<LogComplex, 1> bases{q2n};
    const auto& pol = params.policy;
    const cplx num = pochhammer_inf(q.pow(2.0) * z, bases, pol) * pochhammer_inf(q.pow(2.0 * n - 2.0) * z, bases, pol);
    const cplx den = guarded_pochhammer(z, bases, pol, "rho") * guarded_pochhammer(q2n * z, bases, pol, "rho");
    return q.pow(1.0 / n - 1.0).value() * num / den;
}

TensorOperator build_r(const ModelParams& params, RKind kind, LogComplex z)
{
    params.validate();
    const int n = params.n;
    const cplx q = params.q();
    switch (kind) {
    case RKind::EllipticR: return build_elliptic(params, z);
    case RKind::EllipticRhat: {
        const LogComplex arg = params.log_q.pow(0.5) / z;
        return tau(params, arg) * build_elliptic(params, z);
    }
    case RKind::EightVertex: return build_eight_vertex(params, z);
    case RKind::Homogeneous: {
        const cplx zv = z.value();
        const cplx den = guarded_linear(1.0 - q * q * zv, "homogeneous");
        return trigonometric(
            n, rho(params, z), [&](int, int) { return q * (1.0 - zv) / den; },
            [&](int i, int j) { return (1.0 - q * q) / den * (i < j ? cplx{1.0} : zv); });
    }
    case RKind::Principal: {
        const cplx z2 = z.pow(2.0).value();
        const cplx den = guarded_linear(1.0 - q * q * z2, "principal");
        return trigonometric(
            n, rho(params, z.pow(2.0)), [&](int, int) { return q * (1.0 - z2) / den; },
            [&](int i, int j) { return z.value() * (1.0 - q * q) / den * z.pow(principal_exponent(n, i, j)).value(); });
    }
    case RKind::NonElliptic: {
        const cplx z2 = z.pow(2.0).value();
        const cplx den = guarded_linear(1.0 - q * q * z2, "nonelliptic");
        return trigonometric(
            n, rho(params, z.pow(2.0)),
            [&](int i, int j) { return q * (1.0 - z2) / den * params.log_q.pow(principal_exponent(n, i, j)).value(); },
            [&](int i, int j) { return z.value() * (1.0 - q * q) / den * z.pow(principal_exponent(n, i, j)).value(); });
    }
    }
    throw KindError("build_r: unknown kind");
}

TensorOperator build_r_regularized(const ModelParams& params, RKind kind, LogComplex z, double radius, int points)
{
    if (points < 2) throw DomainError("build_r_regularized: need points >= 2");
    if (!(radius > 0.0)) {
        radius = std::min({1e-2, std::abs(params.log_q.log()) / 8.0, std::abs(params.log_p.log()) / 8.0});
    }
    TensorOperator sum = TensorOperator::zero(params.n, 2);
    for (int k = 0; k < points; ++k) {
        const cplx shift = radius * std::exp(cplx{0.0, 2.0 * kPi * k / points});
        sum = sum + build_r(params, kind, LogComplex(z.log() + shift));
    }
    return cplx{1.0 / points} * sum;
}

TensorOperator build_v(int n, LogComplex z)
{
    std::vector<cplx> d;
    for (int i = 1; i <= n; ++i) d.push_back(z.pow(static_cast<double>(n + 1 - 2 * i) / n).value());
    return diagonal(n, d);
}

Rational alpha(int n, int i, int j)
{
    check_index(n, i);
    check_index(n, j);
    if (i == j) return Rational(0);
    if (i < j) return Rational(1, 2) + Rational(i - j, n);
    return -alpha(n, j, i);
}

TensorOperator build_f(const ModelParams& params)
{
    const int n = params.n;
    std::vector<cplx> d;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const Rational a = alpha(n, i, j);
            d.push_back(params.log_q.pow(static_cast<double>(a.numerator()) / static_cast<double>(a.denominator())).value());
        }
    }
    return diagonal(n, d);
}

TensorOperator build_g(int n)
{
    std::vector<cplx> d;
    for (int i = 1; i <= n; ++i) d.push_back(std::exp(cplx{0.0, 2.0 * kPi * i / n}));
    return diagonal(n, d);
}

TensorOperator build_h(int n)
{
    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = 1.0;
    return {n, 1, std::move(m)};
}

TensorOperator build_g_half(int n, int branch)
{
    std::vector<cplx> d;
    for (int i = 1; i <= n; ++i) {
        const double s = (branch == 1 && i % 2 == 1) ? -1.0 : 1.0;
        d.push_back(s * std::exp(cplx{0.0, kPi * i / n}));
    }
    return diagonal(n, d);
}

TensorOperator build_h_gauged(int n)
{
    const auto gh = build_g_half(n);
    return gh * build_h(n) * gh.inverse();
}

}  // namespace ellqdet
