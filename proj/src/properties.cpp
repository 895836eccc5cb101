#include "ellqdet/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "ellqdet/permutations.hpp"
#include "ellqdet/special_functions.hpp"

namespace ellqdet {

namespace {

using Matrix = Eigen::MatrixXcd;
using Clock = std::chrono::steady_clock;

constexpr double kPi = LogComplex::kPi;

class Timer {
public:
    double elapsed_ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - start_).count(); }

private:
    Clock::time_point start_ = Clock::now();
};

PropertyReport start_report(std::string name, const ModelParams& params, std::initializer_list<LogComplex> points,
                            double tol)
{
    PropertyReport r;
    r.name = std::move(name);
    r.params_digest = params_digest(params);
    r.n = params.n;
    r.q = params.q();
    r.p = params.p();
    r.central_charge = params.central_charge;
    for (LogComplex x : points) r.sample_points.push_back(x.value());
    r.tolerance = tol;
    return r;
}

PropertyReport finish(PropertyReport r, double residual, const Timer& timer)
{
    r.residual = residual;
    r.passed = residual <= r.tolerance;
    r.runtime_ms = timer.elapsed_ms();
    return r;
}

void require_kind(RKind kind, std::initializer_list<RKind> allowed, const char* check)
{
    if (std::find(allowed.begin(), allowed.end(), kind) == allowed.end()) {
        throw KindError(fmt::format("{} does not apply to kind '{}'", check, to_string(kind)));
    }
}

Matrix r_at(const ModelParams& params, RKind kind, LogComplex z) { return build_r(params, kind, z).matrix(); }

Matrix swap21(const Matrix& m, int n) { return swap_slots(TensorOperator(n, 2, m)).matrix(); }

Matrix pt2(const Matrix& m, int n) { return partial_transpose(TensorOperator(n, 2, m), 2).matrix(); }

Matrix inverse(const Matrix& m, int n) { return TensorOperator(n, 2, m).inverse().matrix(); }

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

Matrix identity(long d) { return Matrix::Identity(d, d); }

// ω-sign convention vs. printed 8-vertex frame: conjugation by D⊗D, D = g^{1/2}.
Matrix frame_change(int n) { return kron(build_g_half(n).matrix(), build_g_half(n).matrix()); }

Matrix commutator_residual_h(const Matrix& r, const Matrix& h)
{
    const Matrix hh = kron(h, h);
    return hh * r - r * hh;
}

}  // namespace

double PropertyReport::detail(const std::string& key) const
{
    for (const auto& [k, v] : details) {
        if (k == key) return v;
    }
    throw ConfigError(fmt::format("report '{}' has no detail '{}'", name, key));
}

std::string params_digest(const ModelParams& params)
{
    const cplx lq = params.log_q.log();
    const cplx lp = params.log_p.log();
    return fmt::format("N={};log_q={:.17g},{:.17g};log_p={:.17g},{:.17g};c={:.17g}", params.n, lq.real(), lq.imag(),
                       lp.real(), lp.imag(), params.central_charge);
}

double relative_residual(const Matrix& lhs, const Matrix& rhs)
{
    const double scale = lhs.norm();
    const double diff = (lhs - rhs).norm();
    return scale > 0.0 ? diff / scale : diff;
}

double identity_residual(const Matrix& lhs, const Matrix& rhs)
{
    return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
}

PropertyReport check_theta(LogComplex a, LogComplex z, int n, double tol, const TruncationPolicy& policy)
{
    Timer t;
    ModelParams carrier;
    carrier.log_p = a;
    carrier.log_q = LogComplex(cplx{-1.0, 0.0});
    carrier.policy = policy;
    auto r = start_report("theta_identities", carrier, {z, a}, tol);
    const double shift = theta_shift_residual(z, a, n, policy);
    const double square = theta_square_base_residual(z, a, policy);
    r.details = {{"shift", shift}, {"square_base", square}, {"n", static_cast<double>(n)}};
    r.note = "sample_points = (z, nome)";
    return finish(std::move(r), std::max(shift, square), t);
}

PropertyReport check_eight_vertex(const ModelParams& params, LogComplex z, double tol)
{
    Timer t;
    if (params.n != 2) throw KindError("check_eight_vertex requires N = 2");
    auto r = start_report("eight_vertex", params, {z}, tol);
    const Matrix generic = r_at(params, RKind::EllipticR, z);
    const Matrix explicit8 = r_at(params, RKind::EightVertex, z);
    const Matrix d = frame_change(2);
    const Matrix explicit_signed = d * explicit8 * d.inverse();
    const double scale = generic.cwiseAbs().maxCoeff();

    // a, b, c sit on the block-diagonal positions; d on (1,4), (4,1).
    double abc = 0.0;
    double d_gauged = 0.0;
    double d_literal = 0.0;
    for (long i = 0; i < 4; ++i) {
        for (long j = 0; j < 4; ++j) {
            const bool is_d = (i == 0 && j == 3) || (i == 3 && j == 0);
            if (is_d) {
                d_gauged = std::max(d_gauged, std::abs(generic(i, j) - explicit_signed(i, j)) / scale);
                d_literal = std::max(d_literal, std::abs(generic(i, j) - explicit8(i, j)) / std::abs(generic(i, j)));
            } else {
                abc = std::max(abc, std::abs(generic(i, j) - explicit8(i, j)) / scale);
            }
        }
    }
    r.details = {{"abc_entries", abc}, {"d_entries_in_sign_frame", d_gauged}, {"d_entries_literal", d_literal}};
    r.note = "d entries compared after conjugation by g^(1/2) (x) g^(1/2)";
    return finish(std::move(r), std::max(abc, d_gauged), t);
}

PropertyReport check_ybe(const ModelParams& params, RKind kind, LogComplex z1, LogComplex z2, LogComplex z3,
                         double tol)
{
    Timer t;
    auto r = start_report(fmt::format("ybe[{}]", to_string(kind)), params, {z1, z2, z3}, tol);
    const TensorOperator r12 = embed(build_r(params, kind, z1 / z2), {1, 2}, 3);
    const TensorOperator r13 = embed(build_r(params, kind, z1 / z3), {1, 3}, 3);
    const TensorOperator r23 = embed(build_r(params, kind, z2 / z3), {2, 3}, 3);
    const Matrix lhs = (r12 * r13 * r23).matrix();
    const Matrix rhs = (r23 * r13 * r12).matrix();
    return finish(std::move(r), relative_residual(lhs, rhs), t);
}

PropertyReport check_unitarity(const ModelParams& params, RKind kind, LogComplex z, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report(fmt::format("unitarity[{}]", to_string(kind)), params, {z}, tol);
    const Matrix lhs = r_at(params, kind, z) * swap21(r_at(params, kind, z.inv()), n);
    cplx scalar{1.0, 0.0};
    switch (kind) {
    case RKind::EllipticR:
    case RKind::EightVertex: break;
    case RKind::EllipticRhat: {
        scalar = unitarity_function(params, z);
        const LogComplex qh = params.log_q.pow(0.5);
        const cplx via_tau = tau(params, qh * z) * tau(params, qh / z);
        r.details.emplace_back("U_vs_tau_product", std::abs(scalar - via_tau) / std::abs(scalar));
        break;
    }
    case RKind::Homogeneous: scalar = rho(params, z) * rho(params, z.inv()); break;
    case RKind::Principal:
    case RKind::NonElliptic: scalar = rho(params, z.pow(2.0)) * rho(params, z.pow(-2.0)); break;
    }
    const double residual = identity_residual(lhs, scalar * identity(n * n));
    const double scalar_residual = r.details.empty() ? 0.0 : r.details.front().second;
    return finish(std::move(r), std::max(residual, scalar_residual), t);
}

PropertyReport check_regularity(const ModelParams& params, RKind kind, double tol)
{
    Timer t;
    require_kind(kind, {RKind::EllipticR, RKind::EightVertex}, "check_regularity");
    const LogComplex one;
    auto r = start_report(fmt::format("regularity[{}]", to_string(kind)), params, {one}, tol);
    const Matrix at_one = build_r_regularized(params, kind, one).matrix();
    r.note = "R(1) evaluated as a 16-point circle average in log z";
    return finish(std::move(r), identity_residual(at_one, swap_op(params.n).matrix()), t);
}

PropertyReport check_crossing(const ModelParams& params, RKind kind, LogComplex z, double tol)
{
    Timer t;
    require_kind(kind, {RKind::EllipticR, RKind::EightVertex}, "check_crossing");
    const int n = params.n;
    auto r = start_report(fmt::format("crossing[{}]", to_string(kind)), params, {z}, tol);
    const LogComplex shifted = z.inv() / params.log_q.pow(n);
    const Matrix lhs = pt2(r_at(params, kind, z), n) * pt2(swap21(r_at(params, kind, shifted), n), n);
    return finish(std::move(r), identity_residual(lhs, identity(n * n)), t);
}

PropertyReport check_antisymmetry(const ModelParams& params, RKind kind, LogComplex z, double tol)
{
    Timer t;
    require_kind(kind, {RKind::EllipticR, RKind::EightVertex}, "check_antisymmetry");
    const int n = params.n;
    auto r = start_report(fmt::format("antisymmetry[{}]", to_string(kind)), params, {z}, tol);
    const Matrix g = kron(build_g(n).matrix(), identity(n));
    const cplx omega = std::exp(cplx{0.0, 2.0 * kPi / n});
    const Matrix lhs = r_at(params, kind, z.negated());
    const Matrix rhs = omega * g.inverse() * r_at(params, kind, z) * g;
    return finish(std::move(r), relative_residual(lhs, rhs), t);
}

PropertyReport check_quasi_periodicity(const ModelParams& params, LogComplex z, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("quasi_periodicity[elliptic-hat]", params, {z}, tol);
    const Matrix lhs = r_at(params, RKind::EllipticRhat, (z * params.log_p.pow(0.5)).negated());
    const Matrix inv21 = inverse(swap21(r_at(params, RKind::EllipticRhat, z.inv()), n), n);
    const Matrix h = build_h(n).matrix();

    double residual = 0.0;
    int branch = 0;
    for (; branch < 2; ++branch) {
        const Matrix gh = build_g_half(n, branch).matrix();
        const Matrix g = kron(gh * h * gh, identity(n));
        residual = relative_residual(lhs, g.inverse() * inv21 * g);
        r.details.emplace_back(fmt::format("branch_{}", branch), residual);
        if (residual <= tol) break;
    }
    branch = std::min(branch, 1);
    r.details.emplace_back("branch_used", static_cast<double>(branch));
    r.note = branch == 0 ? "g^(1/2) = diag(exp(i pi k/N))" : "g^(1/2) = diag((-1)^k exp(i pi k/N))";
    return finish(std::move(r), residual, t);
}

PropertyReport check_h_invariance(const ModelParams& params, RKind kind, LogComplex z, double tol)
{
    Timer t;
    require_kind(kind, {RKind::EllipticR, RKind::EllipticRhat, RKind::EightVertex}, "check_h_invariance");
    const int n = params.n;
    auto r = start_report(fmt::format("h_invariance[{}]", to_string(kind)), params, {z}, tol);
    const Matrix rz = r_at(params, kind, z);
    const double scale = rz.norm();
    const double literal = commutator_residual_h(rz, build_h(n).matrix()).norm() / scale;
    if (kind == RKind::EightVertex) {
        r.details.emplace_back("literal_h", literal);
        return finish(std::move(r), literal, t);
    }
    const double gauged = commutator_residual_h(rz, build_h_gauged(n).matrix()).norm() / scale;
    r.details = {{"gauged_h", gauged}, {"literal_h", literal}};
    r.note = "shift taken in the frame of the omega sign factor: g^(1/2) h g^(-1/2)";
    return finish(std::move(r), gauged, t);
}

PropertyReport check_crossing_unitarity(const ModelParams& params, RKind kind, LogComplex z, double tol)
{
    Timer t;
    require_kind(kind, {RKind::EllipticR, RKind::EllipticRhat, RKind::EightVertex}, "check_crossing_unitarity");
    const int n = params.n;
    auto r = start_report(fmt::format("crossing_unitarity[{}]", to_string(kind)), params, {z}, tol);
    const Matrix lhs = inverse(pt2(r_at(params, kind, z), n), n);
    const Matrix rhs = pt2(inverse(r_at(params, kind, params.log_q.pow(n) * z), n), n);
    return finish(std::move(r), relative_residual(lhs, rhs), t);
}

PropertyReport check_kernel_at_q(const ModelParams& params, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("kernel_at_q", params, {params.log_q}, tol);
    const TensorOperator rq = build_r_regularized(params, RKind::EllipticRhat, params.log_q);
    const TensorOperator a2 = antisymmetrizer(n, 2);
    const double scale = rq.frobenius_norm();

    const double annihilates = (rq * a2).frobenius_norm() / scale;
    const SpectralReport spec = spectral(rq, 1e-8);
    const int expected_rank = n * n - n * (n - 1) / 2;

    double kernel_outside = 0.0;
    for (const auto& v : spec.kernel_basis) kernel_outside = std::max(kernel_outside, (v - a2.matrix() * v).norm());

    const Matrix m = rq.matrix();
    const Matrix flipped = m * swap_op(n).matrix();
    const double column_symmetry = (m - flipped).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();

    r.details = {{"rhat_q_times_A2", annihilates},
                 {"rank", static_cast<double>(spec.rank)},
                 {"expected_rank", static_cast<double>(expected_rank)},
                 {"kernel_outside_im_A2", kernel_outside},
                 {"column_symmetry", column_symmetry}};
    r.note = "R-hat(q) evaluated as a circle average around the removable point z = q";
    double residual = std::max({annihilates, kernel_outside, column_symmetry});
    if (spec.rank != expected_rank) residual = std::max(residual, 1.0);
    return finish(std::move(r), residual, t);
}

PropertyReport check_spectrum_nonelliptic(const ModelParams& params, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("spectrum_nonelliptic", params, {params.log_q}, tol);
    const TensorOperator rq = build_r(params, RKind::NonElliptic, params.log_q);
    std::vector<cplx> computed = spectral(rq).eigenvalues;

    const cplx r2 = rho(params, params.log_q.pow(2.0));
    const cplx q = params.q();
    const cplx big_q = q / (1.0 + q * q);
    std::vector<cplx> expected(n, r2);
    expected.resize(n + n * (n - 1) / 2, cplx{0.0, 0.0});
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double e = static_cast<double>(2 * i - 2 * j + n) / n;
            expected.push_back(r2 * big_q * (params.log_q.pow(e).value() + params.log_q.pow(-e).value()));
        }
    }

    // Greedy nearest matching, largest expected magnitudes first.
    std::stable_sort(expected.begin(), expected.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    double scale = 0.0;
    for (cplx c : computed) scale = std::max(scale, std::abs(c));
    std::vector<bool> used(computed.size(), false);
    double worst = 0.0;
    for (cplx e : expected) {
        std::size_t best = computed.size();
        double best_d = 0.0;
        for (std::size_t k = 0; k < computed.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(computed[k] - e);
            if (best == computed.size() || d < best_d) {
                best = k;
                best_d = d;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    int zeros = 0;
    for (cplx c : computed) zeros += std::abs(c) <= 1e-8 * scale ? 1 : 0;
    r.details = {{"zero_eigenvalues", static_cast<double>(zeros)}};
    return finish(std::move(r), worst / scale, t);
}

PropertyReport check_gauge_relation(const ModelParams& params, LogComplex z, LogComplex w, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("gauge_relation", params, {z, w}, tol);
    const Matrix principal = r_at(params, RKind::Principal, z / w);
    const Matrix v = kron(build_v(n, z).matrix(), build_v(n, w).matrix());
    const Matrix homogeneous = r_at(params, RKind::Homogeneous, z.pow(2.0) / w.pow(2.0));
    return finish(std::move(r), relative_residual(principal, v * homogeneous * v.inverse()), t);
}

PropertyReport check_twist_relation(const ModelParams& params, LogComplex z, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("twist_relation", params, {z}, tol);
    const Matrix f12 = build_f(params).matrix();
    const Matrix f21 = swap21(f12, n);
    const Matrix nonelliptic = r_at(params, RKind::NonElliptic, z);
    const Matrix principal = r_at(params, RKind::Principal, z);
    return finish(std::move(r), relative_residual(nonelliptic, f21 * principal * f12.inverse()), t);
}

PropertyReport check_p_to_zero(const ModelParams& params, LogComplex z, std::span<const double> p_moduli,
                               RKind source, double tol)
{
    Timer t;
    require_kind(source, {RKind::EllipticR, RKind::EllipticRhat}, "check_p_to_zero");
    if (p_moduli.size() < 2) throw ConfigError("check_p_to_zero needs at least two values of |p|");
    for (std::size_t i = 0; i < p_moduli.size(); ++i) {
        if (!(p_moduli[i] > 0.0 && p_moduli[i] < 1.0)) throw ConfigError("check_p_to_zero: |p| values must lie in (0, 1)");
        if (i > 0 && !(p_moduli[i] < p_moduli[i - 1])) throw ConfigError("check_p_to_zero: |p| values must decrease");
    }
    const int n = params.n;
    if (tol <= 0.0) tol = 10.0 * std::pow(p_moduli.back(), 1.0 / n);
    auto r = start_report(fmt::format("p_to_zero[{}]", to_string(source)), params, {z}, tol);

    const Matrix target = r_at(params, RKind::NonElliptic, z);
    const double target_norm2 = target.squaredNorm();
    const double phase = params.log_p.log().imag();
    std::vector<double> residuals;
    cplx s{};
    for (double modulus : p_moduli) {
        const ModelParams pk = params.with_p(LogComplex(cplx{std::log(modulus), phase}));
        const Matrix m = r_at(pk, source, z);
        s = (target.adjoint() * m).trace() / target_norm2;
        residuals.push_back((m - s * target).norm() / std::sqrt(target_norm2));
        r.details.emplace_back(fmt::format("residual_at_{:.0e}", modulus), residuals.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < residuals.size(); ++i) monotone = monotone && residuals[i] < residuals[i - 1];
    r.details.emplace_back("fitted_s_re", s.real());
    r.details.emplace_back("fitted_s_im", s.imag());
    r.details.emplace_back("monotone", monotone ? 1.0 : 0.0);
    r.note = "tolerance 10 |p_last|^(1/N); the leading correction scales as p^(1/N)";
    auto out = finish(std::move(r), residuals.back(), t);
    out.passed = out.passed && monotone;
    return out;
}

PropertyReport check_evaluated_ll(const ModelParams& params, LogComplex z, double tol)
{
    Timer t;
    const int n = params.n;
    auto r = start_report("evaluated_ll", params, {z}, tol);
    const TensorOperator a = build_r(params, RKind::EllipticRhat, z);
    const TensorOperator b = build_r(params, RKind::EllipticRhat, z / params.log_q);
    const double scale = a.frobenius_norm() * b.frobenius_norm();
    std::vector<Matrix> ea(n * n);
    std::vector<Matrix> eb(n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ea[i * n + j] = a.block(i + 1, j + 1).matrix();
            eb[i * n + j] = b.block(i + 1, j + 1).matrix();
        }
    }
    const auto A = [&](int i, int j) -> const Matrix& { return ea[i * n + j]; };
    const auto B = [&](int i, int j) -> const Matrix& { return eb[i * n + j]; };
    double quadratic = 0.0;
    double same_row = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    const Matrix x = A(i, j) * B(k, l) - A(i, l) * B(k, j) - A(k, l) * B(i, j) + A(k, j) * B(i, l);
                    quadratic = std::max(quadratic, x.norm() / scale);
                }
                const Matrix y = A(i, j) * B(i, k) - A(i, k) * B(i, j);
                same_row = std::max(same_row, y.norm() / scale);
            }
        }
    }
    r.details = {{"quadratic", quadratic}, {"same_row", same_row}};
    return finish(std::move(r), std::max(quadratic, same_row), t);
}

PropertyReport check_nsigma(int n_max)
{
    Timer t;
    if (n_max < 2 || n_max > 6) throw SizeError("check_nsigma: N_max must lie in 2..6");
    PropertyReport r;
    r.name = "nsigma";
    r.params_digest = fmt::format("N<={}", n_max);
    r.n = n_max;
    r.tolerance = 0.0;
    long checked = 0;
    Rational worst(0);
    for (int n = 2; n <= n_max; ++n) {
        for (const Permutation& sigma : all_permutations(n)) {
            Rational value(inversions(sigma));
            Rational shift(0);
            for (int i = 1; i <= n; ++i) shift += Rational(i * (sigma[i - 1] - i));
            value += Rational(2, n) * shift;
            for (int i = 1; i <= n; ++i) {
                for (int j = i + 1; j <= n; ++j) value += alpha(n, sigma[i - 1], sigma[j - 1]) - alpha(n, i, j);
            }
            if (abs(value) > abs(worst)) worst = value;
            ++checked;
        }
    }
    r.details = {{"permutations", static_cast<double>(checked)},
                 {"max_numerator", static_cast<double>(abs(worst.numerator()))},
                 {"denominator", static_cast<double>(worst.denominator())}};
    r.note = "exact rational arithmetic";
    return finish(std::move(r), boost::rational_cast<double>(abs(worst)), t);
}

PropertyReport check_transpose_symmetry(const ModelParams& params, LogComplex z, double tol)
{
    Timer t;
    auto r = start_report("transpose_symmetry", params, {z}, tol);
    r.canary = params.n >= 3;
    const Matrix m = r_at(params, RKind::EllipticR, z);
    return finish(std::move(r), relative_residual(m, m.transpose()), t);
}

}  // namespace ellqdet
