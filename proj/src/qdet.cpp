#include "ellqdet/qdet.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>

#include <fmt/format.h>

#include "ellqdet/kernels.hpp"
#include "ellqdet/permutations.hpp"
#include "ellqdet/special_functions.hpp"

namespace ellqdet {

namespace {

using Matrix = Eigen::MatrixXcd;

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Factors R-hat(z q^{1-j}), j = 1..N, all built before any is used so a pole moves z as a whole.
std::vector<Matrix> shifted_factors(const ModelParams& params, RKind kind, LogComplex z)
{
    std::vector<Matrix> out;
    for (int j = 0; j < params.n; ++j) out.push_back(build_r(params, kind, z / params.log_q.pow(j)).matrix());
    return out;
}

// Columns w ⊗ e_k, k = 1..N, in (C^N)^{⊗(N+1)}.
Matrix antisymmetric_states(int n)
{
    const Eigen::VectorXcd w = antisymmetric_vector(n);
    Matrix states = Matrix::Zero(w.size() * n, n);
    for (long a = 0; a < w.size(); ++a) {
        for (int k = 0; k < n; ++k) states(a * n + k, k) = w(a);
    }
    return states;
}

cplx neumaier(const std::vector<cplx>& terms)
{
    std::vector<Matrix> boxed;
    boxed.reserve(terms.size());
    for (cplx t : terms) boxed.push_back(Matrix::Constant(1, 1, t));
    return kernels::compensated_sum(boxed)(0, 0);
}

double distance_to_identity(const Matrix& m) { return identity_residual(m, Matrix::Identity(m.rows(), m.cols())); }

PropertyReport make_report(std::string name, const ModelParams& params, std::vector<cplx> points, double residual,
                           double tol, std::chrono::steady_clock::time_point t0)
{
    PropertyReport r;
    r.name = std::move(name);
    r.params_digest = params_digest(params);
    r.n = params.n;
    r.q = params.q();
    r.p = params.p();
    r.central_charge = params.central_charge;
    r.sample_points = std::move(points);
    r.tolerance = tol;
    r.residual = residual;
    r.passed = residual <= tol;
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

ProductResult qdet_product(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    if (n > 5) throw SizeError(fmt::format("qdet_product supports N <= 5, got {}", n));
    const auto factors = shifted_factors(params, RKind::EllipticRhat, z);
    Matrix states = antisymmetric_states(n);
    for (int j = n; j >= 1; --j) {
        const std::array<int, 2> slots{j, n + 1};
        kernels::apply_on_slots(factors[j - 1], n, slots, n + 1, states);
    }
    const Eigen::VectorXcd w = antisymmetric_vector(n);
    Matrix m = Matrix::Zero(n, n);
    for (long a = 0; a < w.size(); ++a) m += std::conj(w(a)) * states.middleRows(a * n, n);
    m /= factorial(n);

    Matrix expected(states.rows(), n);
    for (long a = 0; a < w.size(); ++a) expected.middleRows(a * n, n) = w(a) * m;
    return {TensorOperator(n, 1, m), relative_residual(states, expected)};
}

ProductResult qdet_product_dense(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    if (n > 4) throw SizeError(fmt::format("qdet_product_dense supports N <= 4, got {}", n));
    const auto factors = shifted_factors(params, RKind::EllipticRhat, z);
    std::vector<int> aux(n);
    std::iota(aux.begin(), aux.end(), 1);
    const TensorOperator a = embed(antisymmetrizer(n, n), aux, n + 1);
    TensorOperator x = TensorOperator::identity(n, n + 1);
    for (int j = 1; j <= n; ++j) x = x * embed(TensorOperator(n, 2, factors[j - 1]), {j, n + 1}, n + 1);
    x = x * a;
    const TensorOperator m = partial_trace(x, aux);
    const TensorOperator expected = a * embed(m, {n + 1}, n + 1);
    return {m, relative_residual(x.matrix(), expected.matrix())};
}

std::vector<cplx> qdet_closed_form(const ModelParams& params, LogComplex z)
{
    params.validate();
    const int n = params.n;
    if (n > 6) throw SizeError(fmt::format("qdet_closed_form supports N <= 6, got {}", n));
    const LogComplex p = params.log_p;
    const LogComplex q = params.log_q;
    const auto& pol = params.policy;
    const std::array<LogComplex, 1> pb{p};
    const std::array<LogComplex, 1> pnb{p.pow(n)};

    const cplx ratio = -pochhammer_inf(p.pow(n), pnb, pol) / pochhammer_inf(p, pb, pol);
    const cplx theta_q2 = theta(q.pow(2.0), p, pol);
    cplx prefactor = std::pow(ratio, 3 * n) * std::pow(theta_q2, n) * theta(z.pow(2.0), p, pol);
    const auto den = theta_estimate(q.pow(2.0) * z.pow(2.0), p, pol);
    if (den.min_factor < kPoleThreshold) throw PoleError("qdet_closed_form: Theta_p(q^2 z^2) vanishes");
    prefactor /= den.value;

    const auto perms = all_permutations(n);
    std::vector<cplx> out;
    for (int k = 1; k <= n; ++k) {
        std::vector<cplx> terms;
        terms.reserve(perms.size());
        for (const Permutation& sigma : perms) {
            cplx term = static_cast<double>(sign(sigma));
            int c = k;
            for (int l = 1; l <= n; ++l) {
                term *= s_hat(params, l, sigma[l - 1], c, z / q.pow(l - 1));
                c += l - sigma[l - 1];
            }
            terms.push_back(term);
        }
        out.push_back(prefactor * q.pow(2.0 * k - 2.0 * n).value() * neumaier(terms));
    }
    return out;
}

TensorOperator qdet_sum_formula(const ModelParams& params, RKind kind, LogComplex z)
{
    if (kind != RKind::EllipticRhat && kind != RKind::NonElliptic) {
        throw KindError(fmt::format("qdet_sum_formula: kind '{}' not supported", to_string(kind)));
    }
    const int n = params.n;
    if (n > 6) throw SizeError(fmt::format("qdet_sum_formula supports N <= 6, got {}", n));
    std::vector<TensorOperator> factors;
    for (const Matrix& m : shifted_factors(params, kind, z)) factors.emplace_back(n, 2, m);

    const auto perms = all_permutations(n);
    std::vector<Matrix> terms(perms.size());
#pragma omp parallel for schedule(static)
    for (std::size_t s = 0; s < perms.size(); ++s) {
        Matrix x = static_cast<double>(sign(perms[s])) * Matrix::Identity(n, n);
        for (int l = 0; l < n; ++l) x = x * factors[l].block(l + 1, perms[s][l]).matrix();
        terms[s] = std::move(x);
    }
    return {n, 1, kernels::compensated_sum(terms)};
}

double inverse_product_residual(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    if (n > 5) throw SizeError(fmt::format("inverse_product_residual supports N <= 5, got {}", n));
    const auto factors = shifted_factors(params, RKind::EllipticRhat, z);
    const Matrix start = antisymmetric_states(n);
    Matrix states = start;
    for (int j = 1; j <= n; ++j) {
        const std::array<int, 2> slots{j, n + 1};
        kernels::apply_on_slots(TensorOperator(n, 2, factors[j - 1]).inverse().matrix(), n, slots, n + 1, states);
    }
    return relative_residual(start, states);
}

double QdetResult::deviation(const std::string& key) const
{
    for (const auto& [k, v] : deviations) {
        if (k == key) return v;
    }
    throw ConfigError(fmt::format("qdet result has no deviation '{}'", key));
}

double QdetResult::max_deviation() const
{
    double worst = 0.0;
    for (const auto& [k, v] : deviations) worst = std::max(worst, v);
    return worst;
}

QdetResult evaluate_qdet(const ModelParams& params, LogComplex z)
{
    const int n = params.n;
    const ProductResult product = qdet_product(params, z);
    const std::vector<cplx> mk = qdet_closed_form(params, z);
    const TensorOperator sum = qdet_sum_formula(params, RKind::EllipticRhat, z);

    Matrix closed = Matrix::Zero(n, n);
    double mk_to_one = 0.0;
    double mk_spread = 0.0;
    for (int k = 0; k < n; ++k) {
        closed(k, k) = mk[k];
        mk_to_one = std::max(mk_to_one, std::abs(mk[k] - 1.0));
        mk_spread = std::max(mk_spread, std::abs(mk[k] - mk[0]) / std::abs(mk[0]));
    }
    const Matrix& m = product.m.matrix();
    QdetResult out{product.m, mk, sum, {}, z, product.consistency};
    out.deviations = {{"product_vs_identity", distance_to_identity(m)},
                      {"closed_form_vs_one", mk_to_one},
                      {"closed_form_k_spread", mk_spread},
                      {"sum_vs_identity", distance_to_identity(sum.matrix())},
                      {"product_vs_closed_form", relative_residual(m, closed)},
                      {"product_vs_sum", relative_residual(m, sum.matrix())},
                      {"closed_form_vs_sum", relative_residual(closed, sum.matrix())},
                      {"product_consistency", product.consistency}};
    return out;
}

PropertyReport check_qdet(const ModelParams& params, LogComplex z, double tol)
{
    const auto t0 = std::chrono::steady_clock::now();
    const QdetResult result = evaluate_qdet(params, z);
    auto r = make_report("qdet", params, {z.value()}, result.max_deviation(), tol, t0);
    r.details = result.deviations;
    for (std::size_t k = 0; k < result.m_k_values.size(); ++k) {
        r.details.emplace_back(fmt::format("m_{}_re", k + 1), result.m_k_values[k].real());
        r.details.emplace_back(fmt::format("m_{}_im", k + 1), result.m_k_values[k].imag());
    }
    return r;
}

PropertyReport check_qdet_nonelliptic(const ModelParams& params, LogComplex z, double tol)
{
    const auto t0 = std::chrono::steady_clock::now();
    const TensorOperator sum = qdet_sum_formula(params, RKind::NonElliptic, z);
    return make_report("qdet_nonelliptic", params, {z.value()}, distance_to_identity(sum.matrix()), tol, t0);
}

PropertyReport check_inverse_product(const ModelParams& params, LogComplex z, double tol)
{
    const auto t0 = std::chrono::steady_clock::now();
    return make_report("inverse_product", params, {z.value()}, inverse_product_residual(params, z), tol, t0);
}

PropertyReport centrality_witness(const ModelParams& params, LogComplex z, LogComplex w, double tol)
{
    const auto t0 = std::chrono::steady_clock::now();
    const int n = params.n;
    const Matrix m = qdet_product(params, z).m.matrix();
    const TensorOperator witness = build_r(params, RKind::EllipticRhat, w);
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const Matrix e = witness.block(i, j).matrix();
            const double scale = m.norm() * e.norm();
            if (scale == 0.0) continue;
            worst = std::max(worst, (m * e - e * m).norm() / scale);
        }
    }
    auto r = make_report("centrality_witness", params, {z.value(), w.value()}, worst, tol, t0);
    r.note = "evaluation-representation shadow: [M(z), E_ij(w)] over the blocks of R-hat(w)";
    return r;
}

}  // namespace ellqdet
