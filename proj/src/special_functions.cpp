#include "ellqdet/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace ellqdet {

namespace {

void validate_bases(std::span<const LogComplex> bases)
{
    if (bases.empty() || bases.size() > 3) {
        throw DomainError("pochhammer: between 1 and 3 bases are supported, got " + std::to_string(bases.size()));
    }
    for (const auto& b : bases) {
        if (!(b.log().real() < 0.0)) {
            throw DomainError("pochhammer: every base must satisfy |p| < 1");
        }
    }
}

struct LatticeProduct {
    std::span<const LogComplex> bases;
    const TruncationPolicy& policy;
    std::array<double, 3> tail_scale{};  // 1 / prod_{i >= d} (1 - |p_i|)
    ProductEstimate out;

    void run(std::size_t axis, cplx log_x)
    {
        const cplx step = bases[axis].log();
        const bool leaf = axis + 1 == bases.size();
        for (int n = 0;; ++n) {
            if (n >= policy.max_terms) {
                throw TruncationError("pochhammer: max_terms exceeded before the factors reached abs_floor");
            }
            const cplx lx = log_x + static_cast<double>(n) * step;
            const double mag = std::exp(lx.real());
            if (mag < policy.abs_floor) {
                out.tail_bound += mag * tail_scale[axis];
                return;
            }
            if (leaf) {
                const cplx factor = 1.0 - std::exp(lx);
                out.value *= factor;
                out.min_factor = std::min(out.min_factor, std::abs(factor));
                ++out.factors;
            } else {
                run(axis + 1, lx);
            }
        }
    }
};

}  // namespace

ProductEstimate pochhammer_estimate(LogComplex z, std::span<const LogComplex> bases, const TruncationPolicy& policy)
{
    policy.validate();
    validate_bases(bases);
    LatticeProduct lp{bases, policy, {}, {}};
    double scale = 1.0;
    for (std::size_t i = bases.size(); i-- > 0;) {
        scale /= 1.0 - bases[i].modulus();
        lp.tail_scale[i] = scale;
    }
    lp.run(0, z.log());
    return lp.out;
}

cplx pochhammer_inf(LogComplex z, std::span<const LogComplex> bases, const TruncationPolicy& policy)
{
    return pochhammer_estimate(z, bases, policy).value;
}

cplx pochhammer_inf(LogComplex z, std::initializer_list<LogComplex> bases, const TruncationPolicy& policy)
{
    return pochhammer_estimate(z, std::span<const LogComplex>(bases.begin(), bases.size()), policy).value;
}

cplx pochhammer_inf(ZeroArgument, std::span<const LogComplex> bases, const TruncationPolicy& policy)
{
    policy.validate();
    validate_bases(bases);
    return {1.0, 0.0};
}

ProductEstimate theta_estimate(LogComplex z, LogComplex p, const TruncationPolicy& policy)
{
    const std::array<LogComplex, 1> base{p};
    const auto a = pochhammer_estimate(z, base, policy);
    const auto b = pochhammer_estimate(p / z, base, policy);
    const auto c = pochhammer_estimate(p, base, policy);
    ProductEstimate out;
    out.value = a.value * b.value * c.value;
    out.min_factor = std::min({a.min_factor, b.min_factor, c.min_factor});
    out.tail_bound = a.tail_bound + b.tail_bound + c.tail_bound;
    out.factors = a.factors + b.factors + c.factors;
    return out;
}

cplx theta(LogComplex z, LogComplex p, const TruncationPolicy& policy)
{
    return theta_estimate(z, p, policy).value;
}

double theta_shift_residual(LogComplex z, LogComplex a, int n, const TruncationPolicy& policy)
{
    const cplx lhs1 = theta(a * z, a, policy);
    const cplx rhs1 = theta(z.inv(), a, policy);
    const double r1 = std::abs(lhs1 - rhs1) / std::max(std::abs(rhs1), std::abs(lhs1));

    const double nn = static_cast<double>(n);
    const cplx lhs2 = theta(LogComplex(z.log() + nn * a.log()), a, policy);
    const cplx prefactor = (n % 2 == 0 ? 1.0 : -1.0) * std::exp(-nn * z.log() - 0.5 * nn * (nn - 1.0) * a.log());
    const cplx rhs2 = prefactor * theta(z, a, policy);
    const double r2 = std::abs(lhs2 - rhs2) / std::max(std::abs(rhs2), std::abs(lhs2));
    return std::max(r1, r2);
}

double theta_square_base_residual(LogComplex z, LogComplex a, const TruncationPolicy& policy)
{
    const LogComplex a2 = a.pow(2.0);
    const cplx lhs = theta(a * z, a2, policy);
    const cplx rhs = theta(a / z, a2, policy);
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace ellqdet
