#include "ellqdet/model_params.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ellqdet {

ModelParams ModelParams::from_values(int n, cplx q, cplx p, double central_charge)
{
    ModelParams mp;
    mp.n = n;
    mp.log_q = LogComplex::from_value(q);
    mp.log_p = LogComplex::from_value(p);
    mp.central_charge = central_charge;
    return mp;
}

LogComplex ModelParams::log_p_star() const
{
    return LogComplex(log_p.log() - 2.0 * central_charge * log_q.log());
}

ModelParams ModelParams::with_p(LogComplex p) const
{
    ModelParams out = *this;
    out.log_p = p;
    return out;
}

ModelParams ModelParams::with_q(LogComplex q) const
{
    ModelParams out = *this;
    out.log_q = q;
    return out;
}

std::vector<std::string> ModelParams::validate() const
{
    if (n < 2) throw DomainError(fmt::format("ModelParams: N must be >= 2, got {}", n));
    policy.validate();
    if (!(log_p.log().real() < 0.0)) {
        throw DomainError(fmt::format("ModelParams: |p| = {:.6g} must be < 1", log_p.modulus()));
    }
    if (!(2.0 * n * log_q.log().real() < 0.0)) {
        throw DomainError(fmt::format("ModelParams: |q^(2N)| = {:.6g} must be < 1", std::exp(2.0 * n * log_q.log().real())));
    }

    std::vector<std::string> warnings;
    for (int k = 1; k <= 2 * n; ++k) {
        const double d = std::abs(std::exp(2.0 * k * log_q.log()) - 1.0);
        if (d <= genericity_margin) {
            warnings.push_back(fmt::format("q^{} is within {:.3g} of 1 (q near a root of unity)", 2 * k, d));
        }
    }
    for (int a = 1; a <= 2 * n; ++a) {
        for (int b = -2 * n; b <= 2 * n; ++b) {
            const double d = std::abs(std::exp(static_cast<double>(a) * log_p.log() + static_cast<double>(b) * log_q.log()) - 1.0);
            if (d <= genericity_margin) {
                warnings.push_back(fmt::format("p^{} q^{} is within {:.3g} of 1", a, b, d));
            }
        }
    }
    const double q2n = std::exp(2.0 * n * log_q.log().real());
    if (q2n > 0.9) {
        warnings.push_back(fmt::format("|q^(2N)| = {:.4f} is close to 1: Theta_(q^2N) and kappa products converge slowly", q2n));
    }
    return warnings;
}

}  // namespace ellqdet
