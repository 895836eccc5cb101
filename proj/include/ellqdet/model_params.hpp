#pragma once

#include <string>
#include <vector>

#include "ellqdet/log_complex.hpp"

namespace ellqdet {

/// Parameters of A_{q,p}(gl_N) in the fundamental evaluation representation.
///
/// q and p are carried as logarithms; every fractional power used by the
/// builders derives from these two logarithms.
struct ModelParams {
    int n = 2;
    LogComplex log_q;
    LogComplex log_p;
    double central_charge = 0.0;
    TruncationPolicy policy{};
    double genericity_margin = 1e-4;

    static ModelParams from_values(int n, cplx q, cplx p, double central_charge = 0.0);

    cplx q() const { return log_q.value(); }
    cplx p() const { return log_p.value(); }

    /// p* = p q^{-2c}.
    LogComplex log_p_star() const;

    ModelParams with_p(LogComplex p) const;
    ModelParams with_q(LogComplex q) const;

    /// Throws DomainError on hard violations (N < 2, |p| >= 1, |q^{2N}| >= 1);
    /// returns human-readable genericity warnings otherwise.
    std::vector<std::string> validate() const;
};

}  // namespace ellqdet
