#pragma once

#include <initializer_list>
#include <span>

#include "ellqdet/log_complex.hpp"

namespace ellqdet {

/// Tag selecting the first Pochhammer argument z = 0.
struct ZeroArgument {};
inline constexpr ZeroArgument zero_argument{};

/// Value of a truncated product together with its diagnostics.
struct ProductEstimate {
    cplx value{1.0, 0.0};
    /// Smallest |1 - x| over the retained factors; a zero of the product
    /// shows up as min_factor -> 0.
    double min_factor = 1.0;
    /// Bound on |log(tail)| from the geometric series of omitted factors.
    double tail_bound = 0.0;
    long factors = 0;
};

/// (z; p_1, ..., p_m)_inf = prod_{n_i >= 0} (1 - z p_1^{n_1} ... p_m^{n_m}), m in {1, 2, 3}.
ProductEstimate pochhammer_estimate(LogComplex z, std::span<const LogComplex> bases,
                                    const TruncationPolicy& policy = {});

cplx pochhammer_inf(LogComplex z, std::span<const LogComplex> bases, const TruncationPolicy& policy = {});
cplx pochhammer_inf(LogComplex z, std::initializer_list<LogComplex> bases, const TruncationPolicy& policy = {});
cplx pochhammer_inf(ZeroArgument, std::span<const LogComplex> bases, const TruncationPolicy& policy = {});

/// Theta_p(z) = (z;p)(p/z;p)(p;p), with min_factor measuring the distance to the zeros p^Z.
ProductEstimate theta_estimate(LogComplex z, LogComplex p, const TruncationPolicy& policy = {});
cplx theta(LogComplex z, LogComplex p, const TruncationPolicy& policy = {});

/// Relative residual of Theta_a(a z) = Theta_a(1/z) and
/// Theta_a(a^n z) = (-1)^n z^{-n} a^{-n(n-1)/2} Theta_a(z).
double theta_shift_residual(LogComplex z, LogComplex a, int n, const TruncationPolicy& policy = {});

/// Relative residual of Theta_{a^2}(a z) = Theta_{a^2}(a / z).
double theta_square_base_residual(LogComplex z, LogComplex a, const TruncationPolicy& policy = {});

}  // namespace ellqdet
