#pragma once

#include <complex>

#include "ellqdet/errors.hpp"

namespace ellqdet {

using cplx = std::complex<double>;

/// A nonzero complex number x stored as a chosen logarithm u with x = e^u.
///
/// Products and quotients add and subtract logarithms; fractional powers
/// x^a are e^{a u}. The branch of every power is therefore fixed by the
/// logarithm the caller chose, never by a principal-branch root of x.
class LogComplex {
public:
    constexpr LogComplex() = default;
    constexpr explicit LogComplex(cplx log_value) : value_(log_value) {}

    /// Principal logarithm of a Cartesian value.
    static LogComplex from_value(cplx x)
    {
        if (x == cplx{0.0, 0.0}) {
            throw DomainError("LogComplex: cannot represent 0");
        }
        return LogComplex(std::log(x));
    }

    constexpr cplx log() const { return value_; }
    cplx value() const { return std::exp(value_); }
    double modulus() const { return std::exp(value_.real()); }

    /// x^a for real or complex exponent a.
    constexpr LogComplex pow(double a) const { return LogComplex(a * value_); }
    constexpr LogComplex inv() const { return LogComplex(-value_); }

    friend constexpr LogComplex operator*(LogComplex a, LogComplex b) { return LogComplex(a.value_ + b.value_); }
    friend constexpr LogComplex operator/(LogComplex a, LogComplex b) { return LogComplex(a.value_ - b.value_); }

    /// -x, realized as log x + i*pi.
    LogComplex negated() const { return LogComplex(value_ + cplx{0.0, kPi}); }

    static constexpr double kPi = 3.141592653589793238462643383279502884;

private:
    cplx value_{0.0, 0.0};
};

/// Cut-offs for the formally infinite products.
struct TruncationPolicy {
    /// Factors (1 - x) with |x| below this are treated as 1.
    double abs_floor = 1e-17;
    /// Maximum number of factors along any one base direction.
    int max_terms = 4096;

    void validate() const
    {
        if (!(abs_floor > 0.0 && abs_floor < 1.0)) {
            throw DomainError("TruncationPolicy: abs_floor must lie in (0, 1)");
        }
        if (max_terms < 1) {
            throw DomainError("TruncationPolicy: max_terms must be >= 1");
        }
    }
};

}  // namespace ellqdet
