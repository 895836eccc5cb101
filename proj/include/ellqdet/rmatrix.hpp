#pragma once

#include <span>
#include <string_view>

#include <boost/rational.hpp>

#include "ellqdet/model_params.hpp"
#include "ellqdet/tensor_operator.hpp"

namespace ellqdet {

/// R-matrix families. EightVertex requires N = 2.
enum class RKind { EllipticR, EllipticRhat, EightVertex, Homogeneous, Principal, NonElliptic };

std::string_view to_string(RKind kind);
/// Accepts the CLI tags "elliptic", "elliptic-hat", "eightvertex", "homogeneous", "principal", "nonelliptic".
RKind parse_kind(std::string_view tag);
std::span<const RKind> all_kinds();
bool is_elliptic(RKind kind);

/// Denominator factors with |1 - x| below this raise PoleError.
inline constexpr double kPoleThreshold = 1e-12;

// Scalar ingredients. All spectral arguments are logarithms; -z is log z + i*pi.

/// S_{a,c}^b(z) with exponents taken from the raw integers; c may be any integer.
cplx s_coeff(const ModelParams& params, int a, int b, int c, LogComplex z);

/// The theta ratio of S without its monomial prefactor, defined for any integers a, b, c.
cplx s_hat(const ModelParams& params, int a, int b, int c, LogComplex z);

/// omega^{(a+c-b-d)/2} on an entry obeying the selection rule: (-1)^{(a+c-b-d)/N}.
int omega_sign(int n, int a, int b, int c, int d);

/// 1 / kappa_N(z^2), a ratio of eight double-base Pochhammer symbols in bases (p, q^{2N}).
cplx kappa_inv(const ModelParams& params, LogComplex z2);
cplx eta(const ModelParams& params, LogComplex z);
/// tau_N(z) = z^{2/N - 2} Theta_{q^{2N}}(q z^2) / Theta_{q^{2N}}(q z^{-2}).
cplx tau(const ModelParams& params, LogComplex z);
/// U(z), the scalar that R-hat_12(z) R-hat_21(1/z) equals.
cplx unitarity_function(const ModelParams& params, LogComplex z);
/// rho_N(z), normalization of the trigonometric R-matrices.
cplx rho(const ModelParams& params, LogComplex z);

/// Dense N^2 x N^2 R-matrix of the given family at spectral argument z.
TensorOperator build_r(const ModelParams& params, RKind kind, LogComplex z);

/// Value at a removable singularity (e.g. R(1), R-hat(q)): mean of build_r over
/// `points` equally spaced samples on the circle |log w - log z| = radius.
/// radius <= 0 selects min(1e-2, |log q| / 8, |log p| / 8), keeping the nearest
/// genuine pole (at distance >= |log q| / 2) well outside the circle.
TensorOperator build_r_regularized(const ModelParams& params, RKind kind, LogComplex z, double radius = 0.0,
                                   int points = 16);

/// Gauge matrix V(z) = sum_i z^{(N+1-2i)/N} e_ii.
TensorOperator build_v(int n, LogComplex z);

using Rational = boost::rational<long long>;

/// alpha_ij = 1/2 + (i-j)/N for i < j, alpha_ji = -alpha_ij, alpha_ii = 0.
Rational alpha(int n, int i, int j);

/// Diagonal twist F_12 = sum_{i,j} q^{alpha_ij} e_ii ⊗ e_jj.
TensorOperator build_f(const ModelParams& params);

/// g = diag(omega^i), omega = e^{2 pi i/N}.
TensorOperator build_g(int n);
/// Cyclic shift h = sum_i e_{i,i+1} (indices mod N).
TensorOperator build_h(int n);
/// g^{1/2} = diag(e^{i pi i/N}); branch 1 selects diag((-1)^i e^{i pi i/N}).
TensorOperator build_g_half(int n, int branch = 0);
/// g^{1/2} h g^{-1/2}: the shift in the frame where the omega sign factor is applied.
TensorOperator build_h_gauged(int n);

}  // namespace ellqdet
