#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellqdet/model_params.hpp"
#include "ellqdet/rmatrix.hpp"

namespace ellqdet {

/// Outcome of one identity check. passed <=> residual <= tolerance.
struct PropertyReport {
    std::string name;
    std::string params_digest;
    int n = 0;
    cplx q{};
    cplx p{};
    double central_charge = 0.0;
    /// Spectral arguments actually used, as Cartesian values.
    std::vector<cplx> sample_points;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// Must-fail check: the identity is expected NOT to hold.
    bool canary = false;
    double runtime_ms = 0.0;
    std::vector<std::pair<std::string, double>> details;
    std::string note;

    double detail(const std::string& key) const;
};

/// Stable text form of (N, log q, log p, c) at full precision.
std::string params_digest(const ModelParams& params);

/// ‖lhs - rhs‖_F / ‖lhs‖_F.
double relative_residual(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs);
/// ‖lhs - rhs‖_F / max(1, ‖rhs‖_F), for identity-valued right-hand sides.
double identity_residual(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs);

/// Theta_a(az) = Theta_a(1/z), the a^n z shift, and Theta_{a^2}(az) = Theta_{a^2}(a/z).
/// The report carries placeholder parameters; sample_points are (z, a).
PropertyReport check_theta(LogComplex a, LogComplex z, int n, double tol = 1e-12,
                           const TruncationPolicy& policy = {});

/// Generic N = 2 builder against the explicit 8-vertex matrix.
PropertyReport check_eight_vertex(const ModelParams& params, LogComplex z, double tol = 1e-12);

PropertyReport check_ybe(const ModelParams& params, RKind kind, LogComplex z1, LogComplex z2, LogComplex z3,
                         double tol = 1e-8);
/// Against I (elliptic R, 8-vertex), U(z) I (R-hat) or rho rho I (trigonometric kinds).
PropertyReport check_unitarity(const ModelParams& params, RKind kind, LogComplex z, double tol = 1e-8);
PropertyReport check_regularity(const ModelParams& params, RKind kind = RKind::EllipticR, double tol = 1e-8);
PropertyReport check_crossing(const ModelParams& params, RKind kind, LogComplex z, double tol = 1e-8);
PropertyReport check_antisymmetry(const ModelParams& params, RKind kind, LogComplex z, double tol = 1e-8);
PropertyReport check_quasi_periodicity(const ModelParams& params, LogComplex z, double tol = 1e-8);
PropertyReport check_h_invariance(const ModelParams& params, RKind kind, LogComplex z, double tol = 1e-8);
PropertyReport check_crossing_unitarity(const ModelParams& params, RKind kind, LogComplex z, double tol = 1e-8);

/// ker R-hat(q) = im A_2: R-hat(q) A_2 = 0, the rank, kernel inside im A_2, and column symmetry.
PropertyReport check_kernel_at_q(const ModelParams& params, double tol = 1e-9);
/// Eigenvalues of R'(q) against the closed-form factorization.
PropertyReport check_spectrum_nonelliptic(const ModelParams& params, double tol = 1e-9);

PropertyReport check_gauge_relation(const ModelParams& params, LogComplex z, LogComplex w, double tol = 1e-10);
PropertyReport check_twist_relation(const ModelParams& params, LogComplex z, double tol = 1e-10);

/// p -> 0 along |p| in p_moduli (phase of params.p kept). tol <= 0 selects 10 |p_last|^{1/N}.
PropertyReport check_p_to_zero(const ModelParams& params, LogComplex z, std::span<const double> p_moduli,
                               RKind source = RKind::EllipticRhat, double tol = 0.0);
inline constexpr double kDefaultPSequence[] = {1e-2, 1e-4, 1e-6, 1e-8};

/// The quadratic relations among blocks of R-hat(z) and R-hat(z/q).
PropertyReport check_evaluated_ll(const ModelParams& params, LogComplex z, double tol = 1e-9);

/// Exact check that n_sigma = 0 for all sigma in S_N, 2 <= N <= n_max.
PropertyReport check_nsigma(int n_max);

/// Canary: ‖R^{t1 t2} - R‖ / ‖R‖; holds at N = 2, fails for N >= 3.
PropertyReport check_transpose_symmetry(const ModelParams& params, LogComplex z, double tol = 1e-8);

}  // namespace ellqdet
