#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ellqdet/properties.hpp"

namespace ellqdet {

/// M(z) defined by R-hat_{10}(z) ... R-hat_{N0}(z q^{1-N}) A_{1..N} = A_{1..N} M_0(z).
struct ProductResult {
    TensorOperator m;
    /// ‖X - A ⊗ M‖ / ‖X‖ with X the product applied to A.
    double consistency = 0.0;
};

/// Vector route: applies the N factors to w ⊗ e_k without forming N^{N+1} matrices. N <= 5.
ProductResult qdet_product(const ModelParams& params, LogComplex z);

/// Dense route: embeds every factor, multiplies, and takes the partial trace over slots 1..N. N <= 4.
ProductResult qdet_product_dense(const ModelParams& params, LogComplex z);

/// (m_1(z), ..., m_N(z)) from the closed-form permutation sum of theta ratios. N <= 6.
std::vector<cplx> qdet_closed_form(const ModelParams& params, LogComplex z);

/// sum_sigma sgn(sigma) E_{1,sigma(1)}(z) E_{2,sigma(2)}(z/q) ... E_{N,sigma(N)}(z q^{1-N}),
/// E_ij(w) the (i, j) block of the kind's R-matrix. kind: EllipticRhat or NonElliptic.
TensorOperator qdet_sum_formula(const ModelParams& params, RKind kind, LogComplex z);

/// ‖R-hat_{N0}^{-1} ... R-hat_{10}^{-1} (A ⊗ I) - A ⊗ I‖ / ‖A ⊗ I‖, on the image of A.
double inverse_product_residual(const ModelParams& params, LogComplex z);

struct QdetResult {
    TensorOperator m_matrix;
    std::vector<cplx> m_k_values;
    TensorOperator sum_formula_matrix;
    /// Distances from the identity and pairwise between the three routes.
    std::vector<std::pair<std::string, double>> deviations;
    LogComplex z_point;
    double product_consistency = 0.0;

    double deviation(const std::string& key) const;
    /// Largest entry of `deviations`.
    double max_deviation() const;
};

QdetResult evaluate_qdet(const ModelParams& params, LogComplex z);

/// evaluate_qdet folded into a report; residual = max_deviation().
PropertyReport check_qdet(const ModelParams& params, LogComplex z, double tol = 1e-8);

/// Non-elliptic permutation sum against the identity.
PropertyReport check_qdet_nonelliptic(const ModelParams& params, LogComplex z, double tol = 1e-9);

/// Inverse product applied to the image of A returns it unchanged.
PropertyReport check_inverse_product(const ModelParams& params, LogComplex z, double tol = 1e-8);

/// max_ij ‖[M(z), E_ij(w)]‖ / (‖M‖ ‖E_ij‖) over the blocks of R-hat(w).
PropertyReport centrality_witness(const ModelParams& params, LogComplex z, LogComplex w, double tol = 1e-8);

}  // namespace ellqdet
