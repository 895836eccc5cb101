#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ellqdet/errors.hpp"

namespace ellqdet {

using cplx = std::complex<double>;

/// Largest dense operator dimension N^k the library will allocate.
inline constexpr long kMaxDenseDim = 4096;

/// Dense operator on (C^N)^{⊗k}.
///
/// Slot 1 is the most significant tensor index: (i_1, ..., i_k) with
/// i_s in 1..N sits at row sum_s (i_s - 1) N^{k-s}. Arity 0 is a 1x1 scalar.
class TensorOperator {
public:
    using Matrix = Eigen::MatrixXcd;

    TensorOperator(int local_dim, int arity, Matrix entries);

    static TensorOperator identity(int local_dim, int arity);
    static TensorOperator zero(int local_dim, int arity);

    int local_dim() const { return local_dim_; }
    int arity() const { return arity_; }
    long dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    cplx operator()(long row, long col) const { return entries_(row, col); }

    double frobenius_norm() const { return entries_.norm(); }
    cplx trace() const { return entries_.trace(); }

    /// Inverse; throws SingularError if the 2-norm condition number exceeds max_condition.
    TensorOperator inverse(double max_condition = 1e12) const;

    /// The (i, j) block with respect to slot 1 (i, j in 1..N): an operator on slots 2..k.
    TensorOperator block(int i, int j) const;

    friend TensorOperator operator*(const TensorOperator& a, const TensorOperator& b);
    friend TensorOperator operator+(const TensorOperator& a, const TensorOperator& b);
    friend TensorOperator operator-(const TensorOperator& a, const TensorOperator& b);
    friend TensorOperator operator*(cplx s, const TensorOperator& a);

private:
    int local_dim_;
    int arity_;
    Matrix entries_;
};

/// op (arity j) acting on `slots` of a k-fold space; slot order follows op's own slots.
TensorOperator embed(const TensorOperator& op, std::span<const int> slots, int arity);
TensorOperator embed(const TensorOperator& op, std::initializer_list<int> slots, int arity);

/// P_sigma moves the factor in slot t to slot sigma(t); P_{sigma o tau} = P_sigma P_tau.
TensorOperator permutation_op(std::span<const int> sigma, int local_dim);

/// Flip operator P_12 on C^N ⊗ C^N.
TensorOperator swap_op(int local_dim);

/// R_21 = P R_12 P.
TensorOperator swap_slots(const TensorOperator& op);

/// (1/k!) sum_sigma sgn(sigma) P_sigma, a projector of rank binomial(N, k).
TensorOperator antisymmetrizer(int local_dim, int k);

/// w = sum_sigma sgn(sigma) e_{sigma(1)} ⊗ ... ⊗ e_{sigma(N)}, with <w, w> = N!.
Eigen::VectorXcd antisymmetric_vector(int local_dim);

TensorOperator partial_transpose(const TensorOperator& op, int slot);
TensorOperator partial_trace(const TensorOperator& op, std::span<const int> slots);
TensorOperator partial_trace(const TensorOperator& op, std::initializer_list<int> slots);

/// Kronecker product, a on the leading slots.
TensorOperator tensor(const TensorOperator& a, const TensorOperator& b);

struct SpectralReport {
    std::vector<cplx> eigenvalues;
    std::vector<double> singular_values;  // descending
    int rank = 0;
    std::vector<Eigen::VectorXcd> kernel_basis;  // orthonormal
    double sv_threshold = 1e-8;
};

/// Rank counts singular values above sv_threshold * sigma_max.
SpectralReport spectral(const TensorOperator& op, double sv_threshold = 1e-8);

}  // namespace ellqdet
