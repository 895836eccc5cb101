#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

// Index kernels on (C^N)^{⊗k}. Composite index of (i_1, ..., i_k), digits
// 0-based, is sum_s i_s N^{k-s}: slot 1 is the most significant digit.
// Slots are 1-based. Callers validate slot lists; kernels assume them valid.
//
// Every kernel has an OpenMP implementation and a straightforward serial
// reference in kernels::serial, which the tests use as the oracle.

namespace ellqdet::kernels {

using Matrix = Eigen::MatrixXcd;

/// Operator acting as `op` on `slots` (in op's slot order) and as identity elsewhere.
Matrix embed(const Matrix& op, int local_dim, std::span<const int> slots, int arity);

/// states <- embed(op, slots) * states, column by column, without forming the embedding.
void apply_on_slots(const Matrix& op, int local_dim, std::span<const int> slots, int arity, Matrix& states);

/// Contract the given slots; remaining slots keep their relative order.
Matrix partial_trace(const Matrix& m, int local_dim, int arity, std::span<const int> traced);

/// Sum of equally sized matrices, entrywise Neumaier-compensated, in index order.
Matrix compensated_sum(std::span<const Matrix> terms);

namespace serial {

Matrix embed(const Matrix& op, int local_dim, std::span<const int> slots, int arity);
void apply_on_slots(const Matrix& op, int local_dim, std::span<const int> slots, int arity, Matrix& states);
Matrix partial_trace(const Matrix& m, int local_dim, int arity, std::span<const int> traced);
Matrix compensated_sum(std::span<const Matrix> terms);

}  // namespace serial

/// Integer power for dimensions.
constexpr long ipow(long base, int exp)
{
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// 0-based digits of a composite index, most significant first.
std::vector<int> digits(long index, int local_dim, int arity);
long compose(std::span<const int> digits, int local_dim);

}  // namespace ellqdet::kernels
