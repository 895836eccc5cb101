#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "ellqdet/kernels.hpp"
#include "ellqdet/permutations.hpp"
#include "ellqdet/rmatrix.hpp"
#include "ellqdet/sampling.hpp"
#include "ellqdet/tensor_operator.hpp"
#include "oracles.hpp"

using namespace ellqdet;
using Matrix = Eigen::MatrixXcd;

namespace {

TensorOperator random_op(int n, int k, unsigned seed)
{
    const long d = kernels::ipow(n, k);
    return {n, k, oracle::random_matrix(d, d, seed)};
}

Eigen::VectorXcd basis(int n, std::initializer_list<int> idx)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(kernels::ipow(n, static_cast<int>(idx.size())));
    long pos = 0;
    for (int i : idx) pos = pos * n + (i - 1);
    v(pos) = 1.0;
    return v;
}

double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("kernels: OpenMP and serial implementations agree")
{
    for (int n : {2, 3}) {
        for (int k : {2, 3, 4}) {
            if (kernels::ipow(n, k) > 81) continue;
            const long d = kernels::ipow(n, k);
            const Matrix op2 = oracle::random_matrix(n * n, n * n, 11 + n + k);
            const std::array<int, 2> slots{k, 1};
            CHECK(dist(kernels::embed(op2, n, slots, k), kernels::serial::embed(op2, n, slots, k)) == 0.0);

            Matrix a = oracle::random_matrix(d, 3, 7);
            Matrix b = a;
            kernels::apply_on_slots(op2, n, slots, k, a);
            kernels::serial::apply_on_slots(op2, n, slots, k, b);
            CHECK(dist(a, b) < 1e-13);

            const Matrix m = oracle::random_matrix(d, d, 5);
            const std::array<int, 2> traced{1, k};
            CHECK(dist(kernels::partial_trace(m, n, k, traced), kernels::serial::partial_trace(m, n, k, traced)) < 1e-13);
        }
    }
    std::vector<Matrix> terms;
    for (unsigned s = 0; s < 20; ++s) terms.push_back(oracle::random_matrix(3, 3, s));
    CHECK(dist(kernels::compensated_sum(terms), kernels::serial::compensated_sum(terms)) == 0.0);
}

TEST_CASE("compensated summation recovers cancelled terms")
{
    std::vector<Matrix> terms{Matrix::Constant(1, 1, 1e16), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -1e16)};
    CHECK(kernels::compensated_sum(terms)(0, 0) == cplx{1.0, 0.0});
}

TEST_CASE("digits and compose are inverse")
{
    for (long idx = 0; idx < 27; ++idx) CHECK(kernels::compose(kernels::digits(idx, 3, 3), 3) == idx);
    CHECK(kernels::digits(5, 2, 3) == std::vector<int>{1, 0, 1});
}

TEST_CASE("embed examples")
{
    const TensorOperator x = random_op(3, 2, 1);
    CHECK(dist(embed(x, {1, 2}, 2).matrix(), x.matrix()) == 0.0);

    const TensorOperator p = swap_op(2);
    const TensorOperator p13 = embed(p, {1, 3}, 3);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c) CHECK(dist(p13.matrix() * basis(2, {a, b, c}), basis(2, {c, b, a})) == 0.0);

    Sampler s(2);
    const ModelParams params = s.params(3);
    const TensorOperator rhat = build_r(params, RKind::EllipticRhat, s.spectral());
    const Matrix flipped = oracle::flip(3) * rhat.matrix() * oracle::flip(3);
    CHECK(dist(embed(rhat, {2, 1}, 2).matrix(), flipped) == 0.0);
    CHECK(dist(swap_slots(rhat).matrix(), flipped) == 0.0);
}

TEST_CASE("embed agrees with Kronecker products on contiguous slots")
{
    const TensorOperator x = random_op(2, 2, 4);
    const Matrix id2 = Matrix::Identity(2, 2);
    CHECK(dist(embed(x, {1, 2}, 3).matrix(), oracle::kron(x.matrix(), id2)) < 1e-15);
    CHECK(dist(embed(x, {2, 3}, 3).matrix(), oracle::kron(id2, x.matrix())) < 1e-15);
    CHECK(dist(tensor(x, TensorOperator(2, 1, id2)).matrix(), oracle::kron(x.matrix(), id2)) < 1e-15);
}

TEST_CASE("embed respects composition on disjoint slots")
{
    const TensorOperator x = random_op(2, 2, 8);
    const TensorOperator y = random_op(2, 1, 9);
    const TensorOperator a = embed(x, {1, 3}, 4);
    const TensorOperator b = embed(y, {2}, 4);
    CHECK(dist((a * b).matrix(), (b * a).matrix()) < 1e-13);
    const TensorOperator xy = tensor(x, y);  // slots (1, 3) then 2
    CHECK(dist(embed(xy, {1, 3, 2}, 4).matrix(), (a * b).matrix()) < 1e-13);
}

TEST_CASE("embed errors")
{
    const TensorOperator x = random_op(2, 2, 1);
    CHECK_THROWS_AS(embed(x, {1, 1}, 3), DimensionError);
    CHECK_THROWS_AS(embed(x, {1, 4}, 3), DimensionError);
    CHECK_THROWS_AS(embed(x, {1}, 3), DimensionError);
    CHECK_THROWS_AS(TensorOperator(2, 2, Matrix::Zero(3, 3)), DimensionError);
}

TEST_CASE("permutation_op examples")
{
    const std::vector<int> id{1, 2, 3};
    CHECK(dist(permutation_op(id, 3).matrix(), Matrix::Identity(27, 27)) == 0.0);

    const std::vector<int> swap{2, 1};
    const Matrix p = permutation_op(swap, 2).matrix();
    const std::array<int, 4> rows{0, 2, 1, 3};
    for (int r = 0; r < 4; ++r) CHECK(dist(p.row(r), Matrix::Identity(4, 4).row(rows[r])) == 0.0);

    // The factor in slot t moves to slot sigma(t).
    const std::vector<int> cyc{2, 3, 1};
    CHECK(dist(permutation_op(cyc, 3).matrix() * basis(3, {1, 2, 3}), basis(3, {3, 1, 2})) == 0.0);
}

TEST_CASE("permutation_op is a representation of S_k")
{
    for (int k = 2; k <= 4; ++k) {
        const auto perms = all_permutations(k);
        for (const auto& sigma : perms) {
            for (const auto& tau : perms) {
                const Matrix lhs = permutation_op(compose(sigma, tau), 2).matrix();
                const Matrix rhs = permutation_op(sigma, 2).matrix() * permutation_op(tau, 2).matrix();
                CHECK(dist(lhs, rhs) == 0.0);
            }
        }
    }
}

TEST_CASE("permutations helpers")
{
    const auto perms = all_permutations(4);
    CHECK(perms.size() == 24);
    CHECK(std::is_sorted(perms.begin(), perms.end()));
    CHECK(inversions(std::vector<int>{3, 1, 2}) == 2);
    CHECK(sign(std::vector<int>{2, 1, 3}) == -1);
    CHECK(is_permutation(std::vector<int>{2, 3, 1}));
    CHECK_FALSE(is_permutation(std::vector<int>{2, 2, 1}));
    CHECK_FALSE(is_permutation(std::vector<int>{0, 1}));
    int total = 0;
    for (const auto& s : perms) total += sign(s);
    CHECK(total == 0);
}

TEST_CASE("antisymmetrizer examples")
{
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = expected(2, 2) = 0.5;
    expected(1, 2) = expected(2, 1) = -0.5;
    CHECK(dist(antisymmetrizer(2, 2).matrix(), expected) < 1e-16);

    for (int n = 2; n <= 4; ++n) {
        const TensorOperator a = antisymmetrizer(n, n);
        CHECK(dist((a * a).matrix(), a.matrix()) < 1e-13);
        CHECK(std::abs(a.trace() - 1.0) < 1e-13);
    }

    const Eigen::VectorXcd w = antisymmetric_vector(3);
    CHECK(w.squaredNorm() == doctest::Approx(6.0));
    CHECK((antisymmetrizer(3, 3).matrix() * w - w).norm() < 1e-14);

    // A v = <w, v> / N! w
    const Eigen::VectorXcd v = oracle::random_matrix(27, 1, 3);
    const Eigen::VectorXcd av = antisymmetrizer(3, 3).matrix() * v;
    CHECK((av - w.dot(v) / 6.0 * w).norm() < 1e-14);

    CHECK_THROWS_AS(antisymmetrizer(2, 3), SizeError);
    CHECK_THROWS_AS(antisymmetrizer(3, 1), SizeError);
}

TEST_CASE("antisymmetrizer rank is binomial(N, k)")
{
    const auto binom = [](int n, int k) {
        long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (int n = 2; n <= 4; ++n) {
        for (int k = 2; k <= n; ++k) {
            const TensorOperator a = antisymmetrizer(n, k);
            CHECK(dist((a * a).matrix(), a.matrix()) < 1e-13);
            CHECK(spectral(a).rank == binom(n, k));
        }
    }
}

TEST_CASE("partial_transpose")
{
    const TensorOperator x = random_op(3, 3, 12);
    for (int s = 1; s <= 3; ++s) {
        const TensorOperator t = partial_transpose(x, s);
        CHECK(dist(partial_transpose(t, s).matrix(), x.matrix()) == 0.0);
        CHECK(t.frobenius_norm() == doctest::Approx(x.frobenius_norm()).epsilon(1e-14));
    }
    const TensorOperator all = partial_transpose(partial_transpose(partial_transpose(x, 1), 2), 3);
    CHECK(dist(all.matrix(), x.matrix().transpose()) == 0.0);
    CHECK_THROWS(partial_transpose(x, 4));
}

TEST_CASE("partial_trace examples")
{
    for (int n = 2; n <= 4; ++n) {
        const TensorOperator pt = partial_trace(TensorOperator::identity(n, 2), {2});
        CHECK(dist(pt.matrix(), n * Matrix::Identity(n, n)) == 0.0);

        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 1);
        const TensorOperator full = partial_trace(antisymmetrizer(n, n), all);
        CHECK(full.arity() == 0);
        CHECK(std::abs(full(0, 0) - 1.0) < 1e-13);
    }
    CHECK_THROWS(partial_trace(TensorOperator::identity(2, 2), {1, 1}));
    CHECK_THROWS(partial_trace(TensorOperator::identity(2, 2), {}));
}

TEST_CASE("partial_trace is multiplicative on tensor products")
{
    unsigned seed = 30;
    for (int n = 2; n <= 4; ++n) {
        for (int k = 2; k <= 4; ++k) {
            if (kernels::ipow(n, k) > 256) continue;
            const TensorOperator x = random_op(n, 1, seed++);
            const TensorOperator y = random_op(n, k - 1, seed++);
            const TensorOperator xy = tensor(x, y);
            CHECK(dist(partial_trace(xy, {1}).matrix(), x.trace() * y.matrix()) < 1e-12);
            // Trace over every slot is the full trace.
            std::vector<int> all(k);
            std::iota(all.begin(), all.end(), 1);
            CHECK(std::abs(partial_trace(xy, all)(0, 0) - xy.trace()) < 1e-11);
        }
    }
}

TEST_CASE("spectral examples")
{
    const SpectralReport id = spectral(TensorOperator::identity(2, 2));
    CHECK(id.rank == 4);
    CHECK(id.kernel_basis.empty());
    for (cplx e : id.eigenvalues) CHECK(std::abs(e - 1.0) < 1e-14);

    for (int n = 2; n <= 4; ++n) {
        const SpectralReport a2 = spectral(antisymmetrizer(n, 2));
        CHECK(a2.rank == n * (n - 1) / 2);
        CHECK(a2.rank + static_cast<int>(a2.kernel_basis.size()) == n * n);
        // Orthonormal kernel.
        for (std::size_t i = 0; i < a2.kernel_basis.size(); ++i) {
            for (std::size_t j = 0; j < a2.kernel_basis.size(); ++j) {
                CHECK(std::abs(a2.kernel_basis[i].dot(a2.kernel_basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }

    Sampler s(21);
    const ModelParams params = s.params(3);
    const TensorOperator rq = build_r_regularized(params, RKind::EllipticRhat, params.log_q);
    CHECK(spectral(rq).rank == 6);
}

TEST_CASE("operator algebra")
{
    const TensorOperator x = random_op(2, 2, 40);
    CHECK(dist((x * x.inverse()).matrix(), Matrix::Identity(4, 4)) < 1e-12);
    CHECK_THROWS_AS(TensorOperator::zero(2, 2).inverse(), SingularError);
    const TensorOperator b = x.block(2, 1);
    CHECK(b.arity() == 1);
    CHECK(dist(b.matrix(), x.matrix().block(2, 0, 2, 2)) == 0.0);
    CHECK_THROWS_AS(TensorOperator(2, 13, Matrix::Zero(1, 1)), DimensionError);
}
