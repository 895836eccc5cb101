#include "ellqdet/tensor_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellqdet/kernels.hpp"
#include "ellqdet/permutations.hpp"

namespace ellqdet {

namespace {

long checked_dim(int local_dim, int arity)
{
    if (local_dim < 1 || arity < 0) {
        throw DimensionError("TensorOperator: local_dim must be >= 1 and arity >= 0");
    }
    long dim = 1;
    for (int i = 0; i < arity; ++i) {
        dim *= local_dim;
        if (dim > kMaxDenseDim) {
            throw DimensionError("TensorOperator: dimension " + std::to_string(local_dim) + "^" + std::to_string(arity) +
                                 " exceeds the dense limit " + std::to_string(kMaxDenseDim));
        }
    }
    return dim;
}

void check_same_shape(const TensorOperator& a, const TensorOperator& b)
{
    if (a.local_dim() != b.local_dim() || a.arity() != b.arity()) {
        throw DimensionError("TensorOperator: operands act on different spaces");
    }
}

void check_slots(std::span<const int> slots, int arity)
{
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] < 1 || slots[i] > arity) {
            throw DimensionError("slot " + std::to_string(slots[i]) + " outside 1.." + std::to_string(arity));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (slots[i] == slots[j]) throw DimensionError("repeated slot " + std::to_string(slots[i]));
        }
    }
}

}  // namespace

TensorOperator::TensorOperator(int local_dim, int arity, Matrix entries)
    : local_dim_(local_dim), arity_(arity), entries_(std::move(entries))
{
    const long dim = checked_dim(local_dim, arity);
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw DimensionError("TensorOperator: matrix is " + std::to_string(entries_.rows()) + "x" +
                             std::to_string(entries_.cols()) + ", expected " + std::to_string(dim) + "x" +
                             std::to_string(dim));
    }
}

TensorOperator TensorOperator::identity(int local_dim, int arity)
{
    const long dim = checked_dim(local_dim, arity);
    return {local_dim, arity, Matrix::Identity(dim, dim)};
}

TensorOperator TensorOperator::zero(int local_dim, int arity)
{
    const long dim = checked_dim(local_dim, arity);
    return {local_dim, arity, Matrix::Zero(dim, dim)};
}

TensorOperator TensorOperator::inverse(double max_condition) const
{
    Eigen::JacobiSVD<Matrix> svd(entries_);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    if (!(smin > 0.0) || smax / smin > max_condition) {
        throw SingularError("TensorOperator::inverse: condition number " + std::to_string(smin > 0 ? smax / smin : INFINITY) +
                            " exceeds " + std::to_string(max_condition));
    }
    return {local_dim_, arity_, entries_.partialPivLu().inverse()};
}

TensorOperator TensorOperator::block(int i, int j) const
{
    if (arity_ < 1 || i < 1 || j < 1 || i > local_dim_ || j > local_dim_) {
        throw DimensionError("TensorOperator::block: index outside 1..N");
    }
    const long sub = dim() / local_dim_;
    return {local_dim_, arity_ - 1, entries_.block((i - 1) * sub, (j - 1) * sub, sub, sub)};
}

TensorOperator operator*(const TensorOperator& a, const TensorOperator& b)
{
    check_same_shape(a, b);
    return {a.local_dim_, a.arity_, a.entries_ * b.entries_};
}

TensorOperator operator+(const TensorOperator& a, const TensorOperator& b)
{
    check_same_shape(a, b);
    return {a.local_dim_, a.arity_, a.entries_ + b.entries_};
}

TensorOperator operator-(const TensorOperator& a, const TensorOperator& b)
{
    check_same_shape(a, b);
    return {a.local_dim_, a.arity_, a.entries_ - b.entries_};
}

TensorOperator operator*(cplx s, const TensorOperator& a)
{
    return {a.local_dim_, a.arity_, s * a.entries_};
}

TensorOperator embed(const TensorOperator& op, std::span<const int> slots, int arity)
{
    if (static_cast<int>(slots.size()) != op.arity()) {
        throw DimensionError("embed: operator arity does not match the number of slots");
    }
    check_slots(slots, arity);
    checked_dim(op.local_dim(), arity);
    return {op.local_dim(), arity, kernels::embed(op.matrix(), op.local_dim(), slots, arity)};
}

TensorOperator embed(const TensorOperator& op, std::initializer_list<int> slots, int arity)
{
    return embed(op, std::span<const int>(slots.begin(), slots.size()), arity);
}

TensorOperator permutation_op(std::span<const int> sigma, int local_dim)
{
    if (!is_permutation(sigma)) throw DimensionError("permutation_op: not a permutation");
    const int k = static_cast<int>(sigma.size());
    const long dim = checked_dim(local_dim, k);
    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(dim, dim);
    std::vector<int> image(static_cast<std::size_t>(k));
    for (long col = 0; col < dim; ++col) {
        const auto d = kernels::digits(col, local_dim, k);
        for (int t = 0; t < k; ++t) image[static_cast<std::size_t>(sigma[static_cast<std::size_t>(t)] - 1)] = d[static_cast<std::size_t>(t)];
        m(kernels::compose(image, local_dim), col) = 1.0;
    }
    return {local_dim, k, std::move(m)};
}

TensorOperator swap_op(int local_dim)
{
    const int sigma[] = {2, 1};
    return permutation_op(sigma, local_dim);
}

TensorOperator swap_slots(const TensorOperator& op)
{
    if (op.arity() != 2) throw DimensionError("swap_slots: arity-2 operator expected");
    const auto p = swap_op(op.local_dim());
    return p * op * p;
}

TensorOperator antisymmetrizer(int local_dim, int k)
{
    if (k < 2 || k > local_dim) {
        throw SizeError("antisymmetrizer: need 2 <= k <= N, got k=" + std::to_string(k) + ", N=" + std::to_string(local_dim));
    }
    const long dim = checked_dim(local_dim, k);
    const auto perms = all_permutations(k);
    const double norm = 1.0 / static_cast<double>(perms.size());
    TensorOperator::Matrix m = TensorOperator::Matrix::Zero(dim, dim);
    std::vector<int> image(static_cast<std::size_t>(k));
    for (long col = 0; col < dim; ++col) {
        const auto d = kernels::digits(col, local_dim, k);
        for (const auto& s : perms) {
            for (int t = 0; t < k; ++t) image[static_cast<std::size_t>(s[static_cast<std::size_t>(t)] - 1)] = d[static_cast<std::size_t>(t)];
            m(kernels::compose(image, local_dim), col) += static_cast<double>(sign(s)) * norm;
        }
    }
    return {local_dim, k, std::move(m)};
}

Eigen::VectorXcd antisymmetric_vector(int local_dim)
{
    const long dim = kernels::ipow(local_dim, local_dim);
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(dim);
    std::vector<int> d(static_cast<std::size_t>(local_dim));
    for (const auto& s : all_permutations(local_dim)) {
        for (int t = 0; t < local_dim; ++t) d[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t)] - 1;
        w(kernels::compose(d, local_dim)) = static_cast<double>(sign(s));
    }
    return w;
}

TensorOperator partial_transpose(const TensorOperator& op, int slot)
{
    const int k = op.arity();
    const int n = op.local_dim();
    if (slot < 1 || slot > k) throw DimensionError("partial_transpose: slot out of range");
    const long dim = op.dim();
    const long stride = kernels::ipow(n, k - slot);
    TensorOperator::Matrix out(dim, dim);
    for (long c = 0; c < dim; ++c) {
        const long dc = (c / stride) % n;
        for (long r = 0; r < dim; ++r) {
            const long dr = (r / stride) % n;
            out(r + (dc - dr) * stride, c + (dr - dc) * stride) = op(r, c);
        }
    }
    return {n, k, std::move(out)};
}

TensorOperator partial_trace(const TensorOperator& op, std::span<const int> slots)
{
    if (slots.empty()) throw DimensionError("partial_trace: no slots given");
    check_slots(slots, op.arity());
    return {op.local_dim(), op.arity() - static_cast<int>(slots.size()),
            kernels::partial_trace(op.matrix(), op.local_dim(), op.arity(), slots)};
}

TensorOperator partial_trace(const TensorOperator& op, std::initializer_list<int> slots)
{
    return partial_trace(op, std::span<const int>(slots.begin(), slots.size()));
}

TensorOperator tensor(const TensorOperator& a, const TensorOperator& b)
{
    if (a.local_dim() != b.local_dim()) throw DimensionError("tensor: local dimensions differ");
    checked_dim(a.local_dim(), a.arity() + b.arity());
    const auto& am = a.matrix();
    const auto& bm = b.matrix();
    TensorOperator::Matrix out(am.rows() * bm.rows(), am.cols() * bm.cols());
    for (long i = 0; i < am.rows(); ++i) {
        for (long j = 0; j < am.cols(); ++j) {
            out.block(i * bm.rows(), j * bm.cols(), bm.rows(), bm.cols()) = am(i, j) * bm;
        }
    }
    return {a.local_dim(), a.arity() + b.arity(), std::move(out)};
}

SpectralReport spectral(const TensorOperator& op, double sv_threshold)
{
    if (!op.matrix().allFinite()) throw ConvergenceError("spectral: non-finite entries");
    SpectralReport rep;
    rep.sv_threshold = sv_threshold;

    Eigen::ComplexEigenSolver<TensorOperator::Matrix> eig(op.matrix(), false);
    if (eig.info() != Eigen::Success) throw ConvergenceError("spectral: eigenvalue iteration did not converge");
    rep.eigenvalues.assign(eig.eigenvalues().begin(), eig.eigenvalues().end());

    Eigen::BDCSVD<TensorOperator::Matrix> svd(op.matrix(), Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw ConvergenceError("spectral: SVD did not converge");
    const auto& sv = svd.singularValues();
    rep.singular_values.assign(sv.begin(), sv.end());
    const double smax = sv.size() ? sv(0) : 0.0;
    for (long i = 0; i < sv.size(); ++i) {
        if (sv(i) > sv_threshold * smax) ++rep.rank;
    }
    for (long i = rep.rank; i < sv.size(); ++i) rep.kernel_basis.emplace_back(svd.matrixV().col(i));
    return rep;
}

}  // namespace ellqdet
