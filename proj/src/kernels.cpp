#include "ellqdet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace ellqdet::kernels {

namespace {

using cplx = std::complex<double>;

// Offsets in the full index for every local index of the chosen slots.
std::vector<long> slot_offsets(int local_dim, std::span<const int> slots, int arity)
{
    const int j = static_cast<int>(slots.size());
    std::vector<long> off(static_cast<std::size_t>(ipow(local_dim, j)), 0);
    for (long x = 0; x < static_cast<long>(off.size()); ++x) {
        long rem = x;
        long acc = 0;
        for (int t = j - 1; t >= 0; --t) {
            const long d = rem % local_dim;
            rem /= local_dim;
            acc += d * ipow(local_dim, arity - slots[static_cast<std::size_t>(t)]);
        }
        off[static_cast<std::size_t>(x)] = acc;
    }
    return off;
}

std::vector<int> complement(std::span<const int> slots, int arity)
{
    std::vector<int> rest;
    for (int s = 1; s <= arity; ++s) {
        if (std::find(slots.begin(), slots.end(), s) == slots.end()) rest.push_back(s);
    }
    return rest;
}

struct Neumaier {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};

    static void add(double& s, double& c, double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }

    void add(cplx x)
    {
        double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
        add(sr, cr, x.real());
        add(si, ci, x.imag());
        sum = {sr, si};
        comp = {cr, ci};
    }

    cplx result() const { return sum + comp; }
};

}  // namespace

std::vector<int> digits(long index, int local_dim, int arity)
{
    std::vector<int> d(static_cast<std::size_t>(arity));
    for (int s = arity - 1; s >= 0; --s) {
        d[static_cast<std::size_t>(s)] = static_cast<int>(index % local_dim);
        index /= local_dim;
    }
    return d;
}

long compose(std::span<const int> d, int local_dim)
{
    long idx = 0;
    for (int x : d) idx = idx * local_dim + x;
    return idx;
}

Matrix embed(const Matrix& op, int local_dim, std::span<const int> slots, int arity)
{
    const long dim = ipow(local_dim, arity);
    const auto local = slot_offsets(local_dim, slots, arity);
    const auto rest = complement(slots, arity);
    const auto outer = slot_offsets(local_dim, rest, arity);
    const long n_local = static_cast<long>(local.size());
    const long n_outer = static_cast<long>(outer.size());

    Matrix out = Matrix::Zero(dim, dim);
#pragma omp parallel for schedule(static)
    for (long o = 0; o < n_outer; ++o) {
        const long base = outer[static_cast<std::size_t>(o)];
        for (long c = 0; c < n_local; ++c) {
            const long col = base + local[static_cast<std::size_t>(c)];
            for (long r = 0; r < n_local; ++r) {
                out(base + local[static_cast<std::size_t>(r)], col) = op(r, c);
            }
        }
    }
    return out;
}

void apply_on_slots(const Matrix& op, int local_dim, std::span<const int> slots, int arity, Matrix& states)
{
    const auto local = slot_offsets(local_dim, slots, arity);
    const auto rest = complement(slots, arity);
    const auto outer = slot_offsets(local_dim, rest, arity);
    const long n_local = static_cast<long>(local.size());
    const long n_outer = static_cast<long>(outer.size());
    const long n_cols = states.cols();
    const long work = n_outer * n_cols;

#pragma omp parallel
    {
        Eigen::VectorXcd in(n_local);
        Eigen::VectorXcd res(n_local);
#pragma omp for schedule(static)
        for (long w = 0; w < work; ++w) {
            const long col = w / n_outer;
            const long base = outer[static_cast<std::size_t>(w % n_outer)];
            for (long x = 0; x < n_local; ++x) in(x) = states(base + local[static_cast<std::size_t>(x)], col);
            res.noalias() = op * in;
            for (long x = 0; x < n_local; ++x) states(base + local[static_cast<std::size_t>(x)], col) = res(x);
        }
    }
}

Matrix partial_trace(const Matrix& m, int local_dim, int arity, std::span<const int> traced)
{
    const auto kept = complement(traced, arity);
    const auto kept_off = slot_offsets(local_dim, kept, arity);
    const auto traced_off = slot_offsets(local_dim, traced, arity);
    const long n_kept = static_cast<long>(kept_off.size());

    Matrix out(n_kept, n_kept);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < n_kept; ++r) {
        for (long c = 0; c < n_kept; ++c) {
            cplx acc{0.0, 0.0};
            for (long t : traced_off) {
                acc += m(kept_off[static_cast<std::size_t>(r)] + t, kept_off[static_cast<std::size_t>(c)] + t);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

Matrix compensated_sum(std::span<const Matrix> terms)
{
    if (terms.empty()) return {};
    const long rows = terms.front().rows();
    const long cols = terms.front().cols();
    Matrix out(rows, cols);
    const long n = rows * cols;
#pragma omp parallel for schedule(static)
    for (long e = 0; e < n; ++e) {
        Neumaier acc;
        for (const auto& t : terms) acc.add(t(e % rows, e / rows));
        out(e % rows, e / rows) = acc.result();
    }
    return out;
}

namespace serial {

Matrix embed(const Matrix& op, int local_dim, std::span<const int> slots, int arity)
{
    const long dim = ipow(local_dim, arity);
    Matrix out = Matrix::Zero(dim, dim);
    std::vector<int> sub_r(slots.size()), sub_c(slots.size());
    for (long r = 0; r < dim; ++r) {
        const auto dr = digits(r, local_dim, arity);
        for (long c = 0; c < dim; ++c) {
            const auto dc = digits(c, local_dim, arity);
            bool same_outside = true;
            for (int s = 1; s <= arity && same_outside; ++s) {
                const bool acted = std::find(slots.begin(), slots.end(), s) != slots.end();
                if (!acted && dr[static_cast<std::size_t>(s - 1)] != dc[static_cast<std::size_t>(s - 1)]) same_outside = false;
            }
            if (!same_outside) continue;
            for (std::size_t t = 0; t < slots.size(); ++t) {
                sub_r[t] = dr[static_cast<std::size_t>(slots[t] - 1)];
                sub_c[t] = dc[static_cast<std::size_t>(slots[t] - 1)];
            }
            out(r, c) = op(compose(sub_r, local_dim), compose(sub_c, local_dim));
        }
    }
    return out;
}

void apply_on_slots(const Matrix& op, int local_dim, std::span<const int> slots, int arity, Matrix& states)
{
    states = embed(op, local_dim, slots, arity) * states;
}

Matrix partial_trace(const Matrix& m, int local_dim, int arity, std::span<const int> traced)
{
    const auto kept = complement(traced, arity);
    const int k_kept = static_cast<int>(kept.size());
    const long n_kept = ipow(local_dim, k_kept);
    Matrix out = Matrix::Zero(n_kept, n_kept);
    const long dim = ipow(local_dim, arity);
    for (long r = 0; r < dim; ++r) {
        const auto dr = digits(r, local_dim, arity);
        for (long c = 0; c < dim; ++c) {
            const auto dc = digits(c, local_dim, arity);
            bool diagonal = true;
            for (int s : traced) {
                if (dr[static_cast<std::size_t>(s - 1)] != dc[static_cast<std::size_t>(s - 1)]) diagonal = false;
            }
            if (!diagonal) continue;
            std::vector<int> kr, kc;
            for (int s : kept) {
                kr.push_back(dr[static_cast<std::size_t>(s - 1)]);
                kc.push_back(dc[static_cast<std::size_t>(s - 1)]);
            }
            out(compose(kr, local_dim), compose(kc, local_dim)) += m(r, c);
        }
    }
    return out;
}

Matrix compensated_sum(std::span<const Matrix> terms)
{
    if (terms.empty()) return {};
    Matrix out(terms.front().rows(), terms.front().cols());
    for (long c = 0; c < out.cols(); ++c) {
        for (long r = 0; r < out.rows(); ++r) {
            Neumaier acc;
            for (const auto& t : terms) acc.add(t(r, c));
            out(r, c) = acc.result();
        }
    }
    return out;
}

}  // namespace serial

}  // namespace ellqdet::kernels
