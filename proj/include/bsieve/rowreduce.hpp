#pragma once

// One row-reduction engine for every field used in the library.  The field
// is supplied as a small ops adapter (prime field, or a tower level), so the
// same code ranks Jacobians over residue fields and sieving matrices over
// F_p.  Pivoting is first-nonzero, which keeps every result deterministic.

#include "bsieve/common.hpp"

#include <cstdint>
#include <vector>

namespace bsieve {

// Prime-field adapter.  Values are residues in [0, p).
struct FpOps {
    using Val = std::uint32_t;
    std::uint32_t p;

    Val zero() const { return 0; }
    Val one() const { return 1; }
    bool is_zero(Val v) const { return v == 0; }
    Val add(Val x, Val y) const { return (x + y) % p; }
    Val sub(Val x, Val y) const { return (x + p - y) % p; }
    Val neg(Val x) const { return x ? p - x : 0; }
    Val mul(Val x, Val y) const {
        return static_cast<Val>((std::uint64_t)x * y % p);
    }
    Val inv(Val x) const {
        // extended Euclid on integers; p is prime and x != 0
        std::int64_t a = x, b = p, u = 1, v = 0;
        while (b) {
            std::int64_t t = a / b;
            a -= t * b;
            std::swap(a, b);
            u -= t * v;
            std::swap(u, v);
        }
        u %= (std::int64_t)p;
        if (u < 0) u += p;
        return static_cast<Val>(u);
    }
};

// Incremental reducer: rows are kept fully reduced (RREF invariant).  Used
// both to grow independent sets one candidate at a time and to test
// membership of a vector in the row space accumulated so far.
template <class F>
struct RowReducer {
    using Val = typename F::Val;
    F field;
    int cols;
    std::vector<std::vector<Val>> rows;  // sorted by pivot column
    std::vector<int> pivots;

    RowReducer(F f, int c) : field(f), cols(c) {}

    int rank() const { return static_cast<int>(rows.size()); }

    // Eliminates all known pivots from v in place; returns the column of the
    // first surviving nonzero entry, or -1 if v reduced to zero.
    int reduce(std::vector<Val>& v) const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Val coef = v[pivots[i]];
            if (field.is_zero(coef)) continue;
            const auto& r = rows[i];
            for (int j = pivots[i]; j < cols; ++j)
                v[j] = field.sub(v[j], field.mul(coef, r[j]));
        }
        for (int j = 0; j < cols; ++j)
            if (!field.is_zero(v[j])) return j;
        return -1;
    }

    bool in_rowspace(std::vector<Val> v) const { return reduce(v) == -1; }

    // Returns true when the row was independent and was added.
    bool add_row(std::vector<Val> v) {
        int piv = reduce(v);
        if (piv < 0) return false;
        Val s = field.inv(v[piv]);
        for (int j = piv; j < cols; ++j) v[j] = field.mul(v[j], s);
        // clear this column in existing rows to maintain RREF
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Val coef = rows[i][piv];
            if (field.is_zero(coef)) continue;
            for (int j = piv; j < cols; ++j)
                rows[i][j] = field.sub(rows[i][j], field.mul(coef, v[j]));
        }
        std::size_t pos = 0;
        while (pos < pivots.size() && pivots[pos] < piv) ++pos;
        rows.insert(rows.begin() + pos, std::move(v));
        pivots.insert(pivots.begin() + pos, piv);
        return true;
    }
};

template <class F>
struct RrefResult {
    using Val = typename F::Val;
    std::vector<std::vector<Val>> reduced;  // RREF rows, zero rows dropped
    std::vector<int> pivots;
    int rank = 0;
    int cols = 0;
};

template <class F>
RrefResult<F> rref(F field, const std::vector<std::vector<typename F::Val>>& m, int cols) {
    RowReducer<F> red(field, cols);
    for (const auto& r : m) red.add_row(r);
    RrefResult<F> out;
    out.reduced = red.rows;
    out.pivots = red.pivots;
    out.rank = red.rank();
    out.cols = cols;
    return out;
}

// Kernel basis from an RREF: one vector per free column, in column order.
template <class F>
std::vector<std::vector<typename F::Val>> kernel_basis(F field, const RrefResult<F>& r) {
    using Val = typename F::Val;
    std::vector<bool> is_pivot(r.cols, false);
    for (int p : r.pivots) is_pivot[p] = true;
    std::vector<std::vector<Val>> out;
    for (int fc = 0; fc < r.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Val> v(r.cols, field.zero());
        v[fc] = field.one();
        for (int i = 0; i < r.rank; ++i)
            v[r.pivots[i]] = field.neg(r.reduced[i][fc]);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace bsieve
