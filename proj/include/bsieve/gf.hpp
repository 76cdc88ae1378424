#pragma once

// Finite field tower F_p ⊆ F_q ⊆ F_{q^k}, q = p^a.  Every level k is
// realized concretely as F_p[t]/(M_k) with M_k the first monic irreducible
// of degree a·k in coefficient-counting order, so identical inputs always
// rebuild identical fields.  Embeddings between levels are found once by
// root search and cached; Frobenius acts through a precomputed matrix.

#include "bsieve/common.hpp"
#include "bsieve/rowreduce.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bsieve {

struct FieldElement {
    int level = 1;
    std::vector<std::uint32_t> c;  // a·level coefficients mod p, low degree first

    bool operator==(const FieldElement& o) const { return level == o.level && c == o.c; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool is_zero() const {
        for (auto v : c)
            if (v) return false;
        return true;
    }
};

// --- dense F_p[x] helpers used for modulus construction -------------------

namespace fpx {

using Poly = std::vector<std::uint32_t>;  // low degree first; may carry zeros

inline int deg(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i]) return i;
    return -1;
}

inline Poly mul(const Poly& f, const Poly& g, std::uint32_t p) {
    int df = deg(f), dg = deg(g);
    if (df < 0 || dg < 0) return {};
    Poly r(df + dg + 1, 0);
    for (int i = 0; i <= df; ++i) {
        if (!f[i]) continue;
        std::uint64_t fi = f[i];
        for (int j = 0; j <= dg; ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + fi * g[j]) % p);
    }
    return r;
}

// remainder of f by monic m
inline Poly mod(Poly f, const Poly& m, std::uint32_t p) {
    int dm = deg(m);
    for (int i = deg(f); i >= dm; --i) {
        std::uint32_t q = f[i];
        if (!q) continue;
        for (int j = 0; j <= dm; ++j)
            f[i - dm + j] = static_cast<std::uint32_t>(
                (f[i - dm + j] + (std::uint64_t)(p - 1) * q % p * m[j]) % p);
    }
    f.resize(std::max(dm, 1));
    return f;
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
    Poly r{1};
    base = mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = mod(mul(r, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline Poly gcd(Poly f, Poly g, std::uint32_t p) {
    FpOps fp{p};
    while (deg(g) >= 0) {
        // reduce f by g (g made monic on the fly)
        std::uint32_t lead = g[deg(g)];
        if (lead != 1) {
            std::uint32_t s = fp.inv(lead);
            for (auto& v : g) v = fp.mul(v, s);
        }
        f = mod(std::move(f), g, p);
        std::swap(f, g);
    }
    return f;
}

}  // namespace fpx

// First monic irreducible of degree n over F_p, scanning lower-coefficient
// vectors in counting order (c_0 varies fastest).  Degree-n f is irreducible
// iff gcd(f, x^{p^j} - x) = 1 for every j ≤ n/2.
inline std::vector<std::uint32_t> find_irreducible(std::uint32_t p, int n) {
    require(n >= 1, ErrKind::config, "find_irreducible: degree must be positive");
    fpx::Poly f(n + 1, 0);
    f[n] = 1;
    for (;;) {
        bool ok = true;
        fpx::Poly g{0, 1};  // x
        for (int j = 1; ok && 2 * j <= n; ++j) {
            g = fpx::powmod(std::move(g), p, f, p);  // now x^{p^j} mod f
            fpx::Poly d = g;
            if (d.size() < 2) d.resize(2, 0);
            d[1] = (d[1] + p - 1) % p;  // g - x
            if (fpx::deg(fpx::gcd(f, d, p)) > 0) ok = false;
        }
        if (ok) return f;
        // next candidate: increment the lower-coefficient counter
        int i = 0;
        while (i < n && ++f[i] == p) f[i++] = 0;
        require(i < n, ErrKind::config, "find_irreducible: search space exhausted");
    }
}

// ---------------------------------------------------------------------------

class FieldTower {
public:
    FieldTower(std::uint32_t p, int a, std::uint64_t level_budget = (1ull << 22))
        : p_(p), a_(a), budget_(level_budget), fp_{p} {
        require(p >= 2, ErrKind::config, "field characteristic must be at least 2");
        for (std::uint32_t d = 2; (std::uint64_t)d * d <= p; ++d)
            require(p % d != 0, ErrKind::config, "field characteristic must be prime");
        require(a >= 1, ErrKind::config, "field exponent a must be positive");
        ensure_level(1);
    }

    std::uint32_t p() const { return p_; }
    int a() const { return a_; }
    std::uint64_t q() const {
        std::uint64_t r = 1;
        for (int i = 0; i < a_; ++i) r *= p_;
        return r;
    }
    Int field_size(int k) const { return int_pow(Int(p_), (std::uint64_t)a_ * k); }

    bool has_level(int k) const { return levels_.count(k) != 0; }

    void ensure_level(int k) {
        require(k >= 1, ErrKind::config, "field level must be positive");
        if (levels_.count(k)) return;
        int n = a_ * k;
        Int size = int_pow(Int(p_), n);
        require(size <= Int(budget_), ErrKind::budget,
                "field level " + std::to_string(k) + " exceeds the level budget (" +
                    size.str() + " elements)");
        Level lv;
        lv.n = n;
        lv.mod = find_irreducible(p_, n);
        build_frobenius(lv);
        levels_.emplace(k, std::move(lv));
        // embeddings against every already-built level in the divisibility web
        if (k > 1) make_embedding(1, k);
        for (auto& [j, _] : levels_) {
            if (j == k || j == 1) continue;
            if (k % j == 0) make_embedding(j, k);
            if (j % k == 0 && k > 1) make_embedding(k, j);
        }
    }

    // --- element factories -------------------------------------------------

    FieldElement zero(int k) const { return {k, std::vector<std::uint32_t>(dim(k), 0)}; }
    FieldElement one(int k) const {
        FieldElement e = zero(k);
        e.c[0] = 1;
        return e;
    }
    // constant c mod p, as an element of level k
    FieldElement from_int(int k, std::int64_t v) const {
        FieldElement e = zero(k);
        std::int64_t r = v % (std::int64_t)p_;
        if (r < 0) r += p_;
        e.c[0] = static_cast<std::uint32_t>(r);
        return e;
    }
    FieldElement generator(int k) const {
        FieldElement e = zero(k);
        if (e.c.size() > 1)
            e.c[1] = 1;  // t itself
        // for a=1, k=1 the modulus is x, so t ≡ 0: e stays zero
        return e;
    }

    FieldElement from_rank(int k, std::uint64_t rank) const {
        FieldElement e = zero(k);
        for (int i = 0; i < dim(k) && rank; ++i) {
            e.c[i] = static_cast<std::uint32_t>(rank % p_);
            rank /= p_;
        }
        return e;
    }
    std::uint64_t rank_of(const FieldElement& x) const {
        std::uint64_t r = 0;
        for (int i = static_cast<int>(x.c.size()) - 1; i >= 0; --i) r = r * p_ + x.c[i];
        return r;
    }

    // --- arithmetic ---------------------------------------------------------

    FieldElement add(const FieldElement& x, const FieldElement& y) const {
        check_same(x, y);
        FieldElement r = x;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = fp_.add(r.c[i], y.c[i]);
        return r;
    }
    FieldElement sub(const FieldElement& x, const FieldElement& y) const {
        check_same(x, y);
        FieldElement r = x;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = fp_.sub(r.c[i], y.c[i]);
        return r;
    }
    FieldElement neg(const FieldElement& x) const {
        FieldElement r = x;
        for (auto& v : r.c) v = fp_.neg(v);
        return r;
    }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const {
        check_same(x, y);
        const Level& lv = level(x.level);
        std::vector<std::uint32_t> prod(2 * lv.n - 1, 0);
        for (int i = 0; i < lv.n; ++i) {
            if (!x.c[i]) continue;
            std::uint64_t xi = x.c[i];
            for (int j = 0; j < lv.n; ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + xi * y.c[j]) % p_);
        }
        fpx::Poly red = fpx::mod(std::move(prod), lv.mod, p_);
        FieldElement r = zero(x.level);
        for (int i = 0; i < lv.n && i < (int)red.size(); ++i) r.c[i] = red[i];
        return r;
    }

    // scale by an F_p constant
    FieldElement scale(const FieldElement& x, std::uint32_t s) const {
        FieldElement r = x;
        for (auto& v : r.c) v = fp_.mul(v, s % p_);
        return r;
    }

    FieldElement inv(const FieldElement& x) const {
        require(!x.is_zero(), ErrKind::config, "division by zero field element");
        const Level& lv = level(x.level);
        // extended Euclid in F_p[x] against the (irreducible) modulus
        fpx::Poly r0 = lv.mod, r1(x.c.begin(), x.c.end());
        fpx::Poly s0{0}, s1{1};
        while (fpx::deg(r1) > 0) {
            // divide r0 by r1
            fpx::Poly q(fpx::deg(r0) - fpx::deg(r1) + 1, 0);
            fpx::Poly rem = r0;
            std::uint32_t lead_inv = fp_.inv(r1[fpx::deg(r1)]);
            for (int i = fpx::deg(rem); i >= fpx::deg(r1); --i) {
                if (i > fpx::deg(rem)) continue;
                std::uint32_t coef = fp_.mul(rem[i], lead_inv);
                if (!coef) continue;
                q[i - fpx::deg(r1)] = coef;
                for (int j = 0; j <= fpx::deg(r1); ++j)
                    rem[i - fpx::deg(r1) + j] =
                        fp_.sub(rem[i - fpx::deg(r1) + j], fp_.mul(coef, r1[j]));
            }
            fpx::Poly s2 = s0;
            {
                fpx::Poly qs = fpx::mul(q, s1, p_);
                if (qs.size() < s2.size()) qs.resize(s2.size(), 0);
                if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
                for (std::size_t i = 0; i < s2.size(); ++i) s2[i] = fp_.sub(s2[i], qs[i]);
            }
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        require(fpx::deg(r1) == 0, ErrKind::config, "inverse does not exist (modulus not irreducible?)");
        std::uint32_t s = fp_.inv(r1[0]);
        FieldElement out = zero(x.level);
        for (int i = 0; i < (int)s1.size() && i < (int)out.c.size(); ++i)
            out.c[i] = fp_.mul(s1[i], s);
        return out;
    }

    FieldElement pow(FieldElement x, std::uint64_t e) const {
        FieldElement r = one(x.level);
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    // q-power Frobenius via the precomputed matrix (a generator of
    // Gal(F_{q^k}/F_q)); frobenius_pow applies it j times.
    FieldElement frobenius(const FieldElement& x) const {
        return matvec(level(x.level).frob_q, x);
    }
    FieldElement frobenius_pow(FieldElement x, int j) const {
        for (int i = 0; i < j; ++i) x = frobenius(x);
        return x;
    }

    // --- embeddings ----------------------------------------------------------

    // Embed x (level k1) into level k2; requires k1 | k2.  Levels are built on
    // demand, so pre-build everything before sharing a tower across threads.
    FieldElement embed(const FieldElement& x, int k2) {
        int k1 = x.level;
        if (k1 == k2) return x;
        require(k2 % k1 == 0, ErrKind::config,
                "embed: level " + std::to_string(k1) + " does not divide " + std::to_string(k2));
        ensure_level(k1);
        ensure_level(k2);
        const auto& pows = embed_pows_.at({k1, k2});
        FieldElement r = zero(k2);
        for (std::size_t i = 0; i < x.c.size(); ++i) {
            if (!x.c[i]) continue;
            r = add(r, scale(pows[i], x.c[i]));
        }
        return r;
    }

    const std::vector<std::uint32_t>& modulus(int k) const { return level(k).mod; }

    std::string str(const FieldElement& x) const { return std::to_string(rank_of(x)); }

private:
    struct Level {
        int n;                       // degree over F_p
        std::vector<std::uint32_t> mod;
        std::vector<std::vector<std::uint32_t>> frob_p;  // columns: (t^i)^p
        std::vector<std::vector<std::uint32_t>> frob_q;  // columns: (t^i)^q
    };

    std::uint32_t p_;
    int a_;
    std::uint64_t budget_;
    FpOps fp_;
    std::map<int, Level> levels_;
    std::map<std::pair<int, int>, std::vector<FieldElement>> embed_pows_;

    int dim(int k) const { return a_ * k; }

    const Level& level(int k) const {
        auto it = levels_.find(k);
        require(it != levels_.end(), ErrKind::config,
                "field level " + std::to_string(k) + " not built");
        return it->second;
    }

    void check_same(const FieldElement& x, const FieldElement& y) const {
        require(x.level == y.level, ErrKind::config, "field elements live at different levels");
    }

    static std::vector<std::vector<std::uint32_t>> power_columns(
        const fpx::Poly& base, const fpx::Poly& mod, int n, std::uint32_t p) {
        std::vector<std::vector<std::uint32_t>> cols(n);
        fpx::Poly cur{1};
        for (int i = 0; i < n; ++i) {
            cols[i].assign(n, 0);
            for (int j = 0; j < (int)cur.size() && j < n; ++j) cols[i][j] = cur[j];
            if (i + 1 < n) cur = fpx::mod(fpx::mul(cur, base, p), mod, p);
        }
        return cols;
    }

    void build_frobenius(Level& lv) {
        fpx::Poly tp = fpx::powmod({0, 1}, p_, lv.mod, p_);
        lv.frob_p = power_columns(tp, lv.mod, lv.n, p_);
        fpx::Poly tq{0, 1};
        for (int i = 0; i < a_; ++i) tq = fpx::powmod(std::move(tq), p_, lv.mod, p_);
        lv.frob_q = power_columns(tq, lv.mod, lv.n, p_);
    }

    FieldElement matvec(const std::vector<std::vector<std::uint32_t>>& cols,
                        const FieldElement& x) const {
        FieldElement r = zero(x.level);
        for (std::size_t i = 0; i < x.c.size(); ++i) {
            if (!x.c[i]) continue;
            std::uint64_t xi = x.c[i];
            const auto& col = cols[i];
            for (std::size_t j = 0; j < r.c.size(); ++j)
                r.c[j] = static_cast<std::uint32_t>((r.c[j] + xi * col[j]) % p_);
        }
        return r;
    }

    // Horner evaluation of an F_p[x] polynomial at a level-k element.
    FieldElement eval_fpx(const fpx::Poly& f, const FieldElement& x) const {
        FieldElement r = zero(x.level);
        for (int i = fpx::deg(f); i >= 0; --i) {
            r = mul(r, x);
            r.c[0] = fp_.add(r.c[0], f[i] % p_);
        }
        return r;
    }

    // Choose the image of t_{k1} inside level k2: the first root (in global
    // element-rank order) of M_{k1} that commutes with the chosen F_q
    // embeddings.  Roots live in the subfield fixed by Frob_p^{a·k1}, so only
    // that subfield is scanned.
    void make_embedding(int k1, int k2) {
        if (embed_pows_.count({k1, k2})) return;
        const Level& lo = level(k1);
        const Level& hi = level(k2);
        // F_p-basis of the fixed field of Frob_p^{n1} inside level k2
        int n1 = lo.n, n2 = hi.n;
        std::vector<std::vector<std::uint32_t>> rows(n2);
        for (int r = 0; r < n2; ++r) rows[r].assign(n2, 0);
        for (int i = 0; i < n2; ++i) {
            FieldElement e = zero(k2);
            e.c[i] = 1;
            for (int s = 0; s < n1; ++s) e = matvec(hi.frob_p, e);
            for (int r = 0; r < n2; ++r) rows[r][i] = e.c[r];
            rows[i][i] = fp_.sub(rows[i][i], 1);
        }
        auto rr = rref(fp_, rows, n2);
        auto basis = kernel_basis(fp_, rr);
        require((int)basis.size() == n1, ErrKind::verification,
                "fixed-field dimension mismatch while embedding levels");

        // enumerate the subfield, sort by global rank for a canonical choice
        std::uint64_t count = 1;
        for (int i = 0; i < n1; ++i) count *= p_;
        std::vector<std::pair<std::uint64_t, FieldElement>> members;
        members.reserve(count);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            FieldElement x = zero(k2);
            std::uint64_t rem = idx;
            for (int b = 0; b < n1; ++b) {
                std::uint32_t digit = static_cast<std::uint32_t>(rem % p_);
                rem /= p_;
                if (!digit) continue;
                for (int j = 0; j < n2; ++j)
                    x.c[j] = fp_.add(x.c[j], fp_.mul(digit, basis[b][j]));
            }
            members.emplace_back(rank_of(x), std::move(x));
        }
        std::sort(members.begin(), members.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        fpx::Poly m1(lo.mod.begin(), lo.mod.end());
        const FieldElement* phi_k1 = nullptr;
        const FieldElement* phi_k2 = nullptr;
        if (k1 > 1) {
            phi_k1 = &embed_pows_.at({1, k1})[std::min<std::size_t>(1, a_ * 1 - 1)];
            phi_k2 = &embed_pows_.at({1, k2})[std::min<std::size_t>(1, a_ * 1 - 1)];
        }
        for (auto& [rk, x] : members) {
            if (!eval_fpx(m1, x).is_zero()) continue;
            if (k1 > 1 && a_ > 1) {
                // ψ maps Σ u_i t_{k1}^i to Σ u_i x^i; require ψ(φ_{k1}) = φ_{k2}
                fpx::Poly phi_poly(phi_k1->c.begin(), phi_k1->c.end());
                if (!(eval_fpx(phi_poly, x) == *phi_k2)) continue;
            }
            std::vector<FieldElement> pows(n1);
            pows[0] = one(k2);
            for (int i = 1; i < n1; ++i) pows[i] = mul(pows[i - 1], x);
            embed_pows_.emplace(std::make_pair(k1, k2), std::move(pows));
            return;
        }
        fail(ErrKind::verification, "no compatible embedding root found between levels " +
                                        std::to_string(k1) + " and " + std::to_string(k2));
    }
};

// Field-ops adapter so the row-reduction engine can run over any tower level
// (residue fields of closed points included).
struct TowerOps {
    using Val = FieldElement;
    const FieldTower* tw;
    int level;

    Val zero() const { return tw->zero(level); }
    Val one() const { return tw->one(level); }
    bool is_zero(const Val& v) const { return v.is_zero(); }
    Val add(const Val& x, const Val& y) const { return tw->add(x, y); }
    Val sub(const Val& x, const Val& y) const { return tw->sub(x, y); }
    Val neg(const Val& x) const { return tw->neg(x); }
    Val mul(const Val& x, const Val& y) const { return tw->mul(x, y); }
    Val inv(const Val& x) const { return tw->inv(x); }
};

}  // namespace bsieve
