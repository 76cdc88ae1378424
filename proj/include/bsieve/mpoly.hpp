#pragma once

// Multivariate polynomials over the base field F_q.  Homogeneous forms are
// dense vectors indexed by a graded-lex monomial basis (rank/unrank through
// the combinatorial number system); dehomogenized chart polynomials are
// sparse term lists.  Includes the text parser used by experiment configs.

#include "bsieve/common.hpp"
#include "bsieve/gf.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bsieve {

// Monomials of degree exactly d in nv variables, ordered by decreasing
// lexicographic exponent vector (rank 0 is x0^d).
struct MonomialBasis {
    int nv;
    int d;
    std::vector<std::vector<std::uint64_t>> binom;  // Pascal table

    MonomialBasis(int nv_, int d_) : nv(nv_), d(d_) {
        require(nv >= 1 && d >= 0, ErrKind::config, "monomial basis needs nv >= 1, d >= 0");
        int n = nv + d + 1;
        binom.assign(n, {});
        for (int i = 0; i < n; ++i) {
            binom[i].assign(i + 1, 1);
            for (int j = 1; j < i; ++j) binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
    }

    std::uint64_t choose(int n, int k) const {
        if (k < 0 || k > n || n < 0) return 0;
        return binom[n][k];
    }

    // number of degree-`deg` monomials in `vars` variables
    std::uint64_t count(int deg, int vars) const { return choose(deg + vars - 1, vars - 1); }

    std::uint64_t size() const { return count(d, nv); }

    std::uint64_t rank(const std::vector<int>& e) const {
        std::uint64_t r = 0;
        int rem = d;
        for (int pos = 0; pos + 1 < nv; ++pos) {
            int vars_left = nv - pos - 1;
            int skipped = rem - e[pos] - 1;  // exponents above e[pos] come first
            if (skipped >= 0) r += choose(skipped + vars_left, vars_left);
            rem -= e[pos];
        }
        return r;
    }

    std::vector<int> unrank(std::uint64_t idx) const {
        std::vector<int> e(nv, 0);
        int rem = d;
        for (int pos = 0; pos + 1 < nv; ++pos) {
            int vars_left = nv - pos - 1;
            for (int t = rem; t >= 0; --t) {
                std::uint64_t block = count(rem - t, vars_left);
                if (idx < block) {
                    e[pos] = t;
                    rem -= t;
                    break;
                }
                idx -= block;
            }
        }
        e[nv - 1] = rem;
        return e;
    }
};

// --- homogeneous forms ------------------------------------------------------

struct HomPoly {
    int nv = 0;  // variables x0..x_{nv-1}
    int d = 0;
    std::vector<FieldElement> coeffs;  // rank order, level-1 field elements

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }
};

inline HomPoly hom_zero(const FieldTower& tw, int nv, int d) {
    MonomialBasis mb(nv, d);
    HomPoly f;
    f.nv = nv;
    f.d = d;
    f.coeffs.assign(mb.size(), tw.zero(1));
    return f;
}

inline HomPoly hom_add(const FieldTower& tw, const HomPoly& f, const HomPoly& g) {
    require(f.nv == g.nv && f.d == g.d, ErrKind::config, "adding forms of different shape");
    HomPoly r = f;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = tw.add(r.coeffs[i], g.coeffs[i]);
    return r;
}

inline HomPoly hom_scale(const FieldTower& tw, const HomPoly& f, const FieldElement& s) {
    HomPoly r = f;
    for (auto& c : r.coeffs) c = tw.mul(c, s);
    return r;
}

inline HomPoly hom_mul(const FieldTower& tw, const HomPoly& f, const HomPoly& g) {
    require(f.nv == g.nv, ErrKind::config, "multiplying forms in different variable counts");
    MonomialBasis mf(f.nv, f.d), mg(g.nv, g.d);
    HomPoly r = hom_zero(tw, f.nv, f.d + g.d);
    MonomialBasis mr(f.nv, r.d);
    for (std::uint64_t i = 0; i < mf.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto ei = mf.unrank(i);
        for (std::uint64_t j = 0; j < mg.size(); ++j) {
            if (g.coeffs[j].is_zero()) continue;
            auto ej = mg.unrank(j);
            std::vector<int> e(f.nv);
            for (int v = 0; v < f.nv; ++v) e[v] = ei[v] + ej[v];
            std::uint64_t k = mr.rank(e);
            r.coeffs[k] = tw.add(r.coeffs[k], tw.mul(f.coeffs[i], g.coeffs[j]));
        }
    }
    return r;
}

// monomial (exponent vector) times form, a common special case
inline HomPoly hom_mono_mul(const FieldTower& tw, const HomPoly& f, const std::vector<int>& mono) {
    int md = 0;
    for (int v : mono) md += v;
    MonomialBasis mf(f.nv, f.d);
    HomPoly r = hom_zero(tw, f.nv, f.d + md);
    MonomialBasis mr(f.nv, r.d);
    for (std::uint64_t i = 0; i < mf.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto e = mf.unrank(i);
        for (int v = 0; v < f.nv; ++v) e[v] += mono[v];
        r.coeffs[mr.rank(e)] = f.coeffs[i];
    }
    return r;
}

inline HomPoly partial_derivative(const FieldTower& tw, const HomPoly& f, int var) {
    require(var >= 0 && var < f.nv, ErrKind::config, "derivative variable out of range");
    if (f.d == 0) return hom_zero(tw, f.nv, 0);
    MonomialBasis mf(f.nv, f.d), mr(f.nv, f.d - 1);
    HomPoly r = hom_zero(tw, f.nv, f.d - 1);
    for (std::uint64_t i = 0; i < mf.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto e = mf.unrank(i);
        if (e[var] == 0) continue;
        std::uint32_t mult = static_cast<std::uint32_t>(e[var] % tw.p());
        if (!mult) continue;  // exponent divisible by the characteristic
        e[var] -= 1;
        r.coeffs[mr.rank(e)] = tw.scale(f.coeffs[i], mult);
    }
    return r;
}

// --- sparse chart polynomials ------------------------------------------------

struct AffTerm {
    std::vector<int> e;
    FieldElement coef;  // level 1
};

struct AffPoly {
    int nv = 0;
    std::vector<AffTerm> terms;  // unique exponent vectors, nonzero coefficients

    bool is_zero() const { return terms.empty(); }
};

namespace detail {
inline void aff_normalize(const FieldTower& tw, AffPoly& f) {
    std::map<std::vector<int>, FieldElement> acc;
    for (auto& t : f.terms) {
        auto it = acc.find(t.e);
        if (it == acc.end())
            acc.emplace(t.e, t.coef);
        else
            it->second = tw.add(it->second, t.coef);
    }
    f.terms.clear();
    for (auto& [e, c] : acc)
        if (!c.is_zero()) f.terms.push_back({e, c});
}
}  // namespace detail

// substitute x_chart = 1; the result keeps all nv slots with slot `chart` at 0
inline AffPoly dehomogenize(const FieldTower& tw, const HomPoly& f, int chart) {
    require(chart >= 0 && chart < f.nv, ErrKind::config, "chart index out of range");
    MonomialBasis mb(f.nv, f.d);
    AffPoly r;
    r.nv = f.nv;
    for (std::uint64_t i = 0; i < mb.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto e = mb.unrank(i);
        e[chart] = 0;
        r.terms.push_back({std::move(e), f.coeffs[i]});
    }
    detail::aff_normalize(tw, r);
    return r;
}

inline AffPoly partial_derivative(const FieldTower& tw, const AffPoly& f, int var) {
    require(var >= 0 && var < f.nv, ErrKind::config, "derivative variable out of range");
    AffPoly r;
    r.nv = f.nv;
    for (const auto& t : f.terms) {
        if (t.e[var] == 0) continue;
        std::uint32_t mult = static_cast<std::uint32_t>(t.e[var] % tw.p());
        if (!mult) continue;
        AffTerm nt{t.e, tw.scale(t.coef, mult)};
        nt.e[var] -= 1;
        r.terms.push_back(std::move(nt));
    }
    detail::aff_normalize(tw, r);
    return r;
}

// --- evaluation ----------------------------------------------------------------

// A polynomial readied for repeated evaluation at one tower level: base-field
// coefficients embedded once, exponent vectors unpacked once.
struct EvalPrep {
    int level = 1;
    int nv = 0;
    std::vector<std::pair<std::vector<int>, FieldElement>> terms;
    std::vector<int> max_exp;  // per variable, for power tables
};

inline EvalPrep prep_eval(FieldTower& tw, const HomPoly& f, int level) {
    EvalPrep ep;
    ep.level = level;
    ep.nv = f.nv;
    ep.max_exp.assign(f.nv, 0);
    MonomialBasis mb(f.nv, f.d);
    for (std::uint64_t i = 0; i < mb.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto e = mb.unrank(i);
        for (int v = 0; v < f.nv; ++v) ep.max_exp[v] = std::max(ep.max_exp[v], e[v]);
        ep.terms.emplace_back(std::move(e), tw.embed(f.coeffs[i], level));
    }
    return ep;
}

inline EvalPrep prep_eval(FieldTower& tw, const AffPoly& f, int level) {
    EvalPrep ep;
    ep.level = level;
    ep.nv = f.nv;
    ep.max_exp.assign(f.nv, 0);
    for (const auto& t : f.terms) {
        for (int v = 0; v < f.nv; ++v) ep.max_exp[v] = std::max(ep.max_exp[v], t.e[v]);
        ep.terms.emplace_back(t.e, tw.embed(t.coef, level));
    }
    return ep;
}

inline FieldElement eval_prepped(const FieldTower& tw, const EvalPrep& ep,
                                 const std::vector<FieldElement>& coords) {
    require((int)coords.size() == ep.nv, ErrKind::config, "evaluation arity mismatch");
    std::vector<std::vector<FieldElement>> pows(ep.nv);
    for (int v = 0; v < ep.nv; ++v) {
        pows[v].reserve(ep.max_exp[v] + 1);
        pows[v].push_back(tw.one(ep.level));
        for (int e = 1; e <= ep.max_exp[v]; ++e) pows[v].push_back(tw.mul(pows[v].back(), coords[v]));
    }
    FieldElement acc = tw.zero(ep.level);
    for (const auto& [e, c] : ep.terms) {
        FieldElement m = c;
        for (int v = 0; v < ep.nv; ++v)
            if (e[v]) m = tw.mul(m, pows[v][e[v]]);
        acc = tw.add(acc, m);
    }
    return acc;
}

inline FieldElement evaluate(FieldTower& tw, const HomPoly& f,
                             const std::vector<FieldElement>& coords, int level) {
    return eval_prepped(tw, prep_eval(tw, f, level), coords);
}

inline FieldElement evaluate(FieldTower& tw, const AffPoly& f,
                             const std::vector<FieldElement>& coords, int level) {
    return eval_prepped(tw, prep_eval(tw, f, level), coords);
}

// Value of the degree-d form f at a point, trivialized by the smallest
// coordinate that is invertible there: x_j(P)^{-d} · f(P).  Scaling the
// representative leaves the result unchanged.
inline FieldElement twist_restrict(FieldTower& tw, const HomPoly& f,
                                   const std::vector<FieldElement>& coords, int level) {
    int j = -1;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!coords[i].is_zero()) {
            j = static_cast<int>(i);
            break;
        }
    require(j >= 0, ErrKind::config, "twist_restrict: zero coordinate vector");
    FieldElement val = evaluate(tw, f, coords, level);
    FieldElement scale = tw.pow(tw.inv(coords[j]), (std::uint64_t)f.d);
    return tw.mul(val, scale);
}

// --- text form ------------------------------------------------------------------

// Grammar: sum of terms, term = factor ('*' factor)*, factor = integer or
// x<idx> with optional ^<exp>.  Coefficients are integers reduced mod p.
struct ParsedPoly {
    std::vector<std::pair<std::vector<int>, std::int64_t>> terms;  // exponents sized nv
    int degree = -1;  // common total degree; -1 until known
};

inline ParsedPoly parse_poly_text(const std::string& text, int nv, std::uint32_t p) {
    ParsedPoly out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    };
    auto syntax_error = [&](const std::string& what) -> void {
        fail(ErrKind::config,
             "polynomial syntax error at position " + std::to_string(i) + ": " + what +
                 " in \"" + text + "\"");
    };
    auto read_int = [&]() -> std::int64_t {
        std::size_t start = i;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
        if (i == start) syntax_error("expected a number");
        return std::stoll(text.substr(start, i - start));
    };

    std::map<std::vector<int>, std::int64_t> acc;
    skip_ws();
    if (i >= text.size()) syntax_error("empty polynomial");
    bool first = true;
    while (i < text.size()) {
        std::int64_t sign = 1;
        skip_ws();
        if (!first || text[i] == '+' || text[i] == '-') {
            if (i >= text.size() || (text[i] != '+' && text[i] != '-'))
                syntax_error("expected '+' or '-'");
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        first = false;
        // one term: product of factors
        std::int64_t coef = sign;
        std::vector<int> expo(nv, 0);
        bool more = true;
        bool any_factor = false;
        while (more) {
            skip_ws();
            if (i >= text.size()) syntax_error("unexpected end of input");
            if (std::isdigit((unsigned char)text[i])) {
                coef *= read_int() % p;
            } else if (text[i] == 'x') {
                ++i;
                std::int64_t vi = read_int();
                if (vi < 0 || vi >= nv)
                    fail(ErrKind::config, "unknown variable x" + std::to_string(vi) +
                                              " (expected x0..x" + std::to_string(nv - 1) +
                                              ") in \"" + text + "\"");
                int e = 1;
                skip_ws();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip_ws();
                    e = static_cast<int>(read_int());
                    require(e >= 1, ErrKind::config, "exponents must be positive in \"" + text + "\"");
                }
                expo[vi] += e;
            } else {
                syntax_error("expected a coefficient or a variable");
            }
            any_factor = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            more = false;
        }
        if (!any_factor) syntax_error("empty term");
        acc[expo] += coef;
        skip_ws();
    }

    for (auto& [e, c] : acc) {
        std::int64_t r = c % (std::int64_t)p;
        if (r < 0) r += p;
        if (r == 0) continue;
        int deg = 0;
        for (int v : e) deg += v;
        if (out.degree < 0) out.degree = deg;
        out.terms.emplace_back(e, r);
    }
    return out;
}

// Parse as a homogeneous form; rejects mixed-degree and identically-zero input.
inline HomPoly parse_form(const FieldTower& tw, const std::string& text, int nv) {
    ParsedPoly pp = parse_poly_text(text, nv, tw.p());
    require(!pp.terms.empty(), ErrKind::config,
            "polynomial \"" + text + "\" is zero after reduction mod " + std::to_string(tw.p()));
    for (const auto& [e, c] : pp.terms) {
        int deg = 0;
        for (int v : e) deg += v;
        require(deg == pp.degree, ErrKind::config,
                "polynomial \"" + text + "\" is not homogeneous (degrees " +
                    std::to_string(pp.degree) + " and " + std::to_string(deg) + ")");
    }
    HomPoly f = hom_zero(tw, nv, pp.degree);
    MonomialBasis mb(nv, pp.degree);
    for (const auto& [e, c] : pp.terms) f.coeffs[mb.rank(e)] = tw.from_int(1, c);
    return f;
}

inline std::string to_string(const FieldTower& tw, const HomPoly& f) {
    if (f.is_zero()) return "0";
    MonomialBasis mb(f.nv, f.d);
    std::string out;
    for (std::uint64_t i = 0; i < mb.size(); ++i) {
        if (f.coeffs[i].is_zero()) continue;
        auto e = mb.unrank(i);
        std::string term;
        std::uint64_t r = tw.rank_of(f.coeffs[i]);
        bool printed_coef = false;
        if (r != 1) {
            term += std::to_string(r);
            printed_coef = true;
        }
        bool any_var = false;
        for (int v = 0; v < f.nv; ++v) {
            if (!e[v]) continue;
            if (printed_coef || any_var) term += "*";
            term += "x" + std::to_string(v);
            if (e[v] > 1) term += "^" + std::to_string(e[v]);
            any_var = true;
        }
        if (!any_var && !printed_coef) term = "1";
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out;
}

}  // namespace bsieve
