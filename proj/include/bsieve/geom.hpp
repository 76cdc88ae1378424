#pragma once

// Projective geometry over the tower: schemes cut out by homogeneous
// equations inside P^n, rational-point enumeration by affine-chart sweep,
// closed points as Frobenius orbits, tangent spaces, embedding dimension of
// a closed subscheme at a point, stratification by that invariant, partial
// zeta products, and the simple-normal-crossings desk check.

#include "bsieve/common.hpp"
#include "bsieve/gf.hpp"
#include "bsieve/mpoly.hpp"
#include "bsieve/rowreduce.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bsieve {

struct SchemeDesc {
    int n = 1;                        // ambient P^n
    std::vector<HomPoly> closed_eqs;  // V(closed_eqs), empty = whole P^n
    std::vector<HomPoly> removed_eqs; // open complement of V(removed_eqs); empty = remove nothing
    std::optional<int> expected_dim;

    // Dimension used by smoothness checks: explicit if given, else the
    // complete-intersection count n - #closed_eqs.
    int dim() const {
        if (expected_dim) return *expected_dim;
        int d = n - static_cast<int>(closed_eqs.size());
        return d < 0 ? 0 : d;
    }
};

// A normalized point representative: the first nonzero coordinate (the
// chart) is scaled to 1, so tuple equality is projective equality and
// coordinatewise Frobenius preserves the normalization.
struct ClosedPoint {
    int degree = 1;  // orbit size; coordinates live at this tower level
    int chart = 0;
    std::vector<FieldElement> rep;
};

inline std::string point_str(const FieldTower& tw, const ClosedPoint& P) {
    std::string s = "(";
    for (std::size_t i = 0; i < P.rep.size(); ++i) {
        if (i) s += ":";
        s += std::to_string(tw.rank_of(P.rep[i]));
    }
    return s + ")@" + std::to_string(P.degree);
}

struct EnumOptions {
    std::uint64_t budget = 1ull << 26;              // cap for (q^k)^{ n+1 }
    const std::vector<ClosedPoint>* excluded = nullptr;  // points removed from the scheme
    int workers = 1;
};

namespace detail {

inline std::vector<std::uint64_t> rank_tuple(const FieldTower& tw,
                                             const std::vector<FieldElement>& coords) {
    std::vector<std::uint64_t> r;
    r.reserve(coords.size());
    for (const auto& c : coords) r.push_back(tw.rank_of(c));
    return r;
}

// Orbit tuples (as rank vectors) of every excluded point embeddable at level k.
inline std::vector<std::vector<std::uint64_t>> excluded_tuples_at(
    FieldTower& tw, const std::vector<ClosedPoint>* excluded, int k) {
    std::vector<std::vector<std::uint64_t>> out;
    if (!excluded) return out;
    for (const auto& P : *excluded) {
        if (k % P.degree != 0) continue;
        std::vector<FieldElement> cur;
        for (const auto& c : P.rep) cur.push_back(tw.embed(c, k));
        for (int step = 0; step < P.degree; ++step) {
            out.push_back(rank_tuple(tw, cur));
            for (auto& c : cur) c = tw.frobenius(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// All F_{q^k}-points of the scheme, one normalized representative per point,
// ordered by chart then by coordinate ranks (deterministic for any worker
// count).  Budget gate: (q^k)^{n+1} must not exceed opts.budget.
inline std::vector<ClosedPoint> rational_points(FieldTower& tw, const SchemeDesc& X, int k,
                                                const EnumOptions& opts = {}) {
    require(k >= 1, ErrKind::config, "rational_points: level must be positive");
    Int total_space = int_pow(tw.field_size(k), X.n + 1);
    require(total_space <= Int(opts.budget), ErrKind::budget,
            "enumeration budget exceeded at level " + std::to_string(k) + ": (q^k)^(n+1) = " +
                total_space.str() + " > " + std::to_string(opts.budget));
    tw.ensure_level(k);

    std::uint64_t fs = tw.field_size(k).convert_to<std::uint64_t>();
    std::vector<EvalPrep> closed, removed;
    for (const auto& f : X.closed_eqs) closed.push_back(prep_eval(tw, f, k));
    for (const auto& f : X.removed_eqs) removed.push_back(prep_eval(tw, f, k));
    auto excl = detail::excluded_tuples_at(tw, opts.excluded, k);

    // global candidate index space: chart j contributes fs^(n-j) candidates
    std::vector<std::uint64_t> chart_size(X.n + 1), chart_base(X.n + 1);
    std::uint64_t total = 0;
    for (int j = X.n; j >= 0; --j) {
        std::uint64_t sz = 1;
        for (int i = 0; i < X.n - j; ++i) sz *= fs;
        chart_size[j] = sz;
    }
    for (int j = 0; j <= X.n; ++j) {
        chart_base[j] = total;
        total += chart_size[j];
    }

    int workers = opts.workers < 1 ? 1 : opts.workers;
    std::vector<std::vector<ClosedPoint>> slots(workers == 1 ? 1 : workers);

    auto sweep = [&](int slot, std::uint64_t begin, std::uint64_t end) {
        auto& out = slots[slot];
        std::vector<FieldElement> coords(X.n + 1, tw.zero(k));
        for (std::uint64_t g = begin; g < end; ++g) {
            int chart = 0;
            while (g >= chart_base[chart] + chart_size[chart]) ++chart;
            std::uint64_t local = g - chart_base[chart];
            for (int i = 0; i < chart; ++i) coords[i] = tw.zero(k);
            coords[chart] = tw.one(k);
            // first free variable is the most significant digit
            std::uint64_t rem = local;
            for (int i = X.n; i > chart; --i) {
                coords[i] = tw.from_rank(k, rem % fs);
                rem /= fs;
            }
            bool on_closed = true;
            for (const auto& ep : closed)
                if (!eval_prepped(tw, ep, coords).is_zero()) {
                    on_closed = false;
                    break;
                }
            if (!on_closed) continue;
            if (!removed.empty()) {
                bool all_removed_vanish = true;
                for (const auto& ep : removed)
                    if (!eval_prepped(tw, ep, coords).is_zero()) {
                        all_removed_vanish = false;
                        break;
                    }
                if (all_removed_vanish) continue;  // point lies in the removed locus
            }
            if (!excl.empty()) {
                auto rt = detail::rank_tuple(tw, coords);
                if (std::binary_search(excl.begin(), excl.end(), rt)) continue;
            }
            out.push_back(ClosedPoint{k, chart, coords});
        }
    };

    if (workers == 1)
        sweep(0, 0, total);
    else
        run_chunked(total, workers, sweep);

    std::vector<ClosedPoint> pts;
    for (auto& s : slots) {
        pts.insert(pts.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
        s.clear();
    }
    return pts;
}

// Closed points of degree ≤ max_deg: Frobenius orbits of rational points,
// one canonical (lex-smallest) representative each.  Degree-g counts are
// cross-checked against rational-point counts by Möbius inversion.
inline std::vector<ClosedPoint> closed_points(FieldTower& tw, const SchemeDesc& X, int max_deg,
                                              const EnumOptions& opts = {}) {
    std::vector<ClosedPoint> out;
    std::vector<std::uint64_t> n_count(max_deg + 1, 0);  // N_g
    std::vector<std::uint64_t> c_count(max_deg + 1, 0);  // closed points of degree g
    for (int k = 1; k <= max_deg; ++k) {
        auto pts = rational_points(tw, X, k, opts);
        n_count[k] = pts.size();
        for (auto& P : pts) {
            // walk the orbit; keep P only if it is the canonical member of a
            // full-size orbit
            auto cur = P.rep;
            auto cur_rt = detail::rank_tuple(tw, cur);
            auto best = cur_rt;
            int size = 0;
            bool canonical = true;
            do {
                for (auto& c : cur) c = tw.frobenius(c);
                cur_rt = detail::rank_tuple(tw, cur);
                if (cur_rt < best) canonical = false;
                ++size;
            } while (!(cur == P.rep));
            if (size != k || !canonical) continue;
            ++c_count[k];
            out.push_back(std::move(P));
        }
        // Möbius consistency: N_k = sum over j | k of j * c_j
        std::uint64_t recovered = 0;
        for (int j = 1; j <= k; ++j)
            if (k % j == 0) recovered += (std::uint64_t)j * c_count[j];
        require(recovered == n_count[k], ErrKind::verification,
                "closed-point bookkeeping failed at degree " + std::to_string(k) +
                    ": rational count " + std::to_string(n_count[k]) + " vs orbit count " +
                    std::to_string(recovered));
    }
    return out;
}

inline bool lies_on(FieldTower& tw, const std::vector<HomPoly>& eqs, const ClosedPoint& P) {
    for (const auto& f : eqs)
        if (!evaluate(tw, f, P.rep, P.degree).is_zero()) return false;
    return true;
}

// --- tangent spaces and smoothness -------------------------------------------

struct TangentSpace {
    int m = 0;                   // dim U, certified by the Jacobian rank
    int chart = 0;
    std::vector<int> affine_vars;                     // global variable index per column
    std::vector<std::vector<FieldElement>> basis;     // m kernel vectors over κ(P)
    std::vector<std::vector<FieldElement>> jac_rows;  // Jacobian rows of U's equations
};

namespace detail {

inline std::vector<FieldElement> gradient_at(FieldTower& tw, const HomPoly& f,
                                             const ClosedPoint& P,
                                             const std::vector<int>& affine_vars) {
    AffPoly fa = dehomogenize(tw, f, P.chart);
    std::vector<FieldElement> g;
    g.reserve(affine_vars.size());
    for (int v : affine_vars)
        g.push_back(evaluate(tw, partial_derivative(tw, fa, v), P.rep, P.degree));
    return g;
}

}  // namespace detail

// Kernel of the Jacobian of U's equations at P, over κ(P).  Errors if the
// rank is not exactly n - dim U (U not smooth of the expected dimension
// there, an input-hypothesis failure).
inline TangentSpace tangent_space(FieldTower& tw, const SchemeDesc& U, const ClosedPoint& P) {
    require(lies_on(tw, U.closed_eqs, P), ErrKind::config,
            "tangent_space: point " + point_str(tw, P) + " is not on the scheme");
    TangentSpace T;
    T.m = U.dim();
    T.chart = P.chart;
    for (int v = 0; v <= U.n; ++v)
        if (v != P.chart) T.affine_vars.push_back(v);
    for (const auto& f : U.closed_eqs)
        T.jac_rows.push_back(detail::gradient_at(tw, f, P, T.affine_vars));
    TowerOps ops{&tw, P.degree};
    auto rr = rref(ops, T.jac_rows, U.n);
    require(rr.rank == U.n - T.m, ErrKind::hypothesis,
            "scheme is not smooth of dimension " + std::to_string(T.m) + " at " +
                point_str(tw, P) + " (Jacobian rank " + std::to_string(rr.rank) + ", expected " +
                std::to_string(U.n - T.m) + ")");
    T.basis = kernel_basis(ops, rr);
    return T;
}

// First-order data of a form at P: twisted value then the tangential
// derivatives along the canonical tangent basis — an element of κ(P)^{1+m}.
inline std::vector<FieldElement> jet_at(FieldTower& tw, const HomPoly& f, const ClosedPoint& P,
                                        const TangentSpace& T) {
    AffPoly fa = dehomogenize(tw, f, P.chart);
    std::vector<FieldElement> jet;
    jet.reserve(1 + T.basis.size());
    jet.push_back(evaluate(tw, fa, P.rep, P.degree));
    std::vector<FieldElement> grad;
    for (int v : T.affine_vars)
        grad.push_back(evaluate(tw, partial_derivative(tw, fa, v), P.rep, P.degree));
    for (const auto& tv : T.basis) {
        FieldElement acc = tw.zero(P.degree);
        for (std::size_t i = 0; i < grad.size(); ++i)
            acc = tw.add(acc, tw.mul(grad[i], tv[i]));
        jet.push_back(acc);
    }
    return jet;
}

// H_f ∩ U is smooth (of dimension dim U - 1) at P iff the first-order data
// of f at P does not vanish entirely.
inline bool is_smooth_at(FieldTower& tw, const HomPoly& f, const SchemeDesc& U,
                         const ClosedPoint& P) {
    TangentSpace T = tangent_space(tw, U, P);
    for (const auto& c : jet_at(tw, f, P, T))
        if (!c.is_zero()) return true;
    return false;
}

// --- embedding dimension -------------------------------------------------------

// e(P) = dim_{κ(P)} of the Zariski cotangent space of V = Z ∩ U at P, as seen
// inside U.  Computed two independent ways that must agree:
//  (a) m minus the rank of the Z-generators' gradients projected onto T_P U;
//  (b) via first-order jets: m minus the rank growth when the Z-gradients are
//      stacked under U's Jacobian.
inline int embedding_dimension(FieldTower& tw, const std::vector<HomPoly>& z_gens,
                               const SchemeDesc& U, const ClosedPoint& P) {
    require(lies_on(tw, z_gens, P), ErrKind::config,
            "embedding_dimension: point " + point_str(tw, P) + " is not on the subscheme");
    TangentSpace T = tangent_space(tw, U, P);
    TowerOps ops{&tw, P.degree};

    // (a) project each gradient onto the tangent basis
    std::vector<std::vector<FieldElement>> proj;
    std::vector<std::vector<FieldElement>> grads;
    for (const auto& g : z_gens) {
        auto gr = detail::gradient_at(tw, g, P, T.affine_vars);
        std::vector<FieldElement> row;
        for (const auto& tv : T.basis) {
            FieldElement acc = tw.zero(P.degree);
            for (std::size_t i = 0; i < gr.size(); ++i)
                acc = tw.add(acc, tw.mul(gr[i], tv[i]));
            row.push_back(acc);
        }
        proj.push_back(std::move(row));
        grads.push_back(std::move(gr));
    }
    int e_proj = T.m - rref(ops, proj, T.m).rank;

    // (b) rank growth of the stacked ambient jets
    std::vector<std::vector<FieldElement>> stacked = T.jac_rows;
    int rank_u = rref(ops, stacked, U.n).rank;
    for (auto& gr : grads) stacked.push_back(std::move(gr));
    int rank_tot = rref(ops, stacked, U.n).rank;
    int e_jet = T.m - (rank_tot - rank_u);

    require(e_proj == e_jet, ErrKind::verification,
            "embedding-dimension methods disagree at " + point_str(tw, P) + ": projection " +
                std::to_string(e_proj) + " vs jet " + std::to_string(e_jet));
    require(e_proj >= 0 && e_proj <= T.m, ErrKind::verification,
            "embedding dimension out of range at " + point_str(tw, P));
    return e_proj;
}

// --- stratification ---------------------------------------------------------

struct StratumTable {
    int m = 0;
    int B = 0;  // enumeration horizon (inclusive)
    std::vector<std::pair<ClosedPoint, int>> points;        // (P, e) over V, deg ≤ B
    std::map<int, std::map<int, long long>> closed_counts;  // e -> degree -> count
    std::map<int, int> dim_est;                             // e -> heuristic dimension
    std::map<int, bool> dim_overridden;

    bool stratum_nonempty(int e) const { return closed_counts.count(e) != 0; }

    // rational-point count of stratum e over F_{q^g}, exact for g ≤ B
    long long rational_count(int e, int g) const {
        auto it = closed_counts.find(e);
        if (it == closed_counts.end()) return 0;
        long long n = 0;
        for (const auto& [j, c] : it->second)
            if (g % j == 0) n += (long long)j * c;
        return n;
    }

    bool v_top_nonempty() const { return stratum_nonempty(m); }

    // max over nonempty strata with e < m of e + dim_estimate; -1 when none
    int max_e_plus_dim() const {
        int best = -1;
        for (const auto& [e, d] : dim_est)
            if (e < m) best = std::max(best, e + d);
        return best;
    }
};

// Point-count growth estimate of a stratum's dimension: the largest l with
// q^{g·l} ≤ N_g at the largest degree g ≤ B where the stratum has points,
// clamped to [0, m].  A heuristic — configs may override per stratum.
inline int dim_estimate_from_counts(const FieldTower& tw,
                                    const std::function<long long(int)>& N, int B, int m) {
    for (int g = B; g >= 1; --g) {
        long long n = N(g);
        if (n <= 0) continue;
        int l = 0;
        while (l < m && int_pow(Int(tw.q()), (std::uint64_t)g * (l + 1)) <= Int(n)) ++l;
        return l;
    }
    return -1;  // empty within the horizon
}

// V = Z ∩ U (minus any excluded points), stratified by embedding dimension.
inline StratumTable stratify(FieldTower& tw, const std::vector<HomPoly>& z_gens,
                             const SchemeDesc& U, int B, const EnumOptions& opts = {}) {
    StratumTable st;
    st.m = U.dim();
    st.B = B;
    if (z_gens.empty()) return st;  // V empty: nothing to stratify
    SchemeDesc V = U;
    for (const auto& g : z_gens) V.closed_eqs.push_back(g);
    V.expected_dim.reset();
    for (auto& P : closed_points(tw, V, B, opts)) {
        int e = embedding_dimension(tw, z_gens, U, P);
        st.closed_counts[e][P.degree] += 1;
        st.points.emplace_back(std::move(P), e);
    }
    for (const auto& [e, _] : st.closed_counts) {
        int d = dim_estimate_from_counts(
            tw, [&](int g) { return st.rational_count(e, g); }, B, st.m);
        st.dim_est[e] = d;
        st.dim_overridden[e] = false;
    }
    return st;
}

// --- zeta partial products ------------------------------------------------------

struct ZetaData {
    int s = 1;
    int R = 1;                    // degrees < R enter the product
    std::vector<long long> N;     // N[g-1] = #X(F_{q^g}), g = 1..R-1
    std::vector<long long> c;     // closed-point counts by degree
    Rat value = 1;
    int dim_est = -1;             // growth estimate from the counts
    bool at_or_below_pole = false;
};

inline ZetaData zeta_from_closed_counts(const FieldTower& tw, int s, int R,
                                        const std::map<int, long long>& closed_by_deg,
                                        int ambient_dim_cap) {
    ZetaData z;
    z.s = s;
    z.R = R;
    z.N.assign(R > 1 ? R - 1 : 0, 0);
    z.c.assign(R > 1 ? R - 1 : 0, 0);
    for (int g = 1; g < R; ++g) {
        long long cg = 0;
        auto it = closed_by_deg.find(g);
        if (it != closed_by_deg.end()) cg = it->second;
        z.c[g - 1] = cg;
        long long n = 0;
        for (const auto& [j, c] : closed_by_deg)
            if (j <= g && g % j == 0) n += (long long)j * c;
        z.N[g - 1] = n;
        if (cg) {
            Int qsg = int_pow(Int(tw.q()), (std::uint64_t)s * g);
            Rat factor(qsg, qsg - 1);  // (1 - q^{-sg})^{-1}
            for (long long i = 0; i < cg; ++i) z.value *= factor;
        }
    }
    z.dim_est = dim_estimate_from_counts(
        tw,
        [&](int g) { return g <= R - 1 ? z.N[g - 1] : 0; },
        R - 1, ambient_dim_cap);
    z.at_or_below_pole = z.dim_est >= 0 && s <= z.dim_est;
    return z;
}

// Exact partial product of ζ_X(s) over closed points of degree < R.
inline ZetaData zeta_partial(FieldTower& tw, const SchemeDesc& X, int s, int R,
                             const EnumOptions& opts = {}) {
    std::map<int, long long> by_deg;
    if (R > 1)
        for (const auto& P : closed_points(tw, X, R - 1, opts)) by_deg[P.degree] += 1;
    return zeta_from_closed_counts(tw, s, R, by_deg, X.n);
}

// --- simple normal crossings check ---------------------------------------------

struct SncPointRow {
    ClosedPoint P;
    int on_components = 0;  // k(P)
    int e = 0;
    int bound = 0;  // l + k - 1
    bool ok = false;
};

struct SncCodimRow {
    int k = 0;                                // points on ≥ k components
    std::map<int, long long> closed_by_deg;   // their degree histogram
    int dim_est = -1;
    int expected = 0;  // l - (k-1)
    bool ok = false;
};

struct SncReport {
    int l = 0;
    int B = 0;
    std::vector<HomPoly> union_gens;  // products across components
    std::vector<SncPointRow> rows;
    std::vector<SncCodimRow> codim;
    bool bound_ok = true;
    bool codim_ok = true;
};

// Components W_i (generator lists) of common dimension l inside U; V = ∪W_i.
// Checks e_V(P) ≤ l + k(P) - 1 at every closed point of V with degree ≤ B,
// and estimates the dimension of the ≥k-fold loci against l - (k-1).
inline SncReport snc_bound_check(FieldTower& tw, const std::vector<std::vector<HomPoly>>& comps,
                                 const SchemeDesc& U, int l, int B,
                                 const EnumOptions& opts = {}) {
    require(!comps.empty(), ErrKind::config, "snc check needs at least one component");
    SncReport rep;
    rep.l = l;
    rep.B = B;
    // union ideal generated by all products taking one generator per component
    std::vector<HomPoly> prods;
    for (const auto& g : comps[0]) prods.push_back(g);
    for (std::size_t i = 1; i < comps.size(); ++i) {
        std::vector<HomPoly> next;
        for (const auto& f : prods)
            for (const auto& g : comps[i]) next.push_back(hom_mul(tw, f, g));
        prods = std::move(next);
    }
    rep.union_gens = prods;

    SchemeDesc V = U;
    for (const auto& g : prods) V.closed_eqs.push_back(g);
    V.expected_dim.reset();
    auto pts = closed_points(tw, V, B, opts);

    std::map<int, std::map<int, long long>> geq_counts;  // k -> degree histogram
    for (auto& P : pts) {
        int k = 0;
        for (const auto& comp : comps)
            if (lies_on(tw, comp, P)) ++k;
        int e = embedding_dimension(tw, prods, U, P);
        SncPointRow row;
        row.on_components = k;
        row.e = e;
        row.bound = l + k - 1;
        row.ok = e <= row.bound;
        if (!row.ok) rep.bound_ok = false;
        for (int kk = 2; kk <= k; ++kk) geq_counts[kk][P.degree] += 1;
        row.P = std::move(P);
        rep.rows.push_back(std::move(row));
    }
    for (int k = 2; k <= (int)comps.size(); ++k) {
        SncCodimRow cr;
        cr.k = k;
        cr.expected = l - (k - 1);
        auto it = geq_counts.find(k);
        if (it != geq_counts.end()) cr.closed_by_deg = it->second;
        auto count_n = [&](int g) {
            long long n = 0;
            for (const auto& [j, c] : cr.closed_by_deg)
                if (g % j == 0) n += (long long)j * c;
            return n;
        };
        cr.dim_est = dim_estimate_from_counts(tw, count_n, B, U.dim());
        bool empty = cr.closed_by_deg.empty();
        if (cr.expected < 0)
            cr.ok = empty;  // deeper multiple loci must not exist at all
        else
            cr.ok = empty || cr.dim_est <= cr.expected;
        if (!cr.ok) rep.codim_ok = false;
        rep.codim.push_back(std::move(cr));
    }
    return rep;
}

// Build a validated closed point from explicit coordinates at a given level:
// normalizes the representative, requires the orbit size to equal the level,
// and canonicalizes to the lex-smallest orbit member.
inline ClosedPoint make_closed_point(FieldTower& tw, std::vector<FieldElement> coords,
                                     int level) {
    tw.ensure_level(level);
    int chart = -1;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!coords[i].is_zero()) {
            chart = static_cast<int>(i);
            break;
        }
    require(chart >= 0, ErrKind::config, "point has all coordinates zero");
    FieldElement s = tw.inv(coords[chart]);
    for (auto& c : coords) c = tw.mul(c, s);

    // orbit walk: size must be exactly `level`, else the point is stated at
    // the wrong level; collect the canonical member on the way
    auto cur = coords;
    auto best = coords;
    auto best_rt = detail::rank_tuple(tw, best);
    int size = 0;
    do {
        for (auto& c : cur) c = tw.frobenius(c);
        auto rt = detail::rank_tuple(tw, cur);
        if (rt < best_rt) {
            best_rt = rt;
            best = cur;
        }
        ++size;
    } while (!(cur == coords));
    require(size == level, ErrKind::config,
            "point declared at level " + std::to_string(level) + " actually has degree " +
                std::to_string(size) + "; please restate it at its true level");
    ClosedPoint P;
    P.degree = level;
    P.rep = std::move(best);
    P.chart = 0;
    while (P.rep[P.chart].is_zero()) ++P.chart;
    return P;
}

}  // namespace bsieve
