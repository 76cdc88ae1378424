#pragma once

// The sieve's quantitative layer: which fraction of the degree-d forms through
// a fixed subscheme cut out a hypersurface that is smooth along the checked
// points and takes prescribed values at marked points.  Provides exact
// counting (exhaustive sweep and kernel-fiber counting), the degree-by-degree
// truncated product, its zeta-quotient limit with a convergence bracket, a
// medium-degree tail bound from observed point counts, Monte Carlo sampling
// with Wilson intervals, and a certified search for one smooth section.

#include "bsieve/common.hpp"
#include "bsieve/geom.hpp"
#include "bsieve/gf.hpp"
#include "bsieve/linalg.hpp"
#include "bsieve/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bsieve {

// --- local conditions at the marked points ---------------------------------------

enum class TMode { full, zero, nonzero_each, explicit_list };

inline std::string tmode_str(TMode m) {
    switch (m) {
        case TMode::full: return "full";
        case TMode::zero: return "zero";
        case TMode::nonzero_each: return "nonzero-per-component";
        case TMode::explicit_list: return "explicit-list";
    }
    return "?";
}

inline TMode tmode_parse(const std::string& s) {
    if (s == "full") return TMode::full;
    if (s == "zero") return TMode::zero;
    if (s == "nonzero-per-component") return TMode::nonzero_each;
    if (s == "explicit-list") return TMode::explicit_list;
    fail(ErrKind::config, "unknown value-condition mode '" + s +
                              "' (expected full | zero | nonzero-per-component | explicit-list)");
}

// T: the admitted tuples of values at the marked points, one kappa(y_i)-value
// per point, each value identified by its element rank.
struct LocalConditionSet {
    std::vector<ClosedPoint> y_points;
    TMode mode = TMode::full;
    std::vector<std::vector<std::uint64_t>> tuples;  // explicit mode only
    std::set<std::vector<std::uint64_t>> tuple_set;
    int sum_deg = 0;   // sum of the marked points' degrees
    Int h0_size = 1;   // q^{sum_deg}: all value tuples
    Int t_size = 1;    // admitted tuples

    Rat prefactor() const { return Rat(t_size, h0_size); }
};

inline LocalConditionSet make_conditions(FieldTower& tw, std::vector<ClosedPoint> ys, TMode mode,
                                         std::vector<std::vector<std::uint64_t>> tuples = {}) {
    LocalConditionSet c;
    c.y_points = std::move(ys);
    c.mode = mode;
    for (const auto& y : c.y_points) c.sum_deg += y.degree;
    c.h0_size = int_pow(Int(tw.q()), (std::uint64_t)c.sum_deg);
    switch (mode) {
        case TMode::full:
            c.t_size = c.h0_size;
            break;
        case TMode::zero:
            c.t_size = 1;
            break;
        case TMode::nonzero_each: {
            c.t_size = 1;
            for (const auto& y : c.y_points)
                c.t_size *= int_pow(Int(tw.q()), (std::uint64_t)y.degree) - 1;
            break;
        }
        case TMode::explicit_list: {
            for (auto& t : tuples) {
                require(t.size() == c.y_points.size(), ErrKind::config,
                        "explicit value tuple has " + std::to_string(t.size()) +
                            " components, expected one per marked point (" +
                            std::to_string(c.y_points.size()) + ")");
                for (std::size_t i = 0; i < t.size(); ++i) {
                    Int sz = int_pow(Int(tw.q()), (std::uint64_t)c.y_points[i].degree);
                    require(Int(t[i]) < sz, ErrKind::config,
                            "explicit value rank " + std::to_string(t[i]) +
                                " exceeds the residue field at marked point " +
                                std::to_string(i));
                }
                require(c.tuple_set.insert(t).second, ErrKind::config,
                        "duplicate explicit value tuple");
            }
            c.tuples = std::move(tuples);
            c.t_size = (std::uint64_t)c.tuples.size();
            break;
        }
    }
    return c;
}

// --- the allowed-target predicate -------------------------------------------------

namespace detail {

// Rank of one kappa(P)-coordinate of a block inside a flattened target vector
// (little-endian base-p digits, matching the tower's element ranks).
inline std::uint64_t block_coord_rank(const EvalMapData& em, const TargetBlock& blk, int coord,
                                      const std::vector<std::uint32_t>& target) {
    int len = em.a * blk.P.degree;
    std::uint64_t r = 0, mult = 1;
    for (int i = 0; i < len; ++i) {
        r += mult * target[blk.offset_p + (std::size_t)coord * len + i];
        mult *= em.p;
    }
    return r;
}

inline bool block_nonzero(const TargetBlock& blk, const std::vector<std::uint32_t>& target) {
    for (int i = 0; i < blk.width_p; ++i)
        if (target[blk.offset_p + i]) return true;
    return false;
}

}  // namespace detail

// Does a flattened target vector satisfy the conditions: the marked-point
// values form an admitted tuple and every singularity-test jet is nonzero?
inline bool target_allowed(const EvalMapData& em, const LocalConditionSet& cond,
                           const std::vector<std::uint32_t>& target) {
    std::size_t ny = cond.y_points.size();
    switch (cond.mode) {
        case TMode::full:
            break;
        case TMode::zero:
            for (std::size_t i = 0; i < ny; ++i)
                if (detail::block_nonzero(em.blocks[i], target)) return false;
            break;
        case TMode::nonzero_each:
            for (std::size_t i = 0; i < ny; ++i)
                if (!detail::block_nonzero(em.blocks[i], target)) return false;
            break;
        case TMode::explicit_list: {
            std::vector<std::uint64_t> t(ny);
            for (std::size_t i = 0; i < ny; ++i)
                t[i] = detail::block_coord_rank(em, em.blocks[i], 0, target);
            if (!cond.tuple_set.count(t)) return false;
            break;
        }
    }
    for (std::size_t bi = ny; bi < em.blocks.size(); ++bi)
        if (!detail::block_nonzero(em.blocks[bi], target)) return false;
    return true;
}

// Shape guard: the map's blocks must be the condition set's marked points
// followed by jet blocks, in order.
inline void check_block_layout(const EvalMapData& em, const LocalConditionSet& cond) {
    require(em.blocks.size() >= cond.y_points.size(), ErrKind::verification,
            "evaluation map has fewer blocks than marked points");
    for (std::size_t i = 0; i < em.blocks.size(); ++i) {
        bool want_value = i < cond.y_points.size();
        require(em.blocks[i].is_value == want_value, ErrKind::verification,
                "evaluation-map block order does not match the condition set");
    }
}

// --- exact counting ----------------------------------------------------------------

struct DensityCount {
    std::string mode;  // "exhaustive" | "fiber"
    Int domain = 1;    // number of forms in the slice
    Int hits = 0;
    Rat fraction = 0;
};

// Walk every element of the slice (p^{domain_dim_p} candidates) and count the
// allowed targets.  Partitioned by coefficient-vector prefix across workers;
// within a worker the target is updated incrementally: advancing a base-p
// odometer at digit k adds the sum of rows 0..k, because -(p-1) = 1 mod p.
// When exclude_zero is set, the zero form is not counted even if its (all-zero)
// target is admitted: it cuts out the whole space, not a hypersurface.
inline DensityCount density_exhaustive(const EvalMapData& em, const LocalConditionSet& cond,
                                       int cap_bits = 22, int workers = worker_count(),
                                       bool exclude_zero = false) {
    check_block_layout(em, cond);
    DensityCount out;
    out.mode = "exhaustive";
    out.domain = em.domain_size();
    require(out.domain <= Int(1) << cap_bits, ErrKind::budget,
            "exhaustive sweep needs " + out.domain.str() + " candidates (cap 2^" +
                std::to_string(cap_bits) + "); raise the exhaustive cap or switch modes");
    std::uint64_t total = out.domain.convert_to<std::uint64_t>();

    FpOps fp{em.p};
    std::vector<std::vector<std::uint32_t>> delta;  // delta[k] = rows[0] + ... + rows[k]
    std::vector<std::uint32_t> acc(em.total_width_p, 0);
    for (int k = 0; k < em.domain_dim_p; ++k) {
        for (int j = 0; j < em.total_width_p; ++j) acc[j] = fp.add(acc[j], em.rows[k][j]);
        delta.push_back(acc);
    }

    int chunks = workers;
    if ((std::uint64_t)chunks > total) chunks = (int)total;
    if (chunks < 1) chunks = 1;
    std::vector<std::uint64_t> chunk_hits((std::size_t)chunks, 0);
    run_chunked(total, workers, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> digits(em.domain_dim_p, 0);
        std::uint64_t idx = begin;
        for (int k = 0; k < em.domain_dim_p && idx; ++k) {
            digits[k] = (std::uint32_t)(idx % em.p);
            idx /= em.p;
        }
        std::vector<std::uint32_t> cur = apply_eval_map(em, digits);
        std::uint64_t h = 0;
        for (std::uint64_t step = begin; step < end; ++step) {
            if (step != begin) {
                int k = 0;
                while (digits[k] == em.p - 1) {
                    digits[k] = 0;
                    ++k;
                }
                ++digits[k];
                for (int j = 0; j < em.total_width_p; ++j) cur[j] = fp.add(cur[j], delta[k][j]);
            }
            if (target_allowed(em, cond, cur)) ++h;
        }
        chunk_hits[chunk] = h;
    });
    std::uint64_t hits = 0;
    for (auto h : chunk_hits) hits += h;
    out.hits = hits;
    if (exclude_zero && target_allowed(em, cond, std::vector<std::uint32_t>(em.total_width_p, 0)))
        out.hits -= 1;
    out.fraction = Rat(out.hits, out.domain);
    return out;
}

// Count through the map's fibers: every image vector has exactly #kernel
// preimages, so hits = #kernel x #(allowed targets in the image).  When the
// map is surjective the intersection has the closed form
// #T x prod over jet blocks (module size - 1); otherwise the image (p^rank
// vectors, budget-capped) is enumerated.
inline DensityCount density_fiber(const EvalMapData& em, const LocalConditionSet& cond,
                                  int image_cap_bits = 22, bool exclude_zero = false) {
    check_block_layout(em, cond);
    DensityCount out;
    out.mode = "fiber";
    out.domain = em.domain_size();
    Int allowed_in_image = 0;
    if (em.surjective) {
        allowed_in_image = cond.t_size;
        for (std::size_t bi = cond.y_points.size(); bi < em.blocks.size(); ++bi)
            allowed_in_image *= em.blocks[bi].jet.cardinality - 1;
    } else {
        std::uint64_t count = 0;
        for_each_image_vector(em, std::uint64_t{1} << image_cap_bits,
                              [&](const std::vector<std::uint32_t>& v) {
                                  if (target_allowed(em, cond, v)) ++count;
                              });
        allowed_in_image = count;
    }
    out.hits = em.kernel_size() * allowed_in_image;
    if (exclude_zero && target_allowed(em, cond, std::vector<std::uint32_t>(em.total_width_p, 0)))
        out.hits -= 1;
    out.fraction = Rat(out.hits, out.domain);
    return out;
}

// --- the truncated degree-by-degree product ----------------------------------------

struct DegreeFactors {
    int g = 0;
    long long n_uv = 0;                // closed points of U - V of degree g
    std::map<int, long long> n_ve;     // stratum e -> closed points of degree g
};

struct TruncatedFormula {
    int r = 0;
    int m = 0;
    Rat prefactor = 1;
    Rat value = 1;
    bool top_stratum_hit = false;  // a top-stratum point below the cutoff forces zero
    std::vector<DegreeFactors> rows;
};

// Exact value of
//   (#T / q^{sum deg y}) x prod over P in (U-V), deg < r, of (1 - q^{-(m+1) deg P})
//                        x prod over e, P in V_e, deg < r, of (1 - q^{-(m-e) deg P}).
// Marked points are excluded from U.  The e = m factors are zero, so one
// top-stratum point below the cutoff makes the whole value zero.
inline TruncatedFormula truncated_density_formula(FieldTower& tw, const LocalConditionSet& cond,
                                                  const SchemeDesc& U, const StratumTable& V,
                                                  int r, const EnumOptions& base_opts = {}) {
    require(r >= 1, ErrKind::config, "truncation cutoff must be at least 1");
    require(V.B >= r - 1, ErrKind::config,
            "stratification horizon " + std::to_string(V.B) +
                " is below the product cutoff; restratify with B >= " + std::to_string(r - 1));
    require(V.m == U.dim(), ErrKind::config, "stratum table belongs to a different ambient");
    TruncatedFormula tf;
    tf.r = r;
    tf.m = U.dim();
    tf.prefactor = cond.prefactor();
    tf.value = tf.prefactor;

    EnumOptions opts = base_opts;
    opts.excluded = &cond.y_points;
    std::map<int, long long> n_u;
    if (r > 1)
        for (const auto& P : closed_points(tw, U, r - 1, opts)) n_u[P.degree] += 1;

    for (int g = 1; g < r; ++g) {
        DegreeFactors row;
        row.g = g;
        long long on_v = 0;
        for (const auto& [e, by_deg] : V.closed_counts) {
            auto it = by_deg.find(g);
            if (it == by_deg.end()) continue;
            row.n_ve[e] = it->second;
            on_v += it->second;
        }
        row.n_uv = (n_u.count(g) ? n_u[g] : 0) - on_v;
        require(row.n_uv >= 0, ErrKind::verification,
                "more stratum points than ambient points at degree " + std::to_string(g));

        Int qg = int_pow(Int(tw.q()), (std::uint64_t)g);
        if (row.n_uv > 0) {
            Int qs = int_pow(qg, (std::uint64_t)(tf.m + 1));
            Rat factor(qs - 1, qs);  // 1 - q^{-(m+1)g}
            for (long long i = 0; i < row.n_uv; ++i) tf.value *= factor;
        }
        for (const auto& [e, cnt] : row.n_ve) {
            if (e == tf.m) {
                tf.top_stratum_hit = true;
                tf.value = 0;
                continue;
            }
            Int qs = int_pow(qg, (std::uint64_t)(tf.m - e));
            Rat factor(qs - 1, qs);  // 1 - q^{-(m-e)g}
            for (long long i = 0; i < cnt; ++i) tf.value *= factor;
        }
        tf.rows.push_back(std::move(row));
    }
    return tf;
}

// --- theorem-case classification -----------------------------------------------------

struct CaseInfo {
    bool positive_case = true;  // the density limit is a positive product
    std::vector<std::string> reasons;  // witnesses for the zero case
    std::string note;                  // classification caveat, when applicable

    std::string label() const { return positive_case ? "i" : "ii"; }
};

// The dichotomy: the limit density is positive exactly when every stratum of
// local embedding dimension e < m has (estimated) dimension < m - e and the
// top stratum (e = m) is empty; otherwise the limit is zero, either because a
// zeta factor diverges or because a top-stratum point contributes a factor
// 1 - q^0 = 0.
inline CaseInfo classify_theorem_case(const StratumTable& V) {
    CaseInfo ci;
    for (const auto& [e, dim] : V.dim_est) {
        if (e >= V.m) continue;
        if (e + dim >= V.m) {
            ci.positive_case = false;
            ci.reasons.push_back(
                "stratum with local embedding dimension " + std::to_string(e) +
                " has estimated dimension " + std::to_string(dim) + ", so " +
                std::to_string(e) + " + " + std::to_string(dim) + " >= m = " +
                std::to_string(V.m) + " and its factor product diverges to zero" +
                (V.dim_overridden.count(e) && V.dim_overridden.at(e)
                     ? " (dimension supplied by the configuration)"
                     : " (dimension estimated from point counts)"));
        }
    }
    if (V.v_top_nonempty()) {
        ci.positive_case = false;
        ci.reasons.push_back(
            "the top stratum is nonempty: at a point where the subscheme's local embedding "
            "dimension equals dim U = " +
            std::to_string(V.m) +
            ", every section through the subscheme has zero jet, contributing a factor 1 - q^0 "
            "= 0");
        ci.note =
            "classification note: a nonempty top stratum is treated as the zero-density case, "
            "matching the zero factor above; the opposite reading (nonempty top stratum in the "
            "positive case) would contradict that factor and is not used";
    }
    return ci;
}

// --- the limit prediction with a convergence bracket ---------------------------------

struct PredictedDensity {
    CaseInfo kase;
    int R = 1;
    Rat value_R = 0;                // truncated product at r = R (upper member)
    Rat value_R1 = 0;               // at r = R + 1 (closer to the limit)
    Rat zeta_path = 0;              // prefactor x zeta_V / (zeta_U x prod zeta_{V_e})
    std::optional<Rat> exact_limit; // closed form, when U is a full projective
                                    // space minus the marked points and V = empty
    StratumTable strata;
    std::vector<std::string> notes;
};

// The limit of the truncated product, reported as partial products at cutoffs
// R and R+1 plus the equal-by-construction zeta-quotient form
//   prefactor x zeta_V(m+1) / (zeta_U(m+1) x prod_{e<m} zeta_{V_e}(m-e))
// evaluated as partial products over degrees < R.  For the zero case the
// prediction is exactly 0 with the witnessing reasons.
inline PredictedDensity predicted_density(FieldTower& tw, const LocalConditionSet& cond,
                                          const SchemeDesc& U, const std::vector<HomPoly>& z_gens,
                                          int R, const EnumOptions& base_opts = {}) {
    require(R >= 1, ErrKind::config, "prediction cutoff must be at least 1");
    PredictedDensity pd;
    pd.R = R;
    EnumOptions opts = base_opts;
    opts.excluded = &cond.y_points;
    pd.strata = stratify(tw, z_gens, U, R, opts);
    pd.kase = classify_theorem_case(pd.strata);

    pd.value_R = truncated_density_formula(tw, cond, U, pd.strata, R, base_opts).value;
    pd.value_R1 = truncated_density_formula(tw, cond, U, pd.strata, R + 1, base_opts).value;

    if (!pd.kase.positive_case) {
        pd.zeta_path = 0;
        pd.notes.push_back("limit density is exactly 0; the truncated products above only bound "
                           "the rate of decay");
        return pd;
    }

    int m = U.dim();
    std::map<int, long long> u_counts, v_counts;
    if (R > 1)
        for (const auto& P : closed_points(tw, U, R - 1, opts)) u_counts[P.degree] += 1;
    for (const auto& [e, by_deg] : pd.strata.closed_counts)
        for (const auto& [g, c] : by_deg)
            if (g < R) v_counts[g] += c;

    ZetaData z_u = zeta_from_closed_counts(tw, m + 1, R, u_counts, U.n);
    ZetaData z_v = zeta_from_closed_counts(tw, m + 1, R, v_counts, U.n);
    Rat denom = z_u.value;
    for (const auto& [e, by_deg] : pd.strata.closed_counts) {
        if (e >= m) continue;
        std::map<int, long long> ve;
        for (const auto& [g, c] : by_deg)
            if (g < R) ve[g] = c;
        denom *= zeta_from_closed_counts(tw, m - e, R, ve, U.n).value;
    }
    pd.zeta_path = cond.prefactor() * z_v.value / denom;
    require(pd.zeta_path == pd.value_R, ErrKind::verification,
            "the zeta-quotient partial product and the degree-by-degree product disagree at "
            "cutoff " +
                std::to_string(R));

    if (z_gens.empty() && U.closed_eqs.empty() && U.removed_eqs.empty()) {
        // zeta of P^n in closed form: 1/zeta(s) = prod_{i=0..n} (1 - q^{i-s});
        // removing the marked points divides their factors back out
        int s = m + 1;
        Rat lim = cond.prefactor();
        for (int i = 0; i <= U.n; ++i) {
            Int qs = int_pow(Int(tw.q()), (std::uint64_t)(s - i));
            lim *= Rat(qs - 1, qs);
        }
        for (const auto& y : cond.y_points) {
            Int qs = int_pow(Int(tw.q()), (std::uint64_t)s * y.degree);
            lim /= Rat(qs - 1, qs);
        }
        pd.exact_limit = lim;
        require(pd.value_R1 >= lim, ErrKind::verification,
                "truncated product fell below the closed-form limit");
    }
    return pd;
}

// --- Monte Carlo sampling --------------------------------------------------------------

struct SampledDensity {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    std::uint64_t seed = 0;
    Rat fraction = 0;
    double point = 0, ci_low = 0, ci_high = 0;  // Wilson 95% interval
};

// Uniform samples from the slice (independent uniform prime-field digits
// against the basis), counted through the evaluation map.  Per-trial RNG
// streams are keyed by (seed, d, trial), so the result is identical for any
// worker count.
inline SampledDensity sampled_density(const EvalMapData& em, const LocalConditionSet& cond,
                                      std::uint64_t trials, std::uint64_t seed,
                                      int workers = worker_count()) {
    check_block_layout(em, cond);
    require(trials > 0, ErrKind::config, "sampling needs at least one trial");
    SampledDensity sd;
    sd.trials = trials;
    sd.seed = seed;

    int chunks = workers;
    if ((std::uint64_t)chunks > trials) chunks = (int)trials;
    if (chunks < 1) chunks = 1;
    std::vector<std::uint64_t> chunk_hits((std::size_t)chunks, 0);
    run_chunked(trials, workers, [&](int chunk, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> digits(em.domain_dim_p);
        std::uint64_t h = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            RngStream rng(seed, (std::uint64_t)em.d, t);
            for (auto& x : digits) x = (std::uint32_t)rng.below(em.p);
            if (target_allowed(em, cond, apply_eval_map(em, digits))) ++h;
        }
        chunk_hits[chunk] = h;
    });
    for (auto h : chunk_hits) sd.hits += h;
    sd.fraction = Rat(sd.hits, sd.trials);

    double n = (double)sd.trials, x = (double)sd.hits, z = 1.96;
    double phat = x / n;
    double center = (phat + z * z / (2 * n)) / (1 + z * z / n);
    double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    sd.point = phat;
    sd.ci_low = std::max(0.0, center - half);
    sd.ci_high = std::min(1.0, center + half);
    return sd;
}

// --- medium-degree tail bound ------------------------------------------------------------

struct TailBound {
    int r = 0;      // bound covers singular points of degree >= r ...
    int g_cap = 0;  // ... up to floor((d - c)/(m+1)); -1 when d < c
    int g_hi = 0;   // last exactly-summed degree: min(G, g_cap)
    bool empty_range = false;
    Rat medium = 0;         // exact sum of observed counts times q-powers
    Rat extrapolation = 0;  // informal geometric estimate for (g_hi, g_cap]
    bool extrapolated = false;
    std::string high_note;
};

// Upper bound for the fraction of forms with a singular point in the medium
// degree range [r, (d-c)/(m+1)]:
//   sum_e sum_g #V_e(F_{q^g}) q^{-(m-e)g}  +  sum_g #(U-V)(F_{q^g}) q^{-(m+1)g},
// using exact observed rational-point counts for g <= G; the remaining medium
// degrees, if any, get a geometric extrapolation of each family's last term
// (reported separately, not a bound).  Degrees beyond the medium range are
// controlled only asymptotically in d and are out of scope here.
inline TailBound tail_bound(FieldTower& tw, const LocalConditionSet& cond, const SchemeDesc& U,
                            const StratumTable& V, int r, int d, int c, int G,
                            const EnumOptions& base_opts = {}) {
    require(r >= 1, ErrKind::config, "tail range must start at degree >= 1");
    int m = U.dim();
    TailBound tb;
    tb.r = r;
    tb.g_cap = d >= c ? (d - c) / (m + 1) : -1;
    tb.high_note =
        "singular points of degree above floor((d-c)/(m+1)) = " + std::to_string(tb.g_cap) +
        " are not bounded by this tool (their density vanishes only asymptotically in d)";
    if (tb.g_cap < r) {
        tb.empty_range = true;
        return tb;
    }
    require(G >= r, ErrKind::budget,
            "count horizon " + std::to_string(G) + " is below the tail range start " +
                std::to_string(r) + "; raise the horizon");
    require(V.B >= std::min(G, tb.g_cap), ErrKind::config,
            "stratification horizon is below the tail summation range");
    tb.g_hi = std::min(G, tb.g_cap);

    EnumOptions opts = base_opts;
    opts.excluded = &cond.y_points;
    std::map<int, long long> u_closed;
    for (const auto& P : closed_points(tw, U, tb.g_hi, opts)) u_closed[P.degree] += 1;
    auto n_u = [&](int g) {
        long long n = 0;
        for (const auto& [j, cnt] : u_closed)
            if (g % j == 0) n += (long long)j * cnt;
        return n;
    };
    auto n_v = [&](int g) {
        long long n = 0;
        for (const auto& [e, _] : V.closed_counts) n += V.rational_count(e, g);
        return n;
    };

    std::map<int, Rat> last_term;  // family id -> last exact term (for extrapolation)
    std::map<int, Rat> ratio;      // family id -> estimated per-degree decay q^{dim - s}
    const int FAM_UV = -1;
    for (int g = r; g <= tb.g_hi; ++g) {
        long long uv = n_u(g) - n_v(g);
        require(uv >= 0, ErrKind::verification,
                "more subscheme points than ambient points over the degree-" + std::to_string(g) +
                    " extension");
        Int qg = int_pow(Int(tw.q()), (std::uint64_t)g);
        if (uv > 0) {
            Rat term = Rat(uv) / Rat(int_pow(qg, (std::uint64_t)(m + 1)));
            tb.medium += term;
            if (g == tb.g_hi) last_term[FAM_UV] = term;
        }
        for (const auto& [e, _] : V.closed_counts) {
            long long nv = V.rational_count(e, g);
            if (nv <= 0) continue;
            Rat term = Rat(nv) / Rat(int_pow(qg, (std::uint64_t)(m - e)));
            tb.medium += term;
            if (g == tb.g_hi) last_term[e] = term;
        }
    }

    if (tb.g_hi < tb.g_cap) {
        // informal continuation: counts grow like q^{g dim}, so each family's
        // term scales by about q^{dim - s} per degree
        ratio[FAM_UV] = Rat(1, Int(tw.q()));  // dim(U - V) = m against exponent m + 1
        for (const auto& [e, dim] : V.dim_est) {
            int s = m - e;
            if (dim >= s)
                ratio[e] = int_pow(Int(tw.q()), (std::uint64_t)(dim - s));
            else
                ratio[e] = Rat(1, int_pow(Int(tw.q()), (std::uint64_t)(s - dim)));
        }
        for (const auto& [fam, term] : last_term) {
            Rat rho = ratio.count(fam) ? ratio[fam] : Rat(1, Int(tw.q()));
            Rat acc = term;
            for (int g = tb.g_hi + 1; g <= tb.g_cap; ++g) {
                acc *= rho;
                tb.extrapolation += acc;
            }
        }
        tb.extrapolated = true;
    }
    return tb;
}

// --- certified search for one smooth section ----------------------------------------------

enum class FindOrder { lex, random };

struct FindWitness {
    ClosedPoint P;
    bool is_marked = false;                  // marked point (value) vs jet point
    std::vector<std::uint64_t> coord_ranks;  // kappa-coordinates of the block
    int witness_coord = -1;  // first nonzero coordinate (0 = value, i = direction i)
};

struct FindResult {
    bool found = false;
    int d = 0;
    std::uint64_t tried = 0;
    std::vector<std::uint32_t> digits;
    HomPoly f;
    std::vector<FindWitness> witnesses;
    int horizon_B = 0;  // smoothness certified at degrees <= horizon_B only
};

// First slice element (in deterministic digit order, or seeded random order)
// whose target is admitted: prescribed values at the marked points, nonzero
// jet at every checked point.  The certificate records every checked point
// with its nonvanishing coordinate.  Smoothness beyond the horizon is NOT
// checked.
inline FindResult find_smooth(FieldTower& tw, const IdealSlice& slice, const EvalMapData& em,
                              const LocalConditionSet& cond, FindOrder order,
                              std::uint64_t limit, std::uint64_t seed, int horizon_B) {
    check_block_layout(em, cond);
    FindResult fr;
    fr.d = em.d;
    fr.horizon_B = horizon_B;

    std::vector<std::uint32_t> digits(em.domain_dim_p, 0);
    std::vector<std::uint32_t> target(em.total_width_p, 0);
    std::uint64_t limit_eff = limit;
    if (order == FindOrder::lex) {
        Int total = em.domain_size();
        if (Int(limit) > total) limit_eff = total.convert_to<std::uint64_t>();
    }

    FpOps fp{em.p};
    std::vector<std::vector<std::uint32_t>> delta;
    if (order == FindOrder::lex) {
        std::vector<std::uint32_t> acc(em.total_width_p, 0);
        for (int k = 0; k < em.domain_dim_p; ++k) {
            for (int j = 0; j < em.total_width_p; ++j) acc[j] = fp.add(acc[j], em.rows[k][j]);
            delta.push_back(acc);
        }
    }

    for (std::uint64_t t = 0; t < limit_eff; ++t) {
        if (order == FindOrder::lex) {
            if (t) {
                int k = 0;
                while (digits[k] == em.p - 1) {
                    digits[k] = 0;
                    ++k;
                }
                ++digits[k];
                for (int j = 0; j < em.total_width_p; ++j)
                    target[j] = fp.add(target[j], delta[k][j]);
            }
        } else {
            RngStream rng(seed, (std::uint64_t)em.d, t);
            for (auto& x : digits) x = (std::uint32_t)rng.below(em.p);
            target = apply_eval_map(em, digits);
        }
        if (!target_allowed(em, cond, target)) continue;
        fr.found = true;
        fr.tried = t + 1;
        fr.digits = digits;
        fr.f = slice_element(tw, slice, digits);
        for (std::size_t bi = 0; bi < em.blocks.size(); ++bi) {
            const TargetBlock& blk = em.blocks[bi];
            FindWitness w;
            w.P = blk.P;
            w.is_marked = blk.is_value;
            for (int cc = 0; cc < blk.kappa_coords; ++cc) {
                std::uint64_t rk = detail::block_coord_rank(em, blk, cc, target);
                w.coord_ranks.push_back(rk);
                if (w.witness_coord < 0 && rk) w.witness_coord = cc;
            }
            fr.witnesses.push_back(std::move(w));
        }
        return fr;
    }
    fr.tried = limit_eff;
    return fr;
}

// --- complete-check horizon for plane instances --------------------------------------------

// Horizon up to which checking point smoothness decides smoothness outright:
// on the projective line a repeated factor of a degree-d form has degree at
// most floor(d/2); on the projective plane a form with finitely many singular
// points has them in the intersection of two partials, of total degree
// (d-1)^2.  Requires the whole line or plane with no subscheme and no marked
// points, where those bounds are the classical ones.
inline int exact_full_horizon(const SchemeDesc& U, const std::vector<HomPoly>& z_gens,
                              const LocalConditionSet& cond, int d) {
    require(z_gens.empty() && U.closed_eqs.empty() && U.removed_eqs.empty() &&
                cond.y_points.empty() && (U.n == 1 || U.n == 2),
            ErrKind::config,
            "complete certification needs the whole projective line or plane, with no subscheme "
            "and no marked points");
    require(d >= 0, ErrKind::config, "degree must be nonnegative");
    if (U.n == 1) return d / 2;
    return d >= 1 ? (d - 1) * (d - 1) : 1;
}

}  // namespace bsieve
