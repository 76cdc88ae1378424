#pragma once

// Exact linear algebra over the tower: degree slices of a homogeneous ideal,
// the degree at which multiplying a slice by linear forms stops producing new
// dimensions, first-order local target spaces at closed points, and the joint
// evaluation map (values at marked points + jets at singularity-test points)
// with exact rank, kernel, and image data over the prime field.

#include "bsieve/common.hpp"
#include "bsieve/geom.hpp"
#include "bsieve/gf.hpp"
#include "bsieve/mpoly.hpp"
#include "bsieve/rowreduce.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bsieve {

// --- ideal degree slices --------------------------------------------------------

struct SliceProvenance {
    int gen_idx = -1;              // which generator (-1: plain monomial of the full space)
    std::uint64_t mono_rank = 0;   // rank of the multiplying monomial
};

struct IdealSlice {
    int nv = 0;  // variables x0..x_{nv-1}
    int d = 0;
    std::uint64_t ambient_dim = 0;  // total forms of degree d
    int dim = 0;
    bool full = false;              // no generators given: the slice is everything
    std::vector<HomPoly> basis;     // original monomial multiples, in discovery order
    std::vector<SliceProvenance> prov;
    RrefResult<TowerOps> row_space;  // reduced coefficient rows for membership tests

    Int count(const FieldTower& tw) const { return int_pow(Int(tw.q()), dim); }
};

// Degree-d slice of the ideal generated by `gens` inside the forms of degree d
// on P^n.  An empty generator list designates the empty subscheme (unit
// ideal): the slice is the full space of forms.
inline IdealSlice ideal_slice(FieldTower& tw, const std::vector<HomPoly>& gens, int n, int d) {
    require(d >= 0, ErrKind::config, "ideal_slice: degree must be nonnegative");
    IdealSlice sl;
    sl.nv = n + 1;
    sl.d = d;
    MonomialBasis amb(n + 1, d);
    sl.ambient_dim = amb.size();
    TowerOps ops{&tw, 1};

    if (gens.empty()) {
        sl.full = true;
        RowReducer<TowerOps> red(ops, (int)sl.ambient_dim);
        for (std::uint64_t r = 0; r < sl.ambient_dim; ++r) {
            HomPoly mono = hom_zero(tw, n + 1, d);
            mono.coeffs[r] = tw.one(1);
            red.add_row(mono.coeffs);
            sl.basis.push_back(std::move(mono));
            sl.prov.push_back({-1, r});
        }
        sl.dim = red.rank();
        sl.row_space = {red.rows, red.pivots, red.rank(), red.cols};
        return sl;
    }

    RowReducer<TowerOps> red(ops, (int)sl.ambient_dim);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const HomPoly& g = gens[gi];
        require(g.nv == n + 1, ErrKind::config, "generator has the wrong variable count");
        if (g.d > d) continue;
        MonomialBasis mul(n + 1, d - g.d);
        for (std::uint64_t mr = 0; mr < mul.size(); ++mr) {
            HomPoly prod = hom_mono_mul(tw, g, mul.unrank(mr));
            if (red.add_row(prod.coeffs)) {
                sl.basis.push_back(std::move(prod));
                sl.prov.push_back({(int)gi, mr});
            }
        }
    }
    sl.dim = red.rank();
    sl.row_space = {red.rows, red.pivots, red.rank(), red.cols};
    return sl;
}

// Membership test against a stored reduced row space.
inline bool slice_contains(FieldTower& tw, const IdealSlice& sl, const HomPoly& f) {
    require(f.nv == sl.nv && f.d == sl.d, ErrKind::config,
            "membership test against a slice of different shape");
    TowerOps ops{&tw, 1};
    std::vector<FieldElement> v = f.coeffs;
    for (int i = 0; i < sl.row_space.rank; ++i) {
        int p = sl.row_space.pivots[i];
        if (!v[p].is_zero()) {
            FieldElement s = v[p];
            for (std::uint64_t j = 0; j < sl.ambient_dim; ++j)
                v[j] = ops.sub(v[j], ops.mul(s, sl.row_space.reduced[i][j]));
        }
    }
    for (const auto& c : v)
        if (!c.is_zero()) return false;
    return true;
}

// --- multiplication stabilization -----------------------------------------------

struct StabilizationData {
    int c = 0;
    int d_max = 0;
    std::vector<int> dims;        // dim of the slice at degree 0..d_max
    std::vector<bool> matches;    // for d in [0, d_max): linear multiples of slice d fill slice d+1
};

// Least c such that for every c <= d < d_max, multiplying the degree-d slice
// by all linear forms spans the full degree-(d+1) slice.  The multiples always
// sit inside the larger slice, so dimension equality decides.  If the final
// window entry still grows, the window is too small to certify any c.
inline StabilizationData stabilization_c(FieldTower& tw, const std::vector<HomPoly>& gens, int n,
                                         int d_max) {
    int max_gen_deg = 0;
    for (const auto& g : gens) max_gen_deg = std::max(max_gen_deg, g.d);
    require(d_max >= max_gen_deg + 1, ErrKind::config,
            "stabilization window must extend beyond the largest generator degree");
    StabilizationData st;
    st.d_max = d_max;
    TowerOps ops{&tw, 1};

    std::vector<IdealSlice> slices;
    for (int d = 0; d <= d_max; ++d) slices.push_back(ideal_slice(tw, gens, n, d));
    for (const auto& sl : slices) st.dims.push_back(sl.dim);

    for (int d = 0; d < d_max; ++d) {
        MonomialBasis next(n + 1, d + 1);
        RowReducer<TowerOps> red(ops, (int)next.size());
        std::vector<int> xj(n + 1, 0);
        for (int j = 0; j <= n; ++j) {
            xj.assign(n + 1, 0);
            xj[j] = 1;
            for (const auto& b : slices[d].basis) red.add_row(hom_mono_mul(tw, b, xj).coeffs);
        }
        require(red.rank() <= slices[d + 1].dim, ErrKind::verification,
                "linear multiples of a slice escaped the next slice at degree " +
                    std::to_string(d));
        st.matches.push_back(red.rank() == slices[d + 1].dim);
    }

    int last_fail = -1;
    for (int d = 0; d < d_max; ++d)
        if (!st.matches[d]) last_fail = d;
    require(last_fail < d_max - 1, ErrKind::budget,
            "slice dimensions still growing at the window edge (degree " +
                std::to_string(d_max) + "); raise the stabilization window");
    st.c = last_fail + 1;
    return st;
}

// --- first-order local targets --------------------------------------------------

// The space of first-order germs the ideal cuts out at a closed point P of U:
// inside the ambient jet space kappa(P)^{1+m} (value, tangential derivatives),
// the ideal generates a submodule whose size obeys
//   q^{(m+1) deg P}   when P is off the subscheme's vanishing locus,
//   q^{(m-e) deg P}   when P lies on it with embedding dimension e,
// and that law is re-derived here from an independent rank computation.
struct JetSpace {
    ClosedPoint P;
    TangentSpace T;
    bool on_v = false;
    int e = -1;          // embedding dimension (only when on_v)
    int dim_kappa = 0;   // rank of the local target module over kappa(P)
    Int cardinality = 1;  // q^{dim_kappa * deg P}
    std::vector<std::vector<FieldElement>> module_basis;  // reduced rows, ambient jet coords
};

inline JetSpace jet_space(FieldTower& tw, const ClosedPoint& P, const SchemeDesc& U,
                          const std::vector<HomPoly>& z_gens) {
    JetSpace js;
    js.P = P;
    js.T = tangent_space(tw, U, P);
    int m = js.T.m;
    int dp = P.degree;
    TowerOps ops{&tw, dp};

    if (z_gens.empty()) {
        js.on_v = false;
        js.dim_kappa = m + 1;
        for (int i = 0; i <= m; ++i) {
            std::vector<FieldElement> row(m + 1, tw.zero(dp));
            row[i] = tw.one(dp);
            js.module_basis.push_back(std::move(row));
        }
        js.cardinality = int_pow(Int(tw.q()), (std::uint64_t)js.dim_kappa * dp);
        return js;
    }

    js.on_v = lies_on(tw, z_gens, P);
    int max_deg = 0;
    for (const auto& g : z_gens) max_deg = std::max(max_deg, g.d);
    IdealSlice sl = ideal_slice(tw, z_gens, U.n, max_deg);

    // first-order germs of the slice, then close up under multiplication by
    // functions: a germ with unit value lets arbitrary derivative directions in
    std::vector<std::vector<FieldElement>> rows;
    FieldElement unit_value = tw.zero(dp);
    for (const auto& b : sl.basis) {
        auto jet = jet_at(tw, b, P, js.T);
        if (unit_value.is_zero() && !jet[0].is_zero()) unit_value = jet[0];
        rows.push_back(std::move(jet));
    }
    if (!unit_value.is_zero()) {
        for (int j = 1; j <= m; ++j) {
            std::vector<FieldElement> row(m + 1, tw.zero(dp));
            row[j] = unit_value;
            rows.push_back(std::move(row));
        }
    }
    auto rr = rref(ops, rows, m + 1);
    js.dim_kappa = rr.rank;
    js.module_basis = rr.reduced;

    if (js.on_v) {
        js.e = embedding_dimension(tw, z_gens, U, P);
        require(js.dim_kappa == m - js.e, ErrKind::verification,
                "local target size law violated at " + point_str(tw, P) + ": ideal germs span " +
                    std::to_string(js.dim_kappa) + " directions but the cotangent rank predicts " +
                    std::to_string(m - js.e) +
                    " (the given generators may not generate the ideal locally)");
    } else {
        require(js.dim_kappa == m + 1, ErrKind::verification,
                "local target at a point off the vanishing locus is not the full jet space at " +
                    point_str(tw, P));
    }
    js.cardinality = int_pow(Int(tw.q()), (std::uint64_t)js.dim_kappa * dp);
    return js;
}

// --- the joint evaluation map ----------------------------------------------------

struct TargetBlock {
    bool is_value = false;  // value at a marked point (else: jet at a singularity-test point)
    ClosedPoint P;
    int kappa_coords = 1;   // flattened kappa(P)-coordinates in this block
    int offset_p = 0;       // starting column in the flattened prime-field row
    int width_p = 0;        // kappa_coords * a * deg P
    int target_dim_q = 0;   // constrained target dimension over F_q
    JetSpace jet;           // populated for jet blocks
};

struct EvalMapData {
    std::uint32_t p = 2;
    int a = 1;
    int d = 0;
    int domain_dim_q = 0;
    int domain_dim_p = 0;
    int total_width_p = 0;
    int target_dim_q = 0;  // sum over blocks
    int target_dim_p = 0;  // a * target_dim_q
    std::vector<TargetBlock> blocks;
    // one row per prime-field basis element of the slice: flattened block values
    std::vector<std::vector<std::uint32_t>> rows;
    RrefResult<FpOps> image;  // row-space reduction: a basis of the image
    int rank = 0;
    bool surjective = false;

    Int domain_size() const { return int_pow(Int(p), domain_dim_p); }
    Int kernel_size() const { return int_pow(Int(p), domain_dim_p - rank); }
    Int image_size() const { return int_pow(Int(p), rank); }
};

namespace detail {

inline void flatten_into(std::vector<std::uint32_t>& row, int offset,
                         const FieldElement& value, int expect_len) {
    require((int)value.c.size() == expect_len, ErrKind::verification,
            "flattened coordinate length mismatch");
    for (int i = 0; i < expect_len; ++i) row[offset + i] = value.c[i];
}

}  // namespace detail

// Build the linear map (over the prime field) sending an element of the slice
// to its values at the marked points followed by its first-order jets at the
// singularity-test points.  Marked points must avoid the subscheme's vanishing
// locus (the prescriptions live where the ideal is trivial).
inline EvalMapData eval_map(FieldTower& tw, const IdealSlice& slice,
                            const std::vector<ClosedPoint>& y_points,
                            const std::vector<ClosedPoint>& sing_points, const SchemeDesc& U,
                            const std::vector<HomPoly>& z_gens) {
    EvalMapData em;
    em.p = tw.p();
    em.a = tw.a();
    em.d = slice.d;
    em.domain_dim_q = slice.dim;
    em.domain_dim_p = em.a * slice.dim;

    for (const auto& y : y_points) {
        if (!z_gens.empty()) {
            bool off_z = false;
            for (const auto& g : z_gens)
                if (!evaluate(tw, g, y.rep, y.degree).is_zero()) {
                    off_z = true;
                    break;
                }
            require(off_z, ErrKind::hypothesis,
                    "marked point " + point_str(tw, y) +
                        " lies on the subscheme that hypersurfaces must contain; value "
                        "prescriptions require the marked points and the subscheme to be "
                        "disjoint");
        }
        TargetBlock b;
        b.is_value = true;
        b.P = y;
        b.kappa_coords = 1;
        b.offset_p = em.total_width_p;
        b.width_p = em.a * y.degree;
        b.target_dim_q = y.degree;
        em.total_width_p += b.width_p;
        em.target_dim_q += b.target_dim_q;
        em.blocks.push_back(std::move(b));
    }
    for (const auto& P : sing_points) {
        TargetBlock b;
        b.is_value = false;
        b.P = P;
        b.jet = jet_space(tw, P, U, z_gens);
        b.kappa_coords = 1 + b.jet.T.m;
        b.offset_p = em.total_width_p;
        b.width_p = b.kappa_coords * em.a * P.degree;
        b.target_dim_q = b.jet.dim_kappa * P.degree;
        em.total_width_p += b.width_p;
        em.target_dim_q += b.target_dim_q;
        em.blocks.push_back(std::move(b));
    }
    em.target_dim_p = em.a * em.target_dim_q;

    // kappa-valued block data per slice basis element, then scale through the
    // prime-field basis of F_q
    std::vector<FieldElement> base_scalars;  // powers of the F_q generator, embedded per level
    em.rows.reserve((std::size_t)em.domain_dim_p);
    for (int i = 0; i < slice.dim; ++i) {
        const HomPoly& bpoly = slice.basis[i];
        std::vector<std::vector<FieldElement>> block_vals(em.blocks.size());
        for (std::size_t bi = 0; bi < em.blocks.size(); ++bi) {
            const TargetBlock& blk = em.blocks[bi];
            if (blk.is_value)
                block_vals[bi] = {evaluate(tw, bpoly, blk.P.rep, blk.P.degree)};
            else
                block_vals[bi] = jet_at(tw, bpoly, blk.P, blk.jet.T);
        }
        for (int t = 0; t < em.a; ++t) {
            std::vector<std::uint32_t> row(em.total_width_p, 0);
            for (std::size_t bi = 0; bi < em.blocks.size(); ++bi) {
                const TargetBlock& blk = em.blocks[bi];
                int coord_len = em.a * blk.P.degree;
                FieldElement gt =
                    t ? tw.embed(tw.pow(tw.generator(1), t), blk.P.degree) : tw.one(blk.P.degree);
                for (int cc = 0; cc < blk.kappa_coords; ++cc) {
                    FieldElement v = t ? tw.mul(block_vals[bi][cc], gt) : block_vals[bi][cc];
                    detail::flatten_into(row, blk.offset_p + cc * coord_len, v, coord_len);
                }
            }
            em.rows.push_back(std::move(row));
        }
    }

    FpOps fp{em.p};
    em.image = rref(fp, em.rows, em.total_width_p);
    em.rank = em.image.rank;
    require(em.rank <= em.target_dim_p, ErrKind::verification,
            "evaluation image exceeds the constrained target dimension (" +
                std::to_string(em.rank) + " > " + std::to_string(em.target_dim_p) +
                "); the local target computation and the map disagree");
    em.surjective = em.rank == em.target_dim_p;
    return em;
}

// Walk every vector of the image (p^rank of them), calling fn(vec) for each.
// The walk is a ripple odometer over the image basis with incremental row
// updates; cost p^rank * total_width_p.  Guarded by a budget cap on p^rank.
template <class Fn>
void for_each_image_vector(const EvalMapData& em, std::uint64_t cap, Fn&& fn) {
    Int total = em.image_size();
    require(total <= Int(cap), ErrKind::budget,
            "image enumeration would need " + total.str() + " vectors (cap " +
                std::to_string(cap) + "); raise the exhaustive cap or use sampling");
    std::uint64_t n = total.convert_to<std::uint64_t>();
    std::vector<std::uint32_t> cur(em.total_width_p, 0);
    FpOps fp{em.p};
    // delta[k] = sum of basis rows 0..k: adding it realizes "increment digit k,
    // reset digits below" because -(p-1) = 1 mod p
    std::vector<std::vector<std::uint32_t>> delta;
    std::vector<std::uint32_t> acc(em.total_width_p, 0);
    for (int k = 0; k < em.rank; ++k) {
        for (int j = 0; j < em.total_width_p; ++j) acc[j] = fp.add(acc[j], em.image.reduced[k][j]);
        delta.push_back(acc);
    }
    std::vector<std::uint32_t> digits(em.rank, 0);
    fn(static_cast<const std::vector<std::uint32_t>&>(cur));
    for (std::uint64_t step = 1; step < n; ++step) {
        int k = 0;
        while (digits[k] == em.p - 1) {
            digits[k] = 0;
            ++k;
        }
        ++digits[k];
        for (int j = 0; j < em.total_width_p; ++j) cur[j] = fp.add(cur[j], delta[k][j]);
        fn(static_cast<const std::vector<std::uint32_t>&>(cur));
    }
}

// Image of a specific domain element given by prime-field digits against the
// slice basis (digit layout: a digits per slice basis element, low power of
// the F_q generator first).
inline std::vector<std::uint32_t> apply_eval_map(const EvalMapData& em,
                                                 const std::vector<std::uint32_t>& digits) {
    require((int)digits.size() == em.domain_dim_p, ErrKind::config,
            "domain digit count mismatch");
    FpOps fp{em.p};
    std::vector<std::uint32_t> out(em.total_width_p, 0);
    for (int i = 0; i < em.domain_dim_p; ++i) {
        std::uint32_t c = digits[i];
        if (!c) continue;
        for (int j = 0; j < em.total_width_p; ++j)
            out[j] = fp.add(out[j], fp.mul(c, em.rows[i][j]));
    }
    return out;
}

// Assemble the slice element with the given prime-field digits.
inline HomPoly slice_element(FieldTower& tw, const IdealSlice& slice,
                             const std::vector<std::uint32_t>& digits) {
    require((int)digits.size() == tw.a() * slice.dim, ErrKind::config,
            "domain digit count mismatch");
    HomPoly f = hom_zero(tw, slice.nv, slice.d);
    for (int i = 0; i < slice.dim; ++i) {
        FieldElement s = tw.zero(1);
        for (int t = 0; t < tw.a(); ++t) {
            std::uint32_t c = digits[(std::size_t)i * tw.a() + t];
            if (!c) continue;
            FieldElement term = tw.pow(tw.generator(1), t);
            term = tw.mul(term, tw.from_int(1, c));
            s = tw.add(s, term);
        }
        if (!s.is_zero()) f = hom_add(tw, f, hom_scale(tw, slice.basis[i], s));
    }
    return f;
}

}  // namespace bsieve
