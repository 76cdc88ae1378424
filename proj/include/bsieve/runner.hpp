#pragma once

// Command layer.  Each command builds the live instance from a parsed config,
// runs the matching module operations, and produces a RunReport holding a
// machine table (CSV, fixed filename per command), human summary lines, and
// warnings.  Warnings always name the mathematical requirement or design
// decision they relate to.  Errors propagate as SieveError; the process exit
// code is derived from the kind (config/hypothesis 2, budget 3, verification
// 4).  A failed verify run sets checks_failed instead of throwing so the full
// report is still emitted; findings of the crossing check are results, not
// failures.

#include "bsieve/config.hpp"
#include "bsieve/density.hpp"
#include "bsieve/geom.hpp"
#include "bsieve/gf.hpp"
#include "bsieve/linalg.hpp"
#include "bsieve/mpoly.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace bsieve {

inline int exit_code_for(ErrKind k) {
    switch (k) {
        case ErrKind::config:
        case ErrKind::hypothesis: return 2;
        case ErrKind::budget: return 3;
        case ErrKind::verification: return 4;
    }
    return 2;
}

struct RunReport {
    std::string command;
    std::string csv_name;  // fixed per command: "<command>.csv"
    std::string csv;       // header + rows
    std::vector<std::string> summary;   // printed to stdout, echoed in report.txt
    std::vector<std::string> warnings;  // each names the requirement it concerns
    std::uint64_t digest = 0;           // FNV-1a of the raw config text
    std::string config_text;            // raw echo: re-runnable as-is
    bool checks_failed = false;         // verify only: some check line FAILed
};

namespace rdetail {

inline std::string fmt_g(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

inline std::string int_str(const Int& v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

inline std::string plural(long long n, const std::string& word) {
    return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

// exact form when it fits on a summary line, decimal otherwise (the exact
// value is always in the CSV/report)
inline std::string short_rat(const Rat& v) {
    std::string s = rat_str(v);
    return s.size() <= 24 ? s : ("~" + fmt_g(rat_double(v)));
}

inline std::string rat_with_float(const Rat& v) {
    std::string s = rat_str(v);
    return s.size() <= 24 ? (s + " = " + fmt_g(rat_double(v))) : ("~" + fmt_g(rat_double(v)));
}

// Stratify V = Z ∩ X at horizon B (marked points removed) and apply the
// config's declared stratum dimensions, warning about each replacement.
inline StratumTable strata_with_overrides(Instance& inst, const ExperimentConfig& cfg, int B,
                                          std::vector<std::string>& warnings) {
    EnumOptions opts = inst.opts;
    opts.excluded = &inst.cond.y_points;
    StratumTable st = stratify(inst.tw, inst.z_gens, inst.U, B, opts);
    for (const auto& [e, v] : cfg.z_dim_override) {
        if (!st.stratum_nonempty(e)) {
            warnings.push_back("declared dimension for stratum e=" + std::to_string(e) +
                               " ignored: the stratum has no points of degree <= " +
                               std::to_string(B));
            continue;
        }
        warnings.push_back("stratum e=" + std::to_string(e) + ": using the declared dimension " +
                           std::to_string(v) + " in place of the point-count growth estimate " +
                           std::to_string(st.dim_est[e]) +
                           " (the estimate is a heuristic; the dichotomy below depends on it)");
        st.dim_est[e] = v;
        st.dim_overridden[e] = true;
    }
    return st;
}

inline int stab_window(const Instance& inst, int d_hi) {
    if (inst.z_gens.empty()) return 1;
    int g = 0;
    for (const auto& f : inst.z_gens) g = std::max(g, f.d);
    return std::max(g + 1, d_hi);
}

inline void add_case_warnings(const CaseInfo& kase, std::vector<std::string>& warnings) {
    for (const auto& r : kase.reasons) warnings.push_back(r);
    if (!kase.note.empty()) warnings.push_back(kase.note);
}

const char* const comparability_caveat =
    "fractions are taken inside the space of degree-d forms through the prescribed subscheme; "
    "runs with different subschemes or marked points use different form spaces and are not "
    "directly comparable";

}  // namespace rdetail

// --- individual commands -------------------------------------------------------------

inline void cmd_points(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    int B = cfg.run.r - 1;
    EnumOptions opts = inst.opts;
    opts.excluded = &inst.cond.y_points;
    std::ostringstream csv;
    csv << "degree,point\n";
    std::map<int, long long> by_deg;
    if (B >= 1) {
        auto pts = closed_points(inst.tw, inst.U, B, opts);
        for (const auto& P : pts) {
            by_deg[P.degree] += 1;
            csv << P.degree << "," << point_str(inst.tw, P) << "\n";
        }
    }
    long long total = 0;
    for (int g = 1; g <= B; ++g) {
        long long n = by_deg.count(g) ? by_deg[g] : 0;
        total += n;
        rep.summary.push_back("degree " + std::to_string(g) + ": " +
                              rdetail::plural(n, "closed point"));
    }
    rep.summary.push_back("total: " + rdetail::plural(total, "closed point") +
                          " of the scheme (marked points removed) through degree " +
                          std::to_string(B));
    rep.csv = csv.str();
}

inline void cmd_strata(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    int B = cfg.run.horizon;
    StratumTable st = rdetail::strata_with_overrides(inst, cfg, B, rep.warnings);
    std::ostringstream csv;
    csv << "e,degree,closed_points,dim_est,dim_declared\n";
    if (inst.z_gens.empty()) {
        rep.summary.push_back("the prescribed subscheme is empty: no strata");
    } else if (st.closed_counts.empty()) {
        rep.summary.push_back("no subscheme points of degree <= " + std::to_string(B) + " found");
    }
    for (const auto& [e, hist] : st.closed_counts) {
        long long tot = 0;
        for (const auto& [g, c] : hist) {
            csv << e << "," << g << "," << c << "," << st.dim_est[e] << ","
                << (st.dim_overridden[e] ? "yes" : "no") << "\n";
            tot += c;
        }
        rep.summary.push_back(
            "stratum e=" + std::to_string(e) + ": " + rdetail::plural(tot, "closed point") +
            " through degree " + std::to_string(B) + ", dimension " +
            (st.dim_overridden.at(e) ? "declared " : "estimated ") + std::to_string(st.dim_est[e]));
    }
    CaseInfo kase = classify_theorem_case(st);
    rep.summary.push_back("limit-density dichotomy: case " + kase.label() +
                          (kase.positive_case ? " (positive product)" : " (the limit vanishes)"));
    rdetail::add_case_warnings(kase, rep.warnings);
    rep.csv = csv.str();
}

inline void cmd_zeta(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    int s = inst.U.dim() + 1;
    int R = cfg.run.zeta_cutoff;
    EnumOptions opts = inst.opts;
    opts.excluded = &inst.cond.y_points;
    ZetaData zd = zeta_partial(inst.tw, inst.U, s, R, opts);
    std::ostringstream csv;
    csv << "g,rational_points,closed_points\n";
    for (int g = 1; g < R; ++g)
        csv << g << "," << zd.N[g - 1] << ","
            << (g - 1 < (int)zd.c.size() ? zd.c[g - 1] : 0) << "\n";
    rep.summary.push_back("zeta partial product over closed points of degree < " +
                          std::to_string(R) + " at s = dim + 1 = " + std::to_string(s) + ": " +
                          rat_str(zd.value) + " = " + rdetail::fmt_g(rat_double(zd.value)));
    rep.summary.push_back("point-count growth estimate of the dimension: " +
                          std::to_string(zd.dim_est));
    if (zd.at_or_below_pole)
        rep.warnings.push_back(
            "s is at or below the point-count growth rate, where the Euler product does not "
            "converge; the partial value is reported but has no limit meaning");
    rep.csv = csv.str();
}

inline void cmd_cstab(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    int window = rdetail::stab_window(inst, cfg.run.d_hi);
    StabilizationData sd = stabilization_c(inst.tw, inst.z_gens, cfg.n, window);
    std::ostringstream csv;
    csv << "d,slice_dim,linear_multiples_fill_next\n";
    for (int d = 0; d <= sd.d_max; ++d)
        csv << d << "," << sd.dims[d] << ","
            << (d < sd.d_max ? (sd.matches[d] ? "yes" : "no") : "-") << "\n";
    rep.summary.push_back("stabilization constant c = " + std::to_string(sd.c) +
                          " (window checked through degree " + std::to_string(sd.d_max) + ")");
    rep.summary.push_back(
        "from degree c on, linear forms times the degree-d slice span the degree-(d+1) slice");
    rep.csv = csv.str();
}

// Shared by density/verify/find: the evaluation map of degree d with value
// blocks at the marked points and jet blocks at `sing`.
inline EvalMapData build_eval_map(Instance& inst, int d, const std::vector<ClosedPoint>& sing) {
    IdealSlice slice = ideal_slice(inst.tw, inst.z_gens, inst.U.n, d);
    return eval_map(inst.tw, slice, inst.cond.y_points, sing, inst.U, inst.z_gens);
}

inline std::vector<ClosedPoint> low_degree_points(Instance& inst, int B) {
    if (B < 1) return {};
    EnumOptions opts = inst.opts;
    opts.excluded = &inst.cond.y_points;
    return closed_points(inst.tw, inst.U, B, opts);
}

inline void cmd_density(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    const RunParams& rp = cfg.run;
    const std::string& mode = rp.density_mode;
    int B_strata = std::max(rp.horizon, rp.r - 1);
    StratumTable st = rdetail::strata_with_overrides(inst, cfg, B_strata, rep.warnings);
    CaseInfo kase = classify_theorem_case(st);
    rdetail::add_case_warnings(kase, rep.warnings);

    TruncatedFormula tf = truncated_density_formula(inst.tw, inst.cond, inst.U, st, rp.r, inst.opts);
    PredictedDensity pd = predicted_density(inst.tw, inst.cond, inst.U, inst.z_gens,
                                            rp.zeta_cutoff, inst.opts);
    for (const auto& n : pd.notes) rep.warnings.push_back(n);
    Rat prediction = pd.exact_limit ? *pd.exact_limit : pd.zeta_path;
    StabilizationData sd = stabilization_c(inst.tw, inst.z_gens, cfg.n, rdetail::stab_window(inst, rp.d_hi));

    std::vector<ClosedPoint> sing = low_degree_points(inst, rp.r - 1);

    std::ostringstream csv;
    csv << "d,mode,trials,hits,fraction_num,fraction_den,fraction_float,ci_low,ci_high,"
           "truncated_formula,prediction,tail_bound,case,horizon_B,seed\n";

    bool warned_onto = false, warned_extrap = false, warned_high = false;
    for (int d = rp.d_lo; d <= rp.d_hi; ++d) {
        int horizon_B = rp.r - 1;
        EvalMapData em;
        bool exclude_zero = false;
        if (mode == "exact-full") {
            horizon_B = exact_full_horizon(inst.U, inst.z_gens, inst.cond, d);
            em = build_eval_map(inst, d, low_degree_points(inst, horizon_B));
            exclude_zero = true;
        } else {
            em = build_eval_map(inst, d, sing);
        }

        int threshold = sd.c + em.target_dim_q;
        if (d < threshold && !warned_onto && mode != "exact-full") {
            rep.warnings.push_back(
                "at degree d=" + std::to_string(d) + " the evaluation map has rank " +
                std::to_string(em.rank) + " of " + std::to_string(em.target_dim_p) +
                "; being onto needs d >= c + t (here c=" + std::to_string(sd.c) +
                ", t=" + std::to_string(em.target_dim_q) +
                "), so exact counts may differ from the truncated product");
            warned_onto = true;
        }

        TailBound tb = tail_bound(inst.tw, inst.cond, inst.U, st, rp.r, d, sd.c, rp.horizon,
                                  inst.opts);
        if (tb.extrapolated && !warned_extrap) {
            rep.warnings.push_back(
                "tail degrees beyond the observed horizon were continued geometrically (ratio "
                "q^{dim - exponent} per family); that continuation is an estimate, not a bound");
            warned_extrap = true;
        }
        if (!tb.high_note.empty() && !warned_high) {
            rep.warnings.push_back(tb.high_note);
            warned_high = true;
        }
        Rat tail = tb.medium + tb.extrapolation;

        long long trials = 0;
        std::string hits_s, num_s, den_s;
        Rat fraction;
        double point = 0, ci_lo = 0, ci_hi = 0;
        std::uint64_t seed = rp.seed;
        if (mode == "sampled") {
            SampledDensity sda = sampled_density(em, inst.cond, (std::uint64_t)rp.trials, rp.seed,
                                                 inst.opts.workers);
            trials = (long long)sda.trials;
            hits_s = std::to_string(sda.hits);
            num_s = hits_s;
            den_s = std::to_string(trials);
            fraction = sda.fraction;
            point = sda.point;
            ci_lo = sda.ci_low;
            ci_hi = sda.ci_high;
        } else {
            DensityCount dc;
            if (mode == "exhaustive")
                dc = density_exhaustive(em, inst.cond, rp.exhaustive_cap, inst.opts.workers);
            else  // fiber and exact-full both count through the image walk
                dc = density_fiber(em, inst.cond, rp.exhaustive_cap, exclude_zero);
            hits_s = rdetail::int_str(dc.hits);
            num_s = hits_s;  // the fraction columns stay unreduced: hits over domain
            den_s = rdetail::int_str(dc.domain);
            fraction = dc.fraction;
            point = rat_double(fraction);
            ci_lo = ci_hi = point;
        }

        csv << d << "," << mode << "," << trials << "," << hits_s << "," << num_s << "," << den_s
            << "," << rdetail::fmt_g(point) << "," << rdetail::fmt_g(ci_lo) << ","
            << rdetail::fmt_g(ci_hi) << "," << rdetail::fmt_g(rat_double(tf.value)) << ","
            << rdetail::fmt_g(rat_double(prediction)) << "," << rdetail::fmt_g(rat_double(tail))
            << "," << kase.label() << "," << horizon_B << "," << seed << "\n";

        std::string frac_s = (mode == "sampled")
                                 ? hits_s + "/" + std::to_string(trials) + " ~ " +
                                       rdetail::fmt_g(point) + " [" + rdetail::fmt_g(ci_lo) +
                                       ", " + rdetail::fmt_g(ci_hi) + "]"
                                 : rat_str(fraction) + " = " + rdetail::fmt_g(point);
        rep.summary.push_back("d=" + std::to_string(d) + " " + mode + ": " + frac_s +
                              " | cutoff product " + rdetail::short_rat(tf.value) +
                              " | prediction " + rdetail::short_rat(prediction) + " | tail <= " +
                              rdetail::short_rat(tail) + " | case " + kase.label());
    }
    rep.warnings.push_back(rdetail::comparability_caveat);
    rep.csv = csv.str();
}

inline void cmd_predict(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    PredictedDensity pd = predicted_density(inst.tw, inst.cond, inst.U, inst.z_gens,
                                            cfg.run.zeta_cutoff, inst.opts);
    rdetail::add_case_warnings(pd.kase, rep.warnings);
    for (const auto& n : pd.notes) rep.warnings.push_back(n);

    std::ostringstream csv;
    csv << "R,case,value_R,value_R1,zeta_path,exact_limit\n";
    csv << pd.R << "," << pd.kase.label() << "," << rat_str(pd.value_R) << ","
        << rat_str(pd.value_R1) << "," << rat_str(pd.zeta_path) << ","
        << (pd.exact_limit ? rat_str(*pd.exact_limit) : "") << "\n";

    rep.summary.push_back("limit-density dichotomy: case " + pd.kase.label());
    if (!pd.kase.positive_case) {
        rep.summary.push_back("predicted density: 0 (the limit vanishes)");
    } else {
        rep.summary.push_back("truncated product at cutoff " + std::to_string(pd.R) + ": " +
                              rdetail::rat_with_float(pd.value_R));
        rep.summary.push_back("truncated product at cutoff " + std::to_string(pd.R + 1) + ": " +
                              rdetail::rat_with_float(pd.value_R1));
        rep.summary.push_back("zeta-quotient form of the same product: " +
                              rdetail::short_rat(pd.zeta_path));
        if (pd.exact_limit)
            rep.summary.push_back("predicted density (exact): " + rat_str(*pd.exact_limit));
        else
            rep.summary.push_back(
                "predicted density: between the truncated products above (decreasing in the "
                "cutoff); no closed form for this instance");
    }
    rep.warnings.push_back(rdetail::comparability_caveat);
    rep.csv = csv.str();
}

inline void cmd_verify(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    const RunParams& rp = cfg.run;
    bool all_ok = true;
    auto line = [&](bool ok, const std::string& what) {
        rep.summary.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
        if (!ok) all_ok = false;
    };

    // 1: the evaluation map is onto from the threshold degree on
    StabilizationData sd = stabilization_c(inst.tw, inst.z_gens, cfg.n,
                                           rdetail::stab_window(inst, rp.d_hi));
    std::vector<ClosedPoint> sing = low_degree_points(inst, rp.r - 1);
    bool any_at_threshold = false;
    for (int d = rp.d_lo; d <= rp.d_hi; ++d) {
        EvalMapData em = build_eval_map(inst, d, sing);
        int threshold = sd.c + em.target_dim_q;
        if (d >= threshold) {
            any_at_threshold = true;
            line(em.surjective, "onto at d=" + std::to_string(d) + " (rank " +
                                    std::to_string(em.rank) + "/" +
                                    std::to_string(em.target_dim_p) + ", threshold c+t=" +
                                    std::to_string(threshold) + ")");
        } else {
            rep.summary.push_back("     d=" + std::to_string(d) + " below the onto threshold c+t=" +
                                  std::to_string(threshold) + ": rank " + std::to_string(em.rank) +
                                  "/" + std::to_string(em.target_dim_p) + ", nothing required");
        }
    }
    if (!any_at_threshold)
        rep.warnings.push_back(
            "the degree window contains no d >= c + t, so the onto check had nothing to verify; "
            "widen [run] d or lower the target dimension");

    // 2: jet spaces at every enumerated point have the lawful size
    {
        EnumOptions opts = inst.opts;
        opts.excluded = &inst.cond.y_points;
        auto pts = closed_points(inst.tw, inst.U, rp.horizon, opts);
        long long checked = 0;
        bool ok = true;
        std::string detail;
        for (const auto& P : pts) {
            try {
                // lawful size, recomputed from the scheme data rather than
                // from the jet module itself
                int law = inst.U.dim() + 1;
                if (!inst.z_gens.empty() && lies_on(inst.tw, inst.z_gens, P))
                    law = inst.U.dim() - embedding_dimension(inst.tw, inst.z_gens, inst.U, P);
                Int expect = int_pow(Int(inst.tw.q()), (std::uint64_t)P.degree * law);
                JetSpace js = jet_space(inst.tw, P, inst.U, inst.z_gens);
                if (js.cardinality != expect) {
                    ok = false;
                    detail = " (wrong cardinality at " + point_str(inst.tw, P) + ")";
                    break;
                }
                ++checked;
            } catch (const SieveError& e) {
                if (e.kind != ErrKind::verification) throw;
                ok = false;
                detail = std::string(" (") + e.what() + ")";
                break;
            }
        }
        line(ok, "jet dimension and cardinality law at " + rdetail::plural(checked, "point") +
                     " through degree " + std::to_string(rp.horizon) + detail);
    }

    // 3: the two exact counting methods and the cutoff product agree
    {
        int B_strata = std::max(rp.horizon, rp.r - 1);
        StratumTable st = rdetail::strata_with_overrides(inst, cfg, B_strata, rep.warnings);
        TruncatedFormula tf =
            truncated_density_formula(inst.tw, inst.cond, inst.U, st, rp.r, inst.opts);
        for (int d = rp.d_lo; d <= rp.d_hi; ++d) {
            EvalMapData em = build_eval_map(inst, d, sing);
            DensityCount fib;
            try {
                fib = density_fiber(em, inst.cond, rp.exhaustive_cap);
            } catch (const SieveError& e) {
                if (e.kind != ErrKind::budget) throw;
                rep.summary.push_back("     exact agreement at d=" + std::to_string(d) +
                                      ": skipped, image walk exceeds the exhaustive cap");
                continue;
            }
            bool have_exh = em.domain_dim_p <= rp.exhaustive_cap;
            if (have_exh) {
                DensityCount exh =
                    density_exhaustive(em, inst.cond, rp.exhaustive_cap, inst.opts.workers);
                line(exh.fraction == fib.fraction && exh.hits == fib.hits,
                     "exhaustive sweep equals kernel-fiber count at d=" + std::to_string(d) +
                         " (" + rat_str(fib.fraction) + ")");
            }
            if (em.surjective)
                line(fib.fraction == tf.value, "exact fraction equals the cutoff product at d=" +
                                                   std::to_string(d) + " (" + rat_str(tf.value) +
                                                   ")");
            else
                rep.summary.push_back("     cutoff-product comparison at d=" + std::to_string(d) +
                                      ": skipped, the evaluation map is not onto at this degree");
        }
    }

    std::ostringstream csv;
    csv << "check,result\n";
    for (const auto& s : rep.summary)
        if (s.rfind("PASS ", 0) == 0 || s.rfind("FAIL ", 0) == 0)
            csv << "\"" << s.substr(5) << "\"," << s.substr(0, 4) << "\n";
    rep.csv = csv.str();
    rep.checks_failed = !all_ok;
    rep.summary.push_back(all_ok ? "verify: all checks PASS" : "verify: some checks FAILED");
}

inline void cmd_find(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    const RunParams& rp = cfg.run;
    int d = rp.d_hi;
    IdealSlice slice = ideal_slice(inst.tw, inst.z_gens, inst.U.n, d);
    std::vector<ClosedPoint> sing = low_degree_points(inst, rp.horizon);
    EvalMapData em = eval_map(inst.tw, slice, inst.cond.y_points, sing, inst.U, inst.z_gens);
    FindOrder order = rp.find_order == "lex" ? FindOrder::lex : FindOrder::random;
    FindResult fr = find_smooth(inst.tw, slice, em, inst.cond, order, (std::uint64_t)rp.find_limit,
                                rp.seed, rp.horizon);

    std::ostringstream csv;
    csv << "d,found,tried,order,f,horizon_B,seed\n";
    csv << d << "," << (fr.found ? "yes" : "no") << "," << fr.tried << "," << rp.find_order << ","
        << (fr.found ? to_string(inst.tw, fr.f) : "") << "," << fr.horizon_B << "," << rp.seed
        << "\n";

    if (fr.found) {
        rep.summary.push_back("degree-" + std::to_string(d) + " section found after " +
                              rdetail::plural((long long)fr.tried, "candidate") + ": f = " +
                              to_string(inst.tw, fr.f));
        for (const auto& w : fr.witnesses) {
            std::string kind = w.is_marked ? "prescribed value satisfied" : "nonzero jet";
            std::string coord = w.is_marked
                                    ? ""
                                    : (w.witness_coord == 0
                                           ? " (the value is nonzero)"
                                           : " (direction " + std::to_string(w.witness_coord - 1) +
                                                 " of the gradient is nonzero)");
            rep.summary.push_back("  at " + point_str(inst.tw, w.P) + ": " + kind + coord);
        }
        rep.summary.push_back("smoothness is certified at closed points of degree <= " +
                              std::to_string(fr.horizon_B) + " only");
    } else {
        rep.summary.push_back("no admissible section among the first " +
                              rdetail::plural((long long)fr.tried, "candidate") + " at degree " +
                              std::to_string(d));
    }
    rep.csv = csv.str();
}

inline void cmd_snc(const ExperimentConfig& cfg, Instance& inst, RunReport& rep) {
    require(!inst.components.empty(), ErrKind::config,
            "the crossing check needs [snc] l= and at least one [component] block");
    EnumOptions opts = inst.opts;
    opts.excluded = &inst.cond.y_points;
    SncReport sr = snc_bound_check(inst.tw, inst.components, inst.U, cfg.snc_l, cfg.run.horizon,
                                   opts);
    std::ostringstream csv;
    csv << "kind,point,degree,k,e,bound,dim_est,expected,ok\n";
    for (const auto& row : sr.rows) {
        csv << "point," << point_str(inst.tw, row.P) << "," << row.P.degree << ","
            << row.on_components << "," << row.e << "," << row.bound << ",,,"
            << (row.ok ? "yes" : "no") << "\n";
        if (!row.ok)
            rep.summary.push_back("VIOLATION at " + point_str(inst.tw, row.P) + ": local embedding "
                                  "dimension " + std::to_string(row.e) + " exceeds l + k - 1 = " +
                                  std::to_string(row.bound) + " (k = " +
                                  std::to_string(row.on_components) + " components)");
    }
    for (const auto& cr : sr.codim) {
        csv << "codim,,,," << cr.k << ",,," << cr.dim_est << "," << cr.expected << ","
            << (cr.ok ? "yes" : "no") << "\n";
        rep.summary.push_back("points on >= " + std::to_string(cr.k) + " components: estimated "
                              "dimension " + std::to_string(cr.dim_est) + ", crossing shape wants " +
                              std::to_string(cr.expected) + (cr.ok ? " (ok)" : " (VIOLATION)"));
    }
    rep.summary.push_back(std::string("embedding-dimension bound e <= l + k - 1: ") +
                          (sr.bound_ok ? "holds at every checked point" : "VIOLATED"));
    rep.summary.push_back(std::string("k-fold-intersection dimensions: ") +
                          (sr.codim_ok ? "consistent with crossings" : "NOT crossing-like"));
    rep.summary.push_back("checked " + rdetail::plural((long long)sr.rows.size(), "closed point") +
                          " of the component union through degree " + std::to_string(sr.B));
    if (!sr.bound_ok || !sr.codim_ok)
        rep.warnings.push_back(
            "a crossing-shape requirement failed; violations are findings of this check, the "
            "command itself still succeeds");
    rep.csv = csv.str();
}

// --- dispatch -------------------------------------------------------------------------

inline RunReport run_command(const ExperimentConfig& cfg, const std::string& command) {
    RunReport rep;
    rep.command = command;
    rep.csv_name = command + ".csv";
    rep.digest = cfg.digest;
    rep.config_text = cfg.text.empty() ? serialize_config(cfg) : cfg.text;

    Instance inst = build_instance(cfg);
    if (command == "points") cmd_points(cfg, inst, rep);
    else if (command == "strata") cmd_strata(cfg, inst, rep);
    else if (command == "zeta") cmd_zeta(cfg, inst, rep);
    else if (command == "c-stab") cmd_cstab(cfg, inst, rep);
    else if (command == "verify") cmd_verify(cfg, inst, rep);
    else if (command == "density") cmd_density(cfg, inst, rep);
    else if (command == "predict") cmd_predict(cfg, inst, rep);
    else if (command == "find") cmd_find(cfg, inst, rep);
    else if (command == "snc-check") cmd_snc(cfg, inst, rep);
    else
        fail(ErrKind::config, "unknown command \"" + command +
                                  "\"; expected points|strata|zeta|c-stab|verify|density|"
                                  "predict|find|snc-check");
    return rep;
}

// Assembled report text: summary, warnings, then the re-runnable config echo.
inline std::string report_text(const RunReport& rep) {
    std::ostringstream o;
    o << "bertini-sieve " << rep.command << " report\n";
    o << "config digest: " << hex64(rep.digest) << "\n\n";
    for (const auto& s : rep.summary) o << s << "\n";
    o << "\nwarnings:\n";
    if (rep.warnings.empty()) o << "  (none)\n";
    for (const auto& w : rep.warnings) o << "  - " << w << "\n";
    o << "\n---- config echo (save and re-run with this file) ----\n" << rep.config_text;
    return o.str();
}

// Gnuplot script for density.csv (emitted only on request; CSV stays the only
// machine output produced by default).
inline std::string gnuplot_script() {
    return "# gnuplot script for density.csv\n"
           "set datafile separator ','\n"
           "set key autotitle columnhead\n"
           "set xlabel 'degree d'\n"
           "set ylabel 'fraction of admissible sections'\n"
           "plot 'density.csv' using 1:7 with linespoints title 'measured', \\\n"
           "     'density.csv' using 1:10 with linespoints title 'cutoff product', \\\n"
           "     'density.csv' using 1:11 with lines title 'prediction'\n";
}

// Write <command>.csv and report.txt under out_dir (created if needed).
inline void write_report(const RunReport& rep, const std::string& out_dir,
                         bool with_gnuplot = false) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(fs::path(out_dir) / rep.csv_name, std::ios::binary);
        require(f.good(), ErrKind::config, "cannot write " + rep.csv_name + " under " + out_dir);
        f << rep.csv;
    }
    {
        std::ofstream f(fs::path(out_dir) / "report.txt", std::ios::binary);
        require(f.good(), ErrKind::config, "cannot write report.txt under " + out_dir);
        f << report_text(rep);
    }
    if (with_gnuplot) {
        std::ofstream f(fs::path(out_dir) / "density.gp", std::ios::binary);
        f << gnuplot_script();
    }
}

}  // namespace bsieve
