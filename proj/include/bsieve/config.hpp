#pragma once

// Experiment definition: a line-oriented config format ("[section] key=value"),
// a strict parser with positioned diagnostics, a canonical serializer, and a
// builder that turns a parsed config into live field/scheme/condition objects.
//
// Grammar (one directive per line; '#' starts a comment outside quotes):
//   file   := line*
//   line   := header pair* | pair*
//   header := '[' section-name ']'
//   pair   := key '=' value
//   value  := '"' any-char-but-quote* '"' | bare-token-without-whitespace
// Pairs bind to the most recent header.  Section and key names are a fixed
// vocabulary; unknown names are errors, as is repeating a scalar key.  The
// keys eq=, removed=, gen=, point= and vector= accumulate, and every
// [component] header opens a fresh generator list.
//
// Sections:
//   [field]     p, a, level_budget          base field F_{p^a} and tower cap
//   [ambient]   n                           ambient projective space P^n
//   [x]         eq, removed, dim            the scheme whose sections are cut
//   [y]         point                       marked points "(r0:r1:...)@level"
//   [z]         gen, dim_override.E         forms all sections must contain
//   [t]         mode, vector                allowed value tuples at [y] points
//   [run]       d, r, horizon, trials, seed, zeta_cutoff, exhaustive_cap,
//               enum_budget, density_mode, find_limit, find_order
//   [snc]       l                           crossing-check component dimension
//   [component] gen                         one irreducible piece per header

#include "bsieve/common.hpp"
#include "bsieve/density.hpp"
#include "bsieve/geom.hpp"
#include "bsieve/gf.hpp"
#include "bsieve/mpoly.hpp"

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace bsieve {

struct RunParams {
    int d_lo = 2;
    int d_hi = 2;
    int r = 1;                     // smoothness is checked at points of degree < r
    int horizon = 2;               // B: enumeration horizon for strata and tails
    long long trials = 1024;       // Monte Carlo sample count
    std::uint64_t seed = 1;
    int zeta_cutoff = 6;           // R: truncation degree for zeta quotients
    int exhaustive_cap = 22;       // log2 size cap for exhaustive sweeps
    std::uint64_t enum_budget = 1ull << 26;   // point-enumeration size cap
    std::string density_mode = "exhaustive";  // sampled|exhaustive|fiber|exact-full
    long long find_limit = 4096;   // candidates examined by the find command
    std::string find_order = "lex";  // lex | random
};

inline bool operator==(const RunParams& x, const RunParams& y) {
    auto t = [](const RunParams& r) {
        return std::tie(r.d_lo, r.d_hi, r.r, r.horizon, r.trials, r.seed, r.zeta_cutoff,
                        r.exhaustive_cap, r.enum_budget, r.density_mode, r.find_limit,
                        r.find_order);
    };
    return t(x) == t(y);
}

struct ExperimentConfig {
    int p = 2;
    int a = 1;
    std::uint64_t level_budget = 1ull << 22;
    int n = 1;
    std::vector<std::string> x_eqs;
    std::vector<std::string> x_removed;
    std::optional<int> x_dim;
    std::vector<std::string> z_gens;
    std::map<int, int> z_dim_override;  // stratum e -> declared dimension
    std::vector<std::string> y_points;  // "(r0:r1:...)@level", coordinate ranks
    std::string t_mode = "full";
    std::vector<std::vector<std::uint64_t>> t_vectors;
    RunParams run;
    int snc_l = -1;  // common component dimension for the crossing check; -1 = unset
    std::vector<std::vector<std::string>> components;

    std::string text;         // the raw text this config was parsed from
    std::uint64_t digest = 0; // FNV-1a of `text`
};

// Semantic equality: everything except the raw text and its digest.
inline bool operator==(const ExperimentConfig& x, const ExperimentConfig& y) {
    auto t = [](const ExperimentConfig& c) {
        return std::tie(c.p, c.a, c.level_budget, c.n, c.x_eqs, c.x_removed, c.x_dim, c.z_gens,
                        c.z_dim_override, c.y_points, c.t_mode, c.t_vectors, c.run, c.snc_l,
                        c.components);
    };
    return t(x) == t(y);
}

struct ParseIssue {
    int line = 0;  // 1-based; 0 = whole-config problem
    std::string msg;
};

struct ConfigParse {
    ExperimentConfig cfg;
    std::vector<ParseIssue> issues;
    bool ok() const { return issues.empty(); }
};

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
    return s;
}

namespace detail {

inline bool to_u64(const std::string& s, std::uint64_t& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e && !s.empty();
}

inline bool to_ll(const std::string& s, long long& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e && !s.empty();
}

inline bool to_int(const std::string& s, int& v) {
    long long w = 0;
    if (!to_ll(s, w) || w < -(1ll << 31) || w > (1ll << 31) - 1) return false;
    v = static_cast<int>(w);
    return true;
}

// "LO..HI" or a single "N" (meaning N..N)
inline bool to_range(const std::string& s, int& lo, int& hi) {
    auto pos = s.find("..");
    if (pos == std::string::npos) {
        if (!to_int(s, lo)) return false;
        hi = lo;
        return true;
    }
    return to_int(s.substr(0, pos), lo) && to_int(s.substr(pos + 2), hi);
}

// "v0,v1,...,vk" -> ranks
inline bool to_tuple(const std::string& s, std::vector<std::uint64_t>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        std::string part = s.substr(start, comma == std::string::npos ? comma : comma - start);
        std::uint64_t v = 0;
        if (!to_u64(part, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) return true;
        start = comma + 1;
    }
}

}  // namespace detail

// Parse "(r0:r1:...)@level" into a validated closed point: ranks are read at
// the named tower level, the representative is normalized, and the orbit size
// must equal the level.
inline ClosedPoint point_from_text(FieldTower& tw, const std::string& s, int nv) {
    auto bad = [&](const std::string& why) {
        fail(ErrKind::config, "point \"" + s + "\": " + why);
    };
    auto at = s.rfind('@');
    if (s.size() < 4 || s.front() != '(' || at == std::string::npos || at < 2 || s[at - 1] != ')')
        bad("expected the shape (r0:r1:...)@level");
    int level = 0;
    if (!detail::to_int(s.substr(at + 1), level) || level < 1)
        bad("the level after '@' must be a positive integer");
    tw.ensure_level(level);
    Int bound = tw.field_size(level);
    std::vector<FieldElement> coords;
    std::string inner = s.substr(1, at - 2);
    std::size_t start = 0;
    while (true) {
        auto colon = inner.find(':', start);
        std::string part = inner.substr(start, colon == std::string::npos ? colon : colon - start);
        std::uint64_t r = 0;
        if (!detail::to_u64(part, r)) bad("coordinate \"" + part + "\" is not a nonnegative integer");
        if (Int(r) >= bound)
            bad("coordinate rank " + std::to_string(r) + " exceeds the level-" +
                std::to_string(level) + " field size");
        coords.push_back(tw.from_rank(level, r));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (static_cast<int>(coords.size()) != nv)
        bad("has " + std::to_string(coords.size()) + " coordinates, ambient space needs " +
            std::to_string(nv));
    return make_closed_point(tw, std::move(coords), level);
}

// The live objects a command operates on, all built from one config.
struct Instance {
    FieldTower tw;
    SchemeDesc U;                     // the [x] block scheme
    std::vector<HomPoly> z_gens;      // the [z] block forms
    LocalConditionSet cond;           // marked points + allowed value tuples
    std::vector<std::vector<HomPoly>> components;  // [component] generator lists
    EnumOptions opts;                 // enum_budget + worker count from the run block

    explicit Instance(const ExperimentConfig& c)
        : tw(static_cast<std::uint32_t>(c.p), c.a, c.level_budget) {}
};

// Construct and cross-validate every object a run needs.  Throws SieveError
// (config or hypothesis kind) naming the offending entry.
inline Instance build_instance(const ExperimentConfig& cfg) {
    require(cfg.n >= 1, ErrKind::config, "[ambient] n must be at least 1");
    require(cfg.p >= 2, ErrKind::config, "[field] p must be a prime");
    Instance inst(cfg);
    const int nv = cfg.n + 1;

    inst.U.n = cfg.n;
    for (const auto& s : cfg.x_eqs) inst.U.closed_eqs.push_back(parse_form(inst.tw, s, nv));
    for (const auto& s : cfg.x_removed) inst.U.removed_eqs.push_back(parse_form(inst.tw, s, nv));
    if (cfg.x_dim) {
        require(*cfg.x_dim >= 0 && *cfg.x_dim <= cfg.n, ErrKind::config,
                "[x] dim must lie between 0 and the ambient dimension");
        inst.U.expected_dim = cfg.x_dim;
    }

    for (const auto& s : cfg.z_gens) inst.z_gens.push_back(parse_form(inst.tw, s, nv));
    for (const auto& [e, v] : cfg.z_dim_override) {
        require(e >= 0 && e <= cfg.n, ErrKind::config,
                "[z] dim_override stratum index must lie between 0 and the ambient dimension");
        require(v >= 0 && v <= inst.U.dim(), ErrKind::config,
                "[z] dim_override value must lie between 0 and the dimension of the scheme");
    }

    std::vector<ClosedPoint> ys;
    for (const auto& s : cfg.y_points) ys.push_back(point_from_text(inst.tw, s, nv));
    if (!inst.z_gens.empty())
        for (const auto& y : ys)
            require(!lies_on(inst.tw, inst.z_gens, y), ErrKind::hypothesis,
                    "marked point " + point_str(inst.tw, y) +
                        " lies on the subscheme cut out by the [z] generators; the marked "
                        "points and that subscheme must be disjoint (Y ∩ Z = ∅)");

    TMode mode = tmode_parse(cfg.t_mode);
    require(cfg.t_vectors.empty() || mode == TMode::explicit_list, ErrKind::config,
            "[t] vector= entries are only meaningful with mode=explicit-list");
    require(mode != TMode::explicit_list || !cfg.t_vectors.empty(), ErrKind::config,
            "[t] mode=explicit-list needs at least one vector= entry");
    inst.cond = make_conditions(inst.tw, std::move(ys), mode, cfg.t_vectors);

    require(cfg.components.empty() || cfg.snc_l >= 0, ErrKind::config,
            "[component] blocks need [snc] l= (the common component dimension)");
    require(cfg.snc_l < 0 || !cfg.components.empty(), ErrKind::config,
            "[snc] l= is set but there are no [component] blocks");
    for (const auto& comp : cfg.components) {
        require(!comp.empty(), ErrKind::config, "every [component] block needs a gen= entry");
        std::vector<HomPoly> gens;
        for (const auto& s : comp) gens.push_back(parse_form(inst.tw, s, nv));
        inst.components.push_back(std::move(gens));
    }

    const RunParams& r = cfg.run;
    require(r.d_lo >= 0 && r.d_hi >= r.d_lo, ErrKind::config,
            "[run] d range must satisfy 0 <= LO <= HI");
    require(r.r >= 1, ErrKind::config, "[run] r must be at least 1");
    require(r.horizon >= 1, ErrKind::config, "[run] horizon must be at least 1");
    require(r.trials >= 1, ErrKind::config, "[run] trials must be at least 1");
    require(r.zeta_cutoff >= 1, ErrKind::config, "[run] zeta_cutoff must be at least 1");
    require(r.exhaustive_cap >= 1 && r.exhaustive_cap <= 40, ErrKind::config,
            "[run] exhaustive_cap must be between 1 and 40 (bits)");
    require(r.enum_budget >= 2, ErrKind::config, "[run] enum_budget must be at least 2");
    require(r.density_mode == "sampled" || r.density_mode == "exhaustive" ||
                r.density_mode == "fiber" || r.density_mode == "exact-full",
            ErrKind::config,
            "[run] density_mode must be sampled, exhaustive, fiber, or exact-full");
    require(r.find_limit >= 1, ErrKind::config, "[run] find_limit must be at least 1");
    require(r.find_order == "lex" || r.find_order == "random", ErrKind::config,
            "[run] find_order must be lex or random");

    inst.opts.budget = r.enum_budget;
    inst.opts.workers = worker_count();
    return inst;
}

namespace detail {

struct ConfigLines {
    // remembered source line of each accumulating entry, for positioned issues
    std::vector<int> x_eq, x_rm, z_gen, y_pt, t_vec;
    std::vector<std::vector<int>> comp_gen;
};

inline void strip_comment(std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) {
            line.resize(i);
            return;
        }
    }
}

}  // namespace detail

// Total parse: always returns, collecting positioned syntax issues and (when
// the text is syntactically clean) semantic issues from object construction.
inline ConfigParse parse_config_checked(const std::string& text) {
    ConfigParse out;
    ExperimentConfig& cfg = out.cfg;
    detail::ConfigLines at;
    std::set<std::string> seen;  // "section.key" for scalar keys
    std::string section;
    bool t_mode_set = false;

    auto issue = [&](int line, const std::string& msg) { out.issues.push_back({line, msg}); };

    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        detail::strip_comment(line);
        std::size_t i = 0;
        auto skip_ws = [&] { while (i < line.size() && std::isspace((unsigned char)line[i])) ++i; };
        skip_ws();
        if (i >= line.size()) continue;

        if (line[i] == '[') {
            auto close = line.find(']', i);
            if (close == std::string::npos) {
                issue(ln, "unterminated section header");
                continue;
            }
            section = line.substr(i + 1, close - i - 1);
            static const std::set<std::string> known = {"field", "ambient", "x",   "y",  "z",
                                                        "t",     "run",     "snc", "component"};
            if (!known.count(section)) {
                issue(ln, "unknown section [" + section + "]");
                section.clear();
                continue;
            }
            if (section == "component") at.comp_gen.emplace_back(), cfg.components.emplace_back();
            i = close + 1;
        }

        // key=value pairs to end of line
        while (true) {
            skip_ws();
            if (i >= line.size()) break;
            std::size_t key_start = i;
            while (i < line.size() && (std::isalnum((unsigned char)line[i]) || line[i] == '_' ||
                                       line[i] == '.'))
                ++i;
            std::string key = line.substr(key_start, i - key_start);
            if (key.empty() || i >= line.size() || line[i] != '=') {
                issue(ln, "expected key=value, found \"" + line.substr(key_start) + "\"");
                break;
            }
            ++i;  // '='
            std::string value;
            if (i < line.size() && line[i] == '"') {
                auto close = line.find('"', i + 1);
                if (close == std::string::npos) {
                    issue(ln, "unterminated quoted value for key " + key);
                    break;
                }
                value = line.substr(i + 1, close - i - 1);
                i = close + 1;
            } else {
                std::size_t b = i;
                while (i < line.size() && !std::isspace((unsigned char)line[i])) ++i;
                value = line.substr(b, i - b);
                if (value.empty()) {
                    issue(ln, "empty value for key " + key);
                    break;
                }
            }
            if (section.empty()) {
                issue(ln, "key " + key + " appears before any section header");
                break;
            }

            auto scalar_once = [&]() {
                if (!seen.insert(section + "." + key).second) {
                    issue(ln, "duplicate key " + key + " in [" + section + "]");
                    return false;
                }
                return true;
            };
            auto want_int = [&](int& dst, auto pred, const std::string& what) {
                int v = 0;
                if (!detail::to_int(value, v) || !pred(v))
                    issue(ln, "[" + section + "] " + key + " " + what + ", got \"" + value + "\"");
                else if (scalar_once())
                    dst = v;
            };
            auto pos = [](int v) { return v >= 1; };
            auto nonneg = [](int v) { return v >= 0; };

            if (section == "field") {
                if (key == "p") want_int(cfg.p, [](int v) { return v >= 2; }, "must be >= 2");
                else if (key == "a") want_int(cfg.a, pos, "must be >= 1");
                else if (key == "level_budget") {
                    std::uint64_t v = 0;
                    if (!detail::to_u64(value, v) || v < 2)
                        issue(ln, "[field] level_budget must be an integer >= 2");
                    else if (scalar_once())
                        cfg.level_budget = v;
                } else issue(ln, "unknown key " + key + " in [field]");
            } else if (section == "ambient") {
                if (key == "n") want_int(cfg.n, pos, "must be >= 1");
                else issue(ln, "unknown key " + key + " in [ambient]");
            } else if (section == "x") {
                if (key == "eq") cfg.x_eqs.push_back(value), at.x_eq.push_back(ln);
                else if (key == "removed") cfg.x_removed.push_back(value), at.x_rm.push_back(ln);
                else if (key == "dim") {
                    int v = 0;
                    if (!detail::to_int(value, v) || v < 0)
                        issue(ln, "[x] dim must be a nonnegative integer");
                    else if (scalar_once())
                        cfg.x_dim = v;
                } else issue(ln, "unknown key " + key + " in [x]");
            } else if (section == "z") {
                if (key == "gen") cfg.z_gens.push_back(value), at.z_gen.push_back(ln);
                else if (key.rfind("dim_override.", 0) == 0) {
                    int e = 0, v = 0;
                    if (!detail::to_int(key.substr(13), e) || e < 0)
                        issue(ln, "[z] dim_override needs a stratum index, e.g. dim_override.1");
                    else if (!detail::to_int(value, v) || v < 0)
                        issue(ln, "[z] " + key + " must be a nonnegative integer");
                    else if (cfg.z_dim_override.count(e))
                        issue(ln, "duplicate " + key + " in [z]");
                    else
                        cfg.z_dim_override[e] = v;
                } else issue(ln, "unknown key " + key + " in [z]");
            } else if (section == "y") {
                if (key == "point") cfg.y_points.push_back(value), at.y_pt.push_back(ln);
                else issue(ln, "unknown key " + key + " in [y]");
            } else if (section == "t") {
                if (key == "mode") {
                    if (t_mode_set) issue(ln, "duplicate key mode in [t]");
                    else {
                        cfg.t_mode = value;
                        t_mode_set = true;
                    }
                } else if (key == "vector") {
                    std::vector<std::uint64_t> tup;
                    if (!detail::to_tuple(value, tup))
                        issue(ln, "[t] vector must be comma-separated nonnegative integers");
                    else {
                        cfg.t_vectors.push_back(std::move(tup));
                        at.t_vec.push_back(ln);
                    }
                } else issue(ln, "unknown key " + key + " in [t]");
            } else if (section == "run") {
                if (key == "d") {
                    int lo = 0, hi = 0;
                    if (!detail::to_range(value, lo, hi))
                        issue(ln, "[run] d must be LO..HI or a single degree");
                    else if (scalar_once()) {
                        cfg.run.d_lo = lo;
                        cfg.run.d_hi = hi;
                    }
                } else if (key == "r") want_int(cfg.run.r, pos, "must be >= 1");
                else if (key == "horizon") want_int(cfg.run.horizon, pos, "must be >= 1");
                else if (key == "trials") {
                    long long v = 0;
                    if (!detail::to_ll(value, v) || v < 1)
                        issue(ln, "[run] trials must be a positive integer");
                    else if (scalar_once())
                        cfg.run.trials = v;
                } else if (key == "seed") {
                    std::uint64_t v = 0;
                    if (!detail::to_u64(value, v)) issue(ln, "[run] seed must be a nonnegative integer");
                    else if (scalar_once())
                        cfg.run.seed = v;
                } else if (key == "zeta_cutoff") want_int(cfg.run.zeta_cutoff, pos, "must be >= 1");
                else if (key == "exhaustive_cap")
                    want_int(cfg.run.exhaustive_cap, pos, "must be >= 1");
                else if (key == "enum_budget") {
                    std::uint64_t v = 0;
                    if (!detail::to_u64(value, v) || v < 2)
                        issue(ln, "[run] enum_budget must be an integer >= 2");
                    else if (scalar_once())
                        cfg.run.enum_budget = v;
                } else if (key == "density_mode") {
                    if (scalar_once()) cfg.run.density_mode = value;
                } else if (key == "find_limit") {
                    long long v = 0;
                    if (!detail::to_ll(value, v) || v < 1)
                        issue(ln, "[run] find_limit must be a positive integer");
                    else if (scalar_once())
                        cfg.run.find_limit = v;
                } else if (key == "find_order") {
                    if (scalar_once()) cfg.run.find_order = value;
                } else issue(ln, "unknown key " + key + " in [run]");
            } else if (section == "snc") {
                if (key == "l") want_int(cfg.snc_l, nonneg, "must be >= 0");
                else issue(ln, "unknown key " + key + " in [snc]");
            } else if (section == "component") {
                if (key == "gen") {
                    cfg.components.back().push_back(value);
                    at.comp_gen.back().push_back(ln);
                } else issue(ln, "unknown key " + key + " in [component]");
            }
        }
    }

    cfg.text = text;
    cfg.digest = fnv1a64(text);
    if (!out.issues.empty()) return out;

    // Semantic pass: first each entry on its own (for positions), then the
    // full cross-validating build.
    try {
        FieldTower tw(static_cast<std::uint32_t>(cfg.p), cfg.a, cfg.level_budget);
        const int nv = cfg.n + 1;
        auto check_each = [&](const std::vector<std::string>& items, const std::vector<int>& lines,
                              auto&& fn) {
            for (std::size_t k = 0; k < items.size(); ++k) {
                try {
                    fn(items[k]);
                } catch (const SieveError& e) {
                    issue(lines[k], e.what());
                }
            }
        };
        auto poly = [&](const std::string& s) { parse_form(tw, s, nv); };
        check_each(cfg.x_eqs, at.x_eq, poly);
        check_each(cfg.x_removed, at.x_rm, poly);
        check_each(cfg.z_gens, at.z_gen, poly);
        check_each(cfg.y_points, at.y_pt, [&](const std::string& s) { point_from_text(tw, s, nv); });
        for (std::size_t c = 0; c < cfg.components.size(); ++c)
            check_each(cfg.components[c], at.comp_gen[c], poly);
    } catch (const SieveError& e) {
        issue(0, e.what());
    }
    if (!out.issues.empty()) return out;

    try {
        build_instance(cfg);
    } catch (const SieveError& e) {
        issue(0, e.what());
    }
    return out;
}

// Throwing convenience wrapper: returns the config or raises a config error
// whose message lists every positioned issue.
inline ExperimentConfig parse_config(const std::string& text) {
    ConfigParse p = parse_config_checked(text);
    if (p.ok()) return std::move(p.cfg);
    std::string msg;
    for (const auto& is : p.issues) {
        if (!msg.empty()) msg += "; ";
        if (is.line > 0) msg += "line " + std::to_string(is.line) + ": ";
        msg += is.msg;
    }
    fail(ErrKind::config, msg);
}

// Canonical text form; parse(serialize(c)) reconstructs a config equal to c.
inline std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "[field] p=" << c.p << " a=" << c.a << " level_budget=" << c.level_budget << "\n";
    o << "[ambient] n=" << c.n << "\n";
    if (!c.x_eqs.empty() || !c.x_removed.empty() || c.x_dim) {
        o << "[x]";
        if (c.x_dim) o << " dim=" << *c.x_dim;
        o << "\n";
        for (const auto& s : c.x_eqs) o << "eq=\"" << s << "\"\n";
        for (const auto& s : c.x_removed) o << "removed=\"" << s << "\"\n";
    }
    if (!c.z_gens.empty() || !c.z_dim_override.empty()) {
        o << "[z]\n";
        for (const auto& s : c.z_gens) o << "gen=\"" << s << "\"\n";
        for (const auto& [e, v] : c.z_dim_override) o << "dim_override." << e << "=" << v << "\n";
    }
    if (!c.y_points.empty()) {
        o << "[y]\n";
        for (const auto& s : c.y_points) o << "point=\"" << s << "\"\n";
    }
    o << "[t] mode=" << c.t_mode << "\n";
    for (const auto& t : c.t_vectors) {
        o << "vector=\"";
        for (std::size_t i = 0; i < t.size(); ++i) o << (i ? "," : "") << t[i];
        o << "\"\n";
    }
    const RunParams& r = c.run;
    o << "[run] d=" << r.d_lo << ".." << r.d_hi << " r=" << r.r << " horizon=" << r.horizon
      << " trials=" << r.trials << " seed=" << r.seed << " zeta_cutoff=" << r.zeta_cutoff
      << " exhaustive_cap=" << r.exhaustive_cap << " enum_budget=" << r.enum_budget
      << " density_mode=" << r.density_mode << " find_limit=" << r.find_limit
      << " find_order=" << r.find_order << "\n";
    if (c.snc_l >= 0) o << "[snc] l=" << c.snc_l << "\n";
    for (const auto& comp : c.components) {
        o << "[component]\n";
        for (const auto& s : comp) o << "gen=\"" << s << "\"\n";
    }
    return o.str();
}

}  // namespace bsieve
