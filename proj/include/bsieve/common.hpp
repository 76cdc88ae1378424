#pragma once

// Shared plumbing for the bertini-sieve library: error taxonomy, exact
// rational arithmetic, deterministic counter-based RNG streams, and a
// chunked worker helper whose merge order never depends on thread timing.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bsieve {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_pow(const Int& base, std::uint64_t e) {
    Int r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_double(const Rat& r) { return r.template convert_to<double>(); }

// Error taxonomy.  The CLI maps kinds to exit codes: config/hypothesis
// problems exit 2, budget/window problems exit 3, failed verification 4.
enum class ErrKind {
    config,        // malformed input, bad arguments, inconsistent data
    hypothesis,    // a required hypothesis of the density machinery fails
    budget,        // enumeration/exhaustion budget or window exceeded
    verification,  // an internal cross-check or verify-run failed
};

struct SieveError : std::runtime_error {
    ErrKind kind;
    SieveError(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw SieveError(k, msg); }

inline void require(bool cond, ErrKind k, const std::string& msg) {
    if (!cond) fail(k, msg);
}

// ---------------------------------------------------------------------------
// Deterministic RNG: splitmix64 keyed by (seed, stream ids).  Each logical
// trial owns an independent stream, so results are identical however trials
// are distributed over workers.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct RngStream {
    std::uint64_t state;

    RngStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        state = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
        state = splitmix64(state ^ a);
        state = splitmix64(state ^ b);
    }

    std::uint64_t next() {
        state = splitmix64(state);
        return state;
    }

    // Uniform value in [0, n) by rejection, bias-free.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            std::uint64_t v = next();
            if (v < limit) return v % n;
        }
    }
};

// ---------------------------------------------------------------------------
// Worker helper.  Work is split into fixed contiguous chunks; each chunk's
// result lands in a slot indexed by chunk number, so merging in slot order is
// deterministic for any worker count.

inline int worker_count() {
    if (const char* env = std::getenv("BERTINI_SIEVE_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// fn(chunk_index, begin, end) over [0, total) split into `chunks` ranges.
template <class Fn>
void run_chunked(std::uint64_t total, int workers, Fn&& fn) {
    if (total == 0) return;
    int chunks = workers;
    if (static_cast<std::uint64_t>(chunks) > total) chunks = static_cast<int>(total);
    if (chunks <= 1) {
        fn(0, std::uint64_t{0}, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::uint64_t per = total / chunks, extra = total % chunks, begin = 0;
    for (int c = 0; c < chunks; ++c) {
        std::uint64_t len = per + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
        pool.emplace_back([&fn, c, begin, len] { fn(c, begin, begin + len); });
        begin += len;
    }
    for (auto& t : pool) t.join();
}

}  // namespace bsieve
