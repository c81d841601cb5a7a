#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/flags.hpp"
#include "oscil/params.hpp"

namespace oscil {

// Non-crossing equal-bits matching. Pairs are (position in s, position in t),
// 1-based bit positions, strictly increasing in both coordinates.
struct Matching {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;

    std::int64_t size() const { return static_cast<std::int64_t>(pairs.size()); }
    void canonicalize() {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
    bool operator==(const Matching&) const = default;
};

inline bool validate(const Matching& m, const BitString& s, const BitString& t) {
    std::int64_t pa = 0, pb = 0;
    for (const auto& [a, b] : m.pairs) {
        if (a <= pa || b <= pb) return false;
        if (a > s.length() || b > t.length()) return false;
        if (s.bit(a) != t.bit(b)) return false;
        pa = a;
        pb = b;
    }
    return true;
}

// Pairs the i-th one of s with the (i+delta)-th one of t, exactly
// min(ones(s), ones(t)) - |delta| pairs.
inline Matching naive_match(const BitString& s, const BitString& t,
                            std::int64_t delta) {
    std::int64_t Ls = s.ones(), Lt = t.ones();
    std::int64_t count = std::min(Ls, Lt) - std::llabs(delta);
    if (count < 0)
        throw PreconditionError("ones shift exceeds the smaller ones count");
    Matching m;
    std::int64_t lo = std::max<std::int64_t>(1, 1 - delta);
    for (std::int64_t i = lo; i < lo + count; ++i)
        m.pairs.emplace_back(s.one_position(i), t.one_position(i + delta));
    return m;
}

// All ones when zeros are the minority, else all matchable zeros. For
// delta-imbalanced same-zero-count pairs this meets (1/2 + delta/5)|s|.
inline Matching imbalanced_match(const BitString& s, const BitString& t) {
    if (s.length() != t.length() || s.ones() != t.ones())
        throw PreconditionError("imbalanced_match needs equal length and ones count");
    if (s.zeros() <= s.ones()) return naive_match(s, t, 0);
    Matching m;
    std::int64_t take = std::min(s.zeros(), t.zeros());
    std::int64_t a = 0, b = 0;
    for (std::int64_t k = 0; k < take; ++k) {
        do { ++a; } while (s.bit(a));
        do { ++b; } while (t.bit(b));
        m.pairs.emplace_back(a, b);
    }
    return m;
}

// Maps a matching of (rev(s), rev(t)) back to (s, t). rev keeps bit 1 and
// mirrors the rest, so pairs touching bit 1 on exactly one side have no
// order-preserving image and are dropped; a (1,1) pair maps to (1,1).
inline Matching transport_rev(const Matching& m, std::int64_t s_len,
                              std::int64_t t_len) {
    Matching out;
    bool keep_head = false;
    for (const auto& [a, b] : m.pairs) {
        if (a == 1 && b == 1) {
            keep_head = true;
            continue;
        }
        if (a == 1 || b == 1) continue;
        out.pairs.emplace_back(s_len + 2 - a, t_len + 2 - b);
    }
    std::reverse(out.pairs.begin(), out.pairs.end());
    if (keep_head) out.pairs.insert(out.pairs.begin(), {1, 1});
    return out;
}

namespace detail {

// Appends a pair only when it extends the matching monotonically within
// bounds. The constructions emit in order, so on intended inputs nothing
// is skipped; on degenerate inputs this keeps the output valid.
struct MonotoneSink {
    Matching m;
    std::int64_t max_a, max_b;
    std::int64_t last_a = 0, last_b = 0;
    MonotoneSink(std::int64_t ma, std::int64_t mb) : max_a(ma), max_b(mb) {}
    void push(std::int64_t a, std::int64_t b) {
        if (a <= last_a || b <= last_b || a > max_a || b > max_b) return;
        m.pairs.emplace_back(a, b);
        last_a = a;
        last_b = b;
    }
};

// Bit positions of the zeros of the ones-interval window [lo, hi] of w.
inline std::vector<std::int64_t> window_zero_positions(const BitString& w,
                                                       OnesInterval I) {
    BitRange r = w.interval_bits(I);
    std::vector<std::int64_t> out;
    for (std::int64_t pos = r.begin; pos < r.end; ++pos)
        if (!w.bit(pos)) out.push_back(pos);
    return out;
}

}  // namespace detail

// Prefix/suffix stitching: start from the shifted ones matching and splice
// in a local matching for (Drop_delta(s_{m,i}), Drop_{-delta}(t_{m,i})) at
// every block i in Z. The size identity
//   |global| = (L - |delta|) + sum_i (|block_i| - (2^m - |delta|))
// holds exactly because each splice removes exactly 2^m - |delta| ones pairs.
inline Matching stitch(const BitString& s, const BitString& t, int m,
                       std::int64_t delta, const std::vector<std::int64_t>& Z,
                       const std::vector<Matching>& block_matchings) {
    std::int64_t L = s.ones();
    if (L != t.ones() || L == 0 || (L & (L - 1)) != 0)
        throw PreconditionError("stitch needs equal power-of-two ones counts");
    std::int64_t block_ones = std::int64_t{1} << m;
    std::int64_t block_count = L >> m;
    if (m < 0 || block_ones > L)
        throw PreconditionError("stitch scale out of range");
    if (delta > block_ones || delta < -block_ones)
        throw PreconditionError("stitch shift exceeds the block ones count");
    if (Z.size() != block_matchings.size())
        throw PreconditionError("one block matching required per block in Z");
    for (std::size_t k = 0; k < Z.size(); ++k) {
        if (Z[k] < 1 || Z[k] > block_count)
            throw PreconditionError("block index out of range: " + std::to_string(Z[k]));
        if (k > 0 && Z[k] <= Z[k - 1])
            throw PreconditionError("block set must be strictly increasing");
    }
    for (std::size_t k = 0; k < Z.size(); ++k) {
        BitString su = s.dyadic_block(m, Z[k]).drop(delta);
        BitString tu = t.dyadic_block(m, Z[k]).drop(-delta);
        if (!validate(block_matchings[k], su, tu))
            throw PreconditionError("invalid matching for block " + std::to_string(Z[k]));
    }

    Matching out;
    std::int64_t lo = std::max<std::int64_t>(1, 1 - delta);
    std::int64_t hi = std::min(L, L - delta);
    std::size_t zk = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        // the splice consumes the ones pairs whose s index lies in the
        // block's surviving range (Z-1)*2^m + max(1,1-d) .. Z*2^m - max(0,d)
        if (zk < Z.size()) {
            std::int64_t base = (Z[zk] - 1) * block_ones;
            std::int64_t rep_lo = base + std::max<std::int64_t>(1, 1 - delta);
            std::int64_t rep_hi = base + block_ones - std::max<std::int64_t>(0, delta);
            if (i == rep_lo) {
                // splice: local coordinates -> global bit offsets
                std::int64_t s_off, t_off;
                if (delta >= 0) {
                    s_off = s.one_position(base + 1) - 1;
                    t_off = t.one_position(base + 1 + delta) - 1;
                } else {
                    s_off = s.one_position(base + 1 - delta) - 1;
                    t_off = t.one_position(base + 1) - 1;
                }
                for (const auto& [a, b] : block_matchings[zk].pairs)
                    out.pairs.emplace_back(a + s_off, b + t_off);
                i = rep_hi;  // skip the replaced ones pairs
                ++zk;
                continue;
            }
            if (i > rep_lo) {  // only possible if the block was empty-range
                ++zk;
                --i;
                continue;
            }
        }
        out.pairs.emplace_back(s.one_position(i), t.one_position(i + delta));
    }
    out.canonicalize();
    return out;
}

// Green strategy at one shift: ones matching at shift delta, with the ones
// strictly inside each surviving Green flag window traded for the windows'
// zeros. Flags are thinned to spacing >= ell; a final flag whose t-window
// would overrun the string is dropped.
inline Matching green_match(const BitString& s, const BitString& t,
                            std::int64_t ell, std::int64_t delta,
                            const ParamSet& p) {
    if (ell < 1) throw PreconditionError("flag length must be >= 1");
    std::int64_t Ls = s.ones(), Lt = t.ones();
    std::int64_t L = std::min(Ls, Lt);
    if (delta > L || delta < -L)
        throw PreconditionError("ones shift exceeds the smaller ones count");

    ThresholdCmp green(p.green_threshold());
    std::vector<std::int64_t> picked;
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    std::int64_t lo = std::max<std::int64_t>(1, 1 - delta);
    std::int64_t hi = std::min(Ls, Lt - delta);
    for (std::int64_t i = lo; i <= hi; ++i) {
        if (i < prev + ell) continue;
        if (!green.rate_exceeds(flag_window_zeros(s, i, ell), ell)) continue;
        if (!green.rate_exceeds(flag_window_zeros(t, i + delta, ell), ell)) continue;
        picked.push_back(i);
        prev = i;
    }
    while (!picked.empty() && picked.back() + delta + ell > Lt) picked.pop_back();

    detail::MonotoneSink sink(s.length(), t.length());
    std::size_t f = 0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        if (f < picked.size() && i == picked[f]) {
            sink.push(s.one_position(i), t.one_position(i + delta));
            auto zs = detail::window_zero_positions(s, {i, i + ell - 1});
            auto zt = detail::window_zero_positions(t, {i + delta, i + delta + ell - 1});
            std::size_t take = std::min(zs.size(), zt.size());
            for (std::size_t k = 0; k < take; ++k) sink.push(zs[k], zt[k]);
            i = std::min(i + ell - 1, hi);
            ++f;
            continue;
        }
        sink.push(s.one_position(i), t.one_position(i + delta));
    }
    sink.m.canonicalize();
    return sink.m;
}

struct ShiftOutcome {
    std::int64_t delta = 0;
    Matching matching;
    std::int64_t gain = 0;  // size - (L - |delta|)
};

// Deterministic stand-in for the random-shift expectation argument:
// exhaustive over delta in [-L, L] while the domain is small, else a
// seeded uniform sample. Ties break toward smaller |delta|, then smaller
// delta.
template <typename Builder>
ShiftOutcome best_shift(std::int64_t L, Builder&& build, std::int64_t sweep_cap,
                        std::uint64_t seed) {
    std::vector<std::int64_t> domain;
    if (2 * L + 1 <= sweep_cap) {
        for (std::int64_t d = -L; d <= L; ++d) domain.push_back(d);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::int64_t> dist(-L, L);
        domain.push_back(0);
        for (int k = 1; k < 4096; ++k) domain.push_back(dist(rng));
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    }
    std::optional<ShiftOutcome> best;
    for (std::int64_t d : domain) {
        Matching m = build(d);
        ShiftOutcome cand{d, std::move(m), 0};
        cand.gain = cand.matching.size() - (L - std::llabs(d));
        bool better = !best || cand.matching.size() > best->matching.size() ||
                      (cand.matching.size() == best->matching.size() &&
                       (std::llabs(d) < std::llabs(best->delta) ||
                        (std::llabs(d) == std::llabs(best->delta) && d < best->delta)));
        if (better) best = std::move(cand);
    }
    return *best;
}

inline ShiftOutcome green_best_shift(const BitString& s, const BitString& t,
                                     std::int64_t ell, const ParamSet& p,
                                     std::int64_t sweep_cap = 1 << 16,
                                     std::uint64_t seed = 0x05C11u) {
    std::int64_t L = std::min(s.ones(), t.ones());
    return best_shift(
        L, [&](std::int64_t d) { return green_match(s, t, ell, d, p); }, sweep_cap,
        seed);
}

// Blue-Yellow single-trapezoid construction at scale m. Greedily selects
// disjoint Blue flags i_1 < ... < i_d in [L/2] with b_s(i_k) in
// [2^m, gamma*L], pairs each with the anchor j_k = i_k + delta
// + sum(l_t - l_s so far) in t, trades the flagged windows for zeros where
// j_k really is a Yellow l_{t,k}-flag (ones fallback otherwise), and
// matches ones across the gaps, stopping at the (0.5 + 0.01*eps)L-th one
// of s.
inline Matching blue_yellow_match(const BitString& s, const BitString& t,
                                  std::int64_t delta, const ParamSet& p, int m) {
    std::int64_t Ls = s.ones(), Lt = t.ones();
    if (Ls == 0 || Lt == 0) return Matching{};
    std::int64_t L = Ls;
    if (delta < 0 || delta > L / 4)
        throw PreconditionError("blue-yellow shift must lie in [0, L/4]");
    if (m < 0) throw PreconditionError("flag scale must be >= 0");

    FlagProfile prof = b_profile(s, p);
    std::int64_t b_lo = std::int64_t{1} << m;
    std::int64_t b_hi = floor64(p.gamma * L);
    ThresholdCmp yellow(ParamSet::yellow_threshold());
    Rational stretch = p.yellow_stretch();

    std::int64_t prefix_end = floor64((Rational(1, 2) + p.epsilon / 100) * L);
    prefix_end = std::min(prefix_end, Ls);

    detail::MonotoneSink sink(s.length(), t.length());
    std::int64_t i = 1;              // next s ones-index to cover
    std::int64_t shift = delta;      // current ones offset into t
    std::int64_t half = L / 2;
    while (i <= prefix_end) {
        bool flag = i <= half && prof.at(i) >= b_lo && prof.at(i) <= b_hi;
        if (!flag) {
            if (i + shift >= 1 && i + shift <= Lt)
                sink.push(s.one_position(i), t.one_position(i + shift));
            ++i;
            continue;
        }
        std::int64_t ls = prof.at(i);
        std::int64_t lt = ceil64(stretch * ls);
        std::int64_t j = i + shift;
        bool yellow_hit = j >= 1 && j <= Lt &&
                          yellow.rate_exceeds(flag_window_zeros(t, j, lt), lt);
        if (yellow_hit) {
            auto zs = detail::window_zero_positions(s, {i, i + ls - 1});
            auto zt = detail::window_zero_positions(t, {j, j + lt - 1});
            std::size_t take = std::min(zs.size(), zt.size());
            for (std::size_t k = 0; k < take; ++k) sink.push(zs[k], zt[k]);
        } else {
            for (std::int64_t u = 0; u < ls; ++u)
                if (j + u >= 1 && j + u <= Lt && i + u <= Ls)
                    sink.push(s.one_position(i + u), t.one_position(j + u));
        }
        shift += lt - ls;
        i += ls;
    }
    sink.m.canonicalize();
    return sink.m;
}

// Two-trapezoid composition for a balanced pair: forward trapezoid on the
// first halves, reversed trapezoid on the reversed second halves mapped
// back through rev, ones across the middle. Output is a matching of
// (Drop_delta(s), Drop_{-delta}(t)) in those strings' own coordinates.
inline Matching blue_yellow_balanced(const BitString& s, const BitString& t,
                                     std::int64_t delta, const ParamSet& p,
                                     int m) {
    if (s.ones() != t.ones())
        throw PreconditionError("balanced pair needs equal ones counts");
    if (s.ones() == 0 || s.ones() % 2 != 0)
        throw PreconditionError("balanced pair needs an even positive ones count");
    if (!s.starts_with_one() || !t.starts_with_one())
        throw PreconditionError("balanced pair strings must start with a one");
    std::int64_t L = s.ones() / 2;
    if (delta < 0 || delta > L / 4)
        throw PreconditionError("balanced shift must lie in [0, L/4]");

    BitString s1 = s.substring({1, L}), s2 = s.substring({L + 1, 2 * L});
    BitString t1 = t.substring({1, L}), t2 = t.substring({L + 1, 2 * L});

    Matching fwd = blue_yellow_match(s1, t1, delta, p, m);

    // reverse trapezoid with roles swapped, then mapped back and reflected
    Matching rtrap = blue_yellow_match(t2.reversed(), s2.reversed(), delta, p, m);
    Matching back = transport_rev(rtrap, t2.length(), s2.length());
    Matching rev_part;
    for (const auto& [tb, sb] : back.pairs) {
        // a pair at the segments' first bits would sit left of the middle
        // segment and block it; one pair costs less than the middle
        if (sb == 1 || tb == 1) continue;
        rev_part.pairs.emplace_back(sb, tb);
    }
    std::sort(rev_part.pairs.begin(), rev_part.pairs.end());

    std::int64_t s2_bit0 = s1.length();  // global offset of s2 bits
    std::int64_t t2_bit0 = t1.length();

    // Drop-local coordinates: s keeps its prefix, t starts at one 1+delta.
    std::int64_t s_cut = (delta == 0) ? s.length()
                                      : s.one_position(2 * L - delta + 1) - 1;
    std::int64_t t_shift = t.one_position(1 + delta) - 1;

    detail::MonotoneSink sink(s_cut, t.length() - t_shift);
    for (const auto& [a, b] : fwd.pairs) sink.push(a, b - t_shift);

    // middle: ones matching between the trapezoids at offset delta
    std::int64_t A = floor64((Rational(1, 2) + p.epsilon / 100) * L);
    std::int64_t mid_lo = A + 1;
    std::int64_t mid_hi = 2 * L + 1 - A - delta;
    std::int64_t rev_first_s = rev_part.pairs.empty()
                                   ? std::numeric_limits<std::int64_t>::max()
                                   : rev_part.pairs.front().first + s2_bit0;
    std::int64_t rev_first_t = rev_part.pairs.empty()
                                   ? std::numeric_limits<std::int64_t>::max()
                                   : rev_part.pairs.front().second + t2_bit0;
    for (std::int64_t u = mid_lo; u <= mid_hi; ++u) {
        if (u < 1 || u > 2 * L || u + delta > 2 * L) continue;
        std::int64_t a = s.one_position(u);
        std::int64_t b = t.one_position(u + delta);
        if (a >= rev_first_s || b >= rev_first_t) break;
        sink.push(a, b - t_shift);
    }

    for (const auto& [sb, tb] : rev_part.pairs)
        sink.push(sb + s2_bit0, tb + t2_bit0 - t_shift);

    sink.m.canonicalize();
    return sink.m;
}

}  // namespace oscil
