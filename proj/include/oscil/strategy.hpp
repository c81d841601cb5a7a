#pragma once

// Global lower-bound constructions. Each strategy runs a per-block matching
// over a supplied block set, sweeps the shift deterministically, stitches the
// blocks into one global matching, and returns it with a certificate that
// records every hypothesis check. Checks that fail are reported in the
// certificate, never silently ignored; the construction still runs, since a
// valid matching is a valid lower bound regardless of how it was found.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/errors.hpp"
#include "oscil/matching.hpp"
#include "oscil/params.hpp"
#include "oscil/rational.hpp"
#include "oscil/regularity.hpp"
#include "oscil/structure.hpp"

namespace oscil {

enum class StrategyKind { Imbalanced = 0, Green = 1, BlueYellow = 2 };

inline const char* strategy_kind_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::Imbalanced: return "imbalanced";
        case StrategyKind::Green: return "green";
        case StrategyKind::BlueYellow: return "blue-yellow";
    }
    return "?";
}

struct BlockNote {
    std::int64_t block = 0;  // dyadic block (or interval ordinal; 0 = fillers)
    std::int64_t size = 0;
    std::int64_t gain = 0;
    bool hypothesis_ok = true;
    std::string detail;
};

struct StrategyCertificate {
    StrategyKind kind = StrategyKind::Imbalanced;
    int scale = 0;  // stitch scale; 0 for the interval walk
    std::int64_t delta = 0;
    std::int64_t size = 0;
    std::int64_t baseline = 0;  // plain ones matching at shift 0
    Rational claimed_floor;     // lemma bound as a fraction of |s| bits
    bool floor_met = false;
    bool hypotheses_ok = true;
    std::vector<BlockNote> notes;
    std::vector<std::string> failures;  // instance-level findings
};

struct StrategyResult {
    Matching matching;
    StrategyCertificate certificate;
};

// Top-split balance: l1 distance between the flag-length distributions over
// the string's two half ones-intervals.
inline Rational flag_balance_discrepancy(const BitString& w, const ParamSet& p) {
    std::int64_t L = w.ones();
    if (L < 2 || L % 2 != 0)
        throw PreconditionError("balance needs an even positive ones count");
    return l1(flag_distribution_interval(w, {1, L / 2}, p),
              flag_distribution_interval(w, {L / 2 + 1, L}, p));
}

// Windowed-flag mass plus Red cap at one scale. The power-of-two Red scan
// keeps the per-block check affordable; callers wanting the exhaustive scan
// pass RedCapMode::Exact.
inline bool blue_yellow_check(const BitString& w, int m, const ParamSet& p,
                              RedCapMode mode = RedCapMode::PowersOfTwo) {
    const std::int64_t L = w.ones();
    if (L < 1) return false;
    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
    if (m < 1 || m > n) return false;
    const std::int64_t b_lo = std::int64_t{1} << m;
    const std::int64_t b_hi = floor64(p.gamma * L);
    std::int64_t count = detail::window_count(b_profile(w, p), b_lo, b_hi);
    if (Rational(count) < (p.eps2() - p.gamma) * L) return false;
    return !detail::red_cap_violation(w, b_lo, mode, p).has_value();
}

namespace detail {

// Shift sweep domain: exhaustive while affordable, else a seeded uniform
// sample (at most 4096 draws, never more than the cap) with 0 always
// present so the unshifted baseline is never lost.
inline std::vector<std::int64_t> shift_domain(std::int64_t lo, std::int64_t hi,
                                              std::int64_t sweep_cap,
                                              std::uint64_t seed) {
    std::vector<std::int64_t> domain;
    const std::int64_t cap = std::max<std::int64_t>(sweep_cap, 1);
    if (hi - lo + 1 <= cap) {
        for (std::int64_t d = lo; d <= hi; ++d) domain.push_back(d);
        return domain;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    if (lo <= 0 && 0 <= hi) domain.push_back(0);
    for (std::int64_t k = 1; k < std::min<std::int64_t>(4096, cap); ++k)
        domain.push_back(dist(rng));
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    return domain;
}

// Deterministic argmax under the total order (size desc, |delta| asc,
// delta asc); mirrors best_shift so sweeps agree across modules.
template <typename Build>
std::pair<std::int64_t, Matching> sweep_shifts(
        const std::vector<std::int64_t>& domain, Build&& build) {
    std::int64_t best_d = 0;
    Matching best;
    bool have = false;
    for (std::int64_t d : domain) {
        Matching m = build(d);
        bool better = !have || m.size() > best.size() ||
                      (m.size() == best.size() &&
                       (std::llabs(d) < std::llabs(best_d) ||
                        (std::llabs(d) == std::llabs(best_d) && d < best_d)));
        if (better) {
            best = std::move(m);
            best_d = d;
            have = true;
        }
    }
    return {best_d, std::move(best)};
}

inline Rational pow2_rational(int k) {
    Rational r(1);
    for (int j = 0; j < k; ++j) r = r * 2;
    return r;
}

}  // namespace detail

// Interval-family walk: every family interval ("patch") gets the denser of
// the ones pairing and the zeros pairing, the stretches between them a plain
// ones matching — the majority rule on both segment types. Patches are where
// the imbalance lives; the certificate reports each patch's zeros agreement,
// bit-span agreement, and imbalance verdicts.
inline StrategyResult imbalanced_strategy(const BitString& s, const BitString& t,
                                          const std::vector<OnesInterval>& family,
                                          const ParamSet& p) {
    const std::int64_t L = s.ones();
    if (L == 0 || t.ones() != L)
        throw PreconditionError("interval walk needs equal positive ones counts");
    std::int64_t prev_hi = 0;
    for (const OnesInterval& I : family) {
        if (I.lo <= prev_hi || I.hi < I.lo || I.hi > L)
            throw PreconditionError(
                "family intervals must be increasing, disjoint, and in range");
        prev_hi = I.hi;
    }

    StrategyResult out;
    StrategyCertificate& cert = out.certificate;
    cert.kind = StrategyKind::Imbalanced;
    cert.baseline = L;
    cert.claimed_floor = Rational(1, 2) + p.delta_technical();

    if (s.length() != t.length())
        cert.failures.push_back("bit lengths differ");
    std::int64_t mass = 0;
    for (const OnesInterval& I : family) mass += I.size();
    if (Rational(mass) * 10 < p.eps5() * L)
        cert.failures.push_back("family mass below eps^5*L/10");

    detail::MonotoneSink sink(s.length(), t.length());
    // pairs = max(ones, min zeros) over a common ones-interval
    auto match_segment = [&](const OnesInterval& I) -> std::int64_t {
        if (I.empty()) return 0;
        auto zs = detail::window_zero_positions(s, I);
        auto zt = detail::window_zero_positions(t, I);
        std::int64_t zboth =
            static_cast<std::int64_t>(std::min(zs.size(), zt.size()));
        if (zboth > I.size()) {
            for (std::int64_t k = 0; k < zboth; ++k)
                sink.push(zs[static_cast<std::size_t>(k)],
                          zt[static_cast<std::size_t>(k)]);
            return zboth;
        }
        for (std::int64_t u = I.lo; u <= I.hi; ++u)
            sink.push(s.one_position(u), t.one_position(u));
        return I.size();
    };

    std::int64_t filler_pairs = 0, filler_ones = 0;
    std::int64_t cursor = 1;
    std::int64_t ordinal = 0;
    for (const OnesInterval& I : family) {
        OnesInterval gap{cursor, I.lo - 1};
        filler_pairs += match_segment(gap);
        filler_ones += gap.size();

        ++ordinal;
        BlockNote note;
        note.block = ordinal;
        std::int64_t zs = s.zeros_in(I), zt = t.zeros_in(I);
        auto side_s = imbalance_side(zs, I.size(), p.epsilon);
        auto side_t = imbalance_side(zt, I.size(), p.epsilon);
        std::string why;
        if (s.interval_bits(I) != t.interval_bits(I)) why += "bit spans differ; ";
        if (zs != zt) why += "zeros differ; ";
        if (!side_s) why += "s side balanced; ";
        if (!side_t) why += "t side balanced; ";
        if (side_s && side_t && *side_s != *side_t) why += "sides disagree; ";
        note.hypothesis_ok = why.empty();
        if (!why.empty()) {
            why.resize(why.size() - 2);
            note.detail = why;
        }
        note.size = match_segment(I);
        note.gain = note.size - I.size();
        cert.hypotheses_ok = cert.hypotheses_ok && note.hypothesis_ok;
        cert.notes.push_back(std::move(note));
        cursor = I.hi + 1;
    }
    OnesInterval tail{cursor, L};
    filler_pairs += match_segment(tail);
    filler_ones += tail.size();

    BlockNote fillers;
    fillers.block = 0;
    fillers.size = filler_pairs;
    fillers.gain = filler_pairs - filler_ones;
    fillers.detail = "fillers";
    cert.notes.push_back(std::move(fillers));

    sink.m.canonicalize();
    out.matching = std::move(sink.m);
    cert.size = out.matching.size();
    cert.hypotheses_ok = cert.hypotheses_ok && cert.failures.empty();
    cert.floor_met =
        Rational(cert.size) >= cert.claimed_floor * Rational(s.length());
    return out;
}

// Per-block Green trades stitched over the block set: for each shift the
// blocks in Z are matched by green_match on the dropped block pair, the rest
// by the shifted ones matching. ells supplies each block's flag length
// (Green pairs share an ell within a block, not across blocks).
inline StrategyResult green_strategy(const BitString& s, const BitString& t,
                                     int m, const std::vector<std::int64_t>& Z,
                                     const std::vector<std::int64_t>& ells,
                                     const ParamSet& p,
                                     std::int64_t sweep_cap = std::int64_t{1} << 16,
                                     std::uint64_t seed = 0x05C11u) {
    if (Z.size() != ells.size())
        throw PreconditionError("one flag length required per block in Z");
    const std::int64_t L = s.ones();
    if (L == 0 || t.ones() != L || (L & (L - 1)) != 0)
        throw PreconditionError(
            "green strategy needs equal power-of-two ones counts");
    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
    if (m < 0 || m > n) throw PreconditionError("block scale out of range");
    const std::int64_t block_count = L >> m;
    std::int64_t prev = 0;
    for (std::int64_t z : Z) {
        if (z <= prev || z > block_count)
            throw PreconditionError("Z must be strictly increasing and in range");
        prev = z;
    }
    for (std::int64_t ell : ells)
        if (ell < 1) throw PreconditionError("flag length must be >= 1");

    StrategyResult out;
    StrategyCertificate& cert = out.certificate;
    cert.kind = StrategyKind::Green;
    cert.scale = m;
    cert.baseline = L;
    cert.claimed_floor = Rational(1, 2) + p.eps5() / 5000;

    if (p.eps5() * detail::pow2_rational(n - m) < 1024)
        cert.failures.push_back("block scale above the lemma window");
    if (10 * static_cast<std::int64_t>(Z.size()) <= block_count)
        cert.failures.push_back("fewer than a tenth of the blocks supplied");

    std::vector<BitString> sb, tb;
    sb.reserve(Z.size());
    tb.reserve(Z.size());
    for (std::int64_t z : Z) {
        sb.push_back(s.dyadic_block(m, z));
        tb.push_back(t.dyadic_block(m, z));
    }
    for (std::size_t k = 0; k < Z.size(); ++k) {
        BlockNote note;
        note.block = Z[k];
        bool ok_s = type_certificate(sb[k], StringType::green(ells[k]), p);
        bool ok_t = type_certificate(tb[k], StringType::green(ells[k]), p);
        note.hypothesis_ok = ok_s && ok_t;
        if (!ok_s && !ok_t) note.detail = "neither side green at this ell";
        else if (!ok_s) note.detail = "s block not green at this ell";
        else if (!ok_t) note.detail = "t block not green at this ell";
        cert.hypotheses_ok = cert.hypotheses_ok && note.hypothesis_ok;
        cert.notes.push_back(std::move(note));
    }

    auto blocks_at = [&](std::int64_t d) {
        std::vector<Matching> bms;
        bms.reserve(Z.size());
        for (std::size_t k = 0; k < Z.size(); ++k)
            bms.push_back(green_match(sb[k].drop(d), tb[k].drop(-d), ells[k], 0, p));
        return bms;
    };
    const std::int64_t D = std::int64_t{1} << m;
    auto domain = detail::shift_domain(-D, D, sweep_cap, seed);
    auto [best_d, best] = detail::sweep_shifts(
        domain, [&](std::int64_t d) { return stitch(s, t, m, d, Z, blocks_at(d)); });

    cert.delta = best_d;
    out.matching = std::move(best);
    cert.size = out.matching.size();
    const std::int64_t block_ones = std::int64_t{1} << m;
    auto bms = blocks_at(best_d);
    for (std::size_t k = 0; k < Z.size(); ++k) {
        cert.notes[k].size = bms[k].size();
        cert.notes[k].gain = bms[k].size() - (block_ones - std::llabs(best_d));
    }
    cert.hypotheses_ok = cert.hypotheses_ok && cert.failures.empty();
    cert.floor_met =
        Rational(cert.size) >= cert.claimed_floor * Rational(s.length());
    return out;
}

// Per-pair Blue-Yellow trapezoids stitched over the block set. Z indexes
// blocks at scale m_star+1; each is split by blue_yellow_balanced into the
// forward pair (odd scale-m_star halves) and the reversed pair (even
// halves). flag_scales supplies each pair's window scale, and the
// certificate reports the four type checks and four balance checks a
// Blue-Yellow pair promises.
inline StrategyResult blue_yellow_strategy(
        const BitString& s, const BitString& t, int m_star,
        const std::vector<std::int64_t>& Z, const std::vector<int>& flag_scales,
        const ParamSet& p, std::int64_t sweep_cap = std::int64_t{1} << 16,
        std::uint64_t seed = 0x05C11u) {
    if (Z.size() != flag_scales.size())
        throw PreconditionError("one flag scale required per block in Z");
    const std::int64_t L = s.ones();
    if (L == 0 || t.ones() != L || (L & (L - 1)) != 0)
        throw PreconditionError(
            "blue-yellow strategy needs equal power-of-two ones counts");
    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
    if (m_star < 0 || m_star + 1 > n)
        throw PreconditionError("block scale out of range");
    const std::int64_t block_count = L >> (m_star + 1);
    std::int64_t prev = 0;
    for (std::int64_t z : Z) {
        if (z <= prev || z > block_count)
            throw PreconditionError("Z must be strictly increasing and in range");
        prev = z;
    }
    for (int fm : flag_scales)
        if (fm < 1) throw PreconditionError("flag scale must be >= 1");

    StrategyResult out;
    StrategyCertificate& cert = out.certificate;
    cert.kind = StrategyKind::BlueYellow;
    cert.scale = m_star + 1;
    cert.baseline = L;
    cert.claimed_floor = Rational(1, 2) + p.epsilon / 10000;

    if (p.epsilon * detail::pow2_rational(n - m_star) < 1024)
        cert.failures.push_back("block scale above the lemma window");
    if (10 * static_cast<std::int64_t>(Z.size()) <= block_count)
        cert.failures.push_back("fewer than a tenth of the block pairs supplied");

    std::vector<BitString> sb, tb;
    sb.reserve(Z.size());
    tb.reserve(Z.size());
    for (std::int64_t z : Z) {
        sb.push_back(s.dyadic_block(m_star + 1, z));
        tb.push_back(t.dyadic_block(m_star + 1, z));
    }
    for (std::size_t k = 0; k < Z.size(); ++k) {
        BlockNote note;
        note.block = Z[k];
        const int fm = flag_scales[k];
        BitString sf = s.dyadic_block(m_star, 2 * Z[k] - 1);
        BitString tf = t.dyadic_block(m_star, 2 * Z[k] - 1);
        BitString sr = s.dyadic_block(m_star, 2 * Z[k]).reversed();
        BitString tr = t.dyadic_block(m_star, 2 * Z[k]).reversed();
        std::string why;
        if (sf.length() != tf.length()) why += "forward pair lengths differ; ";
        if (sr.length() != tr.length()) why += "reversed pair lengths differ; ";
        if (!blue_yellow_check(sf, fm, p)) why += "s forward not typed; ";
        if (!blue_yellow_check(tf, fm, p)) why += "t forward not typed; ";
        if (!blue_yellow_check(sr, fm, p)) why += "s reversed not typed; ";
        if (!blue_yellow_check(tr, fm, p)) why += "t reversed not typed; ";
        const Rational cap = p.six_gamma();
        if (flag_balance_discrepancy(sf, p) > cap) why += "s forward unbalanced; ";
        if (flag_balance_discrepancy(tf, p) > cap) why += "t forward unbalanced; ";
        if (flag_balance_discrepancy(sr, p) > cap) why += "s reversed unbalanced; ";
        if (flag_balance_discrepancy(tr, p) > cap) why += "t reversed unbalanced; ";
        note.hypothesis_ok = why.empty();
        if (!why.empty()) {
            why.resize(why.size() - 2);
            note.detail = why;
        }
        cert.hypotheses_ok = cert.hypotheses_ok && note.hypothesis_ok;
        cert.notes.push_back(std::move(note));
    }

    auto blocks_at = [&](std::int64_t d) {
        std::vector<Matching> bms;
        bms.reserve(Z.size());
        for (std::size_t k = 0; k < Z.size(); ++k)
            bms.push_back(blue_yellow_balanced(sb[k], tb[k], d, p, flag_scales[k]));
        return bms;
    };
    const std::int64_t D = (std::int64_t{1} << m_star) / 4;
    auto domain = detail::shift_domain(0, D, sweep_cap, seed);
    auto [best_d, best] = detail::sweep_shifts(domain, [&](std::int64_t d) {
        return stitch(s, t, m_star + 1, d, Z, blocks_at(d));
    });

    cert.delta = best_d;
    out.matching = std::move(best);
    cert.size = out.matching.size();
    const std::int64_t block_ones = std::int64_t{1} << (m_star + 1);
    auto bms = blocks_at(best_d);
    for (std::size_t k = 0; k < Z.size(); ++k) {
        cert.notes[k].size = bms[k].size();
        cert.notes[k].gain = bms[k].size() - (block_ones - best_d);
    }
    cert.hypotheses_ok = cert.hypotheses_ok && cert.failures.empty();
    cert.floor_met =
        Rational(cert.size) >= cert.claimed_floor * Rational(s.length());
    return out;
}

}  // namespace oscil
