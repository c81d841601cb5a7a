#pragma once
// Per-scale block statistics for a string with a power-of-two ones count,
// bit-exact table comparison, collision search over a code, and the
// end-to-end dispatch that turns two strings agreeing on their statistics
// into one global matching.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/errors.hpp"
#include "oscil/flags.hpp"
#include "oscil/matching.hpp"
#include "oscil/params.hpp"
#include "oscil/rational.hpp"
#include "oscil/regularity.hpp"
#include "oscil/strategy.hpp"
#include "oscil/structure.hpp"

namespace oscil {

// How the imbalanced-interval family was selected: exact weighted interval
// scheduling for small strings, a documented left-to-right greedy beyond.
enum class FamilyMode { Exact = 0, Greedy = 1 };

inline const char* family_mode_name(FamilyMode m) {
    return m == FamilyMode::Exact ? "exact" : "greedy";
}

struct BlockStat {
    std::int64_t ones = 0;
    std::int64_t zeros = 0;
    std::optional<StringType> type;

    bool operator==(const BlockStat&) const = default;
};

struct ScaleRow {
    int m = 0;
    std::vector<BlockStat> blocks;  // dyadic blocks, ascending i

    bool operator==(const ScaleRow&) const = default;
};

struct FamilyInterval {
    OnesInterval interval;   // in ones indices
    std::int64_t bit_lo = 0;  // first bit position covered by the window
    std::int64_t bit_hi = 0;  // last bit position (trailing zeros included)
    std::int64_t zeros = 0;
    ImbalanceSide side = ImbalanceSide::Below;

    bool operator==(const FamilyInterval&) const = default;
};

// All counts are integers, so equality of tables is plain field equality.
// `length` pins the bit length: blocks never see zeros before the first
// one, and two strings differing only there must not compare equal.
struct StatisticsTable {
    std::int64_t length = 0;
    std::int64_t ones = 0;
    int n = 0;
    int n0 = 0;
    RedCapMode red_cap_mode = RedCapMode::PowersOfTwo;
    FamilyMode family_mode = FamilyMode::Exact;
    std::vector<ScaleRow> scales;       // m = n0..n, ascending
    std::vector<FamilyInterval> family;  // pairwise disjoint, ascending

    bool operator==(const StatisticsTable&) const = default;
};

namespace detail {

// Prefix potentials under which [x,y] has too few zeros iff F[y] < F[x-1]
// and too many iff H[y] > H[x-1], for the band (1 +- eps)|I|.
struct ImbalancePotentials {
    std::vector<BigInt> F, H;

    static ImbalancePotentials build(const BitString& w, const Rational& eps) {
        const std::int64_t L = w.ones();
        const BigInt a = numerator(eps), b = denominator(eps);
        ImbalancePotentials pot;
        pot.F.assign(static_cast<std::size_t>(L) + 1, BigInt(0));
        pot.H.assign(static_cast<std::size_t>(L) + 1, BigInt(0));
        BigInt zeros(0);
        for (std::int64_t k = 1; k <= L; ++k) {
            zeros += w.zeros_in({k, k});
            BigInt bz = b * zeros;
            pot.F[static_cast<std::size_t>(k)] = bz - (b - a) * k;
            pot.H[static_cast<std::size_t>(k)] = bz - (b + a) * k;
        }
        return pot;
    }

    bool imbalanced(std::int64_t x, std::int64_t y) const {
        const auto px = static_cast<std::size_t>(x - 1);
        const auto py = static_cast<std::size_t>(y);
        return F[py] < F[px] || H[py] > H[px];
    }
};

constexpr std::int64_t kExactFamilyLimit = std::int64_t{1} << 12;

// Exact maximum-mass family by weighted interval scheduling over all
// imbalanced intervals of size >= msize, then the lexicographically
// smallest optimal family: walk left to right and take the earliest
// feasible interval with the smallest right endpoint that preserves the
// optimum of the remaining suffix.
inline std::vector<OnesInterval> exact_family(const BitString& w,
                                              std::int64_t msize,
                                              const Rational& eps) {
    const std::int64_t L = w.ones();
    const ImbalancePotentials pot = ImbalancePotentials::build(w, eps);
    std::vector<std::int64_t> best(static_cast<std::size_t>(L) + 2, 0);
    for (std::int64_t x = L; x >= 1; --x) {
        std::int64_t here = best[static_cast<std::size_t>(x) + 1];
        for (std::int64_t y = x + msize - 1; y <= L; ++y)
            if (pot.imbalanced(x, y))
                here = std::max(here,
                                y - x + 1 + best[static_cast<std::size_t>(y) + 1]);
        best[static_cast<std::size_t>(x)] = here;
    }
    std::vector<OnesInterval> out;
    std::int64_t x = 1;
    while (x <= L) {
        const std::int64_t target = best[static_cast<std::size_t>(x)];
        if (target == 0) break;
        bool took = false;
        for (std::int64_t y = x + msize - 1; y <= L; ++y) {
            if (pot.imbalanced(x, y) &&
                y - x + 1 + best[static_cast<std::size_t>(y) + 1] == target) {
                out.push_back({x, y});
                x = y + 1;
                took = true;
                break;
            }
        }
        if (!took) ++x;
    }
    return out;
}

// Greedy fallback for long strings: repeatedly take the leftmost start that
// admits an imbalanced interval of size >= msize, extended to its rightmost
// imbalanced endpoint. Deterministic and documented, not optimal.
inline std::vector<OnesInterval> greedy_family(const BitString& w,
                                               std::int64_t msize,
                                               const Rational& eps) {
    const std::int64_t L = w.ones();
    const ImbalancePotentials pot = ImbalancePotentials::build(w, eps);
    const std::size_t sz = static_cast<std::size_t>(L) + 1;
    std::vector<BigInt> minF(sz), maxH(sz);
    minF[sz - 1] = pot.F[sz - 1];
    maxH[sz - 1] = pot.H[sz - 1];
    for (std::size_t k = sz - 1; k-- > 1;) {
        minF[k] = std::min(pot.F[k], minF[k + 1]);
        maxH[k] = std::max(pot.H[k], maxH[k + 1]);
    }
    std::vector<OnesInterval> out;
    std::int64_t x = 1;
    while (x + msize - 1 <= L) {
        const std::size_t y0 = static_cast<std::size_t>(x + msize - 1);
        const std::size_t px = static_cast<std::size_t>(x - 1);
        if (minF[y0] >= pot.F[px] && maxH[y0] <= pot.H[px]) {
            ++x;
            continue;
        }
        std::int64_t y = L;
        while (!pot.imbalanced(x, y)) --y;
        out.push_back({x, y});
        x = y + 1;
    }
    return out;
}

// The reversal of one dyadic block, as its own string. Reversal keeps the
// leading one and reverses the gap list, so for a parent with exactly B*2^m
// ones this equals block B+1-i of the reversed parent; computing it per
// block skips reversing the whole string. The trailing dyadic_block is a
// no-op reshape that asserts the ones count.
inline BitString reversed_block(const BitString& w, int m, std::int64_t i) {
    return w.dyadic_block(m, i).reversed().dyadic_block(m, 1);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

// The table of a string with ones count 2^n: per dyadic block at every
// scale m in [n0, n] the zero count and the block's type (when one holds),
// plus a maximal family of disjoint imbalanced intervals of size >= 2^n0.
// Types use the power-of-two Red cap so table construction stays within a
// log factor of linear per scale.
inline StatisticsTable statistics_table(const BitString& w, const ParamSet& p) {
    const std::int64_t L = w.ones();
    if (L < 1 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        throw PreconditionError("statistics need a power-of-two ones count, got " +
                                std::to_string(L));
    if (!w.starts_with_one())
        throw PreconditionError("statistics need a string starting with a one");
    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;

    StatisticsTable T;
    T.length = w.length();
    T.ones = L;
    T.n = n;
    T.n0 = p.n0(n);
    T.red_cap_mode = RedCapMode::PowersOfTwo;
    for (int m = T.n0; m <= n; ++m) {
        ScaleRow row;
        row.m = m;
        const std::int64_t blocks = std::int64_t{1} << (n - m);
        row.blocks.reserve(static_cast<std::size_t>(blocks));
        for (std::int64_t i = 1; i <= blocks; ++i) {
            BitString block = w.dyadic_block(m, i);
            row.blocks.push_back({block.ones(), block.zeros(),
                                  classify(block, p, RedCapMode::PowersOfTwo)});
        }
        T.scales.push_back(std::move(row));
    }

    const std::int64_t msize = std::int64_t{1} << T.n0;
    T.family_mode = L <= detail::kExactFamilyLimit ? FamilyMode::Exact
                                                   : FamilyMode::Greedy;
    std::vector<OnesInterval> intervals =
        T.family_mode == FamilyMode::Exact
            ? detail::exact_family(w, msize, p.epsilon)
            : detail::greedy_family(w, msize, p.epsilon);
    for (const OnesInterval& I : intervals) {
        FamilyInterval f;
        f.interval = I;
        const BitRange r = w.interval_bits(I);
        f.bit_lo = r.begin;
        f.bit_hi = r.end - 1;
        f.zeros = w.zeros_in(I);
        const auto side = imbalance_side(f.zeros, I.size(), p.epsilon);
        if (!side)
            throw PreconditionError("family interval failed to re-verify");
        f.side = *side;
        T.family.push_back(f);
    }
    return T;
}

inline bool tables_equal(const StatisticsTable& a, const StatisticsTable& b) {
    return a == b;
}

// Stable text form used for hashing and the CLI reports; fixed field order,
// every count in decimal.
inline std::string canonical_serialization(const StatisticsTable& T) {
    std::string out = "v1;len=" + std::to_string(T.length) +
                      ";ones=" + std::to_string(T.ones) +
                      ";n=" + std::to_string(T.n) +
                      ";n0=" + std::to_string(T.n0) +
                      ";red=" + red_cap_mode_name(T.red_cap_mode) +
                      ";family=" + family_mode_name(T.family_mode);
    for (const ScaleRow& row : T.scales) {
        out += ";m" + std::to_string(row.m) + "=";
        for (const BlockStat& b : row.blocks) {
            out += "(" + std::to_string(b.ones) + "," + std::to_string(b.zeros) +
                   ",";
            out += b.type ? type_name(*b.type) : std::string("-");
            out += ")";
        }
    }
    out += ";I=";
    for (const FamilyInterval& f : T.family)
        out += "[" + std::to_string(f.interval.lo) + "," +
               std::to_string(f.interval.hi) + ";" + std::to_string(f.bit_lo) +
               "," + std::to_string(f.bit_hi) + ";" + std::to_string(f.zeros) +
               ";" + side_name(f.side) + "]";
    return out;
}

// The pigeonhole key: ones count plus the tables of the leading dyadic
// block (ones count rounded down to a power of two) and of its reversal.
// Strings with no ones carry no table; see find_collision for how they are
// compared.
struct CollisionKey {
    std::int64_t ones = 0;
    std::optional<StatisticsTable> forward;
    std::optional<StatisticsTable> reversed;

    bool operator==(const CollisionKey&) const = default;
};

inline CollisionKey collision_key(const BitString& w, const ParamSet& p) {
    CollisionKey key;
    key.ones = w.ones();
    if (key.ones < 1) return key;
    const int n = std::bit_width(static_cast<std::uint64_t>(key.ones)) - 1;
    BitString head = w.dyadic_block(n, 1);
    key.forward = statistics_table(head, p);
    // The reversal of the head starts with the head's trailing zeros; its
    // leading dyadic block strips them (their count still shows in the
    // forward table's cells).
    key.reversed = statistics_table(head.reversed().dyadic_block(n, 1), p);
    return key;
}

struct CollisionReport {
    // First pair (i, j), i < j, of code words sharing a key, in input order
    // of j then i.
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    std::size_t distinct_keys = 0;
    // log2 of a crude upper bound on the number of distinct keys for the
    // longest word seen: reported for context, never asserted.
    double log2_key_bound = 0.0;
};

inline CollisionReport find_collision(const std::vector<BitString>& code,
                                      const ParamSet& p) {
    CollisionReport rep;
    std::vector<std::string> keys;
    keys.reserve(code.size());
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    std::int64_t max_len = 0, max_ones = 0;
    for (std::size_t j = 0; j < code.size(); ++j) {
        const BitString& w = code[j];
        max_len = std::max(max_len, w.length());
        max_ones = std::max(max_ones, w.ones());
        std::string key;
        if (w.ones() < 1) {
            // No leading block to tabulate: only an identical all-zero
            // string may collide.
            key = "L=0;len=" + std::to_string(w.length());
        } else {
            CollisionKey k = collision_key(w, p);
            key = "L=" + std::to_string(k.ones) +
                  ";F{" + canonical_serialization(*k.forward) + "};R{" +
                  canonical_serialization(*k.reversed) + "}";
        }
        auto& bucket = buckets[detail::fnv1a(key)];
        bool dup = false;
        for (std::size_t i : bucket) {
            if (keys[i] == key) {
                if (!rep.pair) rep.pair = {i, j};
                dup = true;
                break;
            }
        }
        if (!dup) ++rep.distinct_keys;
        bucket.push_back(j);
        keys.push_back(std::move(key));
    }

    // Count the table's degrees of freedom for the longest word: cells at
    // scales n0..n carry a zero count and a type tag, the family at most
    // 2^(n-n0) intervals of four coordinates, all doubled for the two
    // orientations.
    if (max_ones >= 1) {
        const int n = std::bit_width(static_cast<std::uint64_t>(max_ones)) - 1;
        const int n0 = p.n0(n);
        const double cells = std::ldexp(2.0, n - n0) - 1.0;
        const double per_cell =
            std::log2(static_cast<double>(max_len) + 2.0) + 5.0;
        const double fam_slots = std::ldexp(1.0, n - n0);
        const double per_interval =
            4.0 * std::log2(static_cast<double>(max_len) + 2.0);
        rep.log2_key_bound = 2.0 * (cells * per_cell + fam_slots * per_interval) +
                             std::log2(static_cast<double>(max_len) + 2.0);
    }
    return rep;
}

struct PipelineTrace {
    // Violated hypotheses, reported rather than thrown: the construction
    // still runs and its output is still validated.
    std::vector<std::string> preconditions;
    bool trivial_equal = false;
    int n = 0;
    int n0 = 0;
    std::int64_t heavy_threshold = 0;
    std::array<std::int64_t, 4> heavy_counts{};  // s, t, rev(s), rev(t)
    std::string heavy_route;                     // which string fired, if any
    std::optional<int> m_star;
    std::int64_t block_count = 0;
    std::array<std::int64_t, 3> type_counts{};      // imbalanced, green, blue-yellow
    std::array<std::int64_t, 3> rev_type_counts{};  // same, for reversed blocks
    std::vector<std::int64_t> chosen;               // blocks handed to the strategy
    std::string case_label = "fallback-naive";
    std::vector<std::string> notes;
};

struct PipelineResult {
    Matching matching;
    PipelineTrace trace;
    std::optional<StrategyCertificate> certificate;
};

// End-to-end construction for a pair agreeing on statistics. Walks the
// case analysis in a fixed order and returns the first construction whose
// hypotheses hold, falling back to the shifted-ones baseline when none do.
// Hypothesis violations (including table disagreement) are reported in the
// trace, never thrown: the returned matching is valid regardless.
inline PipelineResult pipeline_lcs(const BitString& s, const BitString& t,
                                   const ParamSet& p,
                                   std::int64_t sweep_cap = std::int64_t{1} << 16,
                                   std::uint64_t seed = 0x05C11u) {
    PipelineResult out;
    PipelineTrace& tr = out.trace;
    if (!s.starts_with_one())
        tr.preconditions.push_back("s does not start with a one");
    if (!t.starts_with_one())
        tr.preconditions.push_back("t does not start with a one");

    if (s == t) {
        tr.trivial_equal = true;
        tr.case_label = "identical-strings";
        out.matching.pairs.reserve(static_cast<std::size_t>(s.length()));
        for (std::int64_t k = 1; k <= s.length(); ++k)
            out.matching.pairs.push_back({k, k});
        return out;
    }

    const std::int64_t L = s.ones();
    const bool dyadic = L >= 1 &&
                        std::has_single_bit(static_cast<std::uint64_t>(L)) &&
                        t.ones() == L;
    if (!dyadic) {
        tr.preconditions.push_back("ones counts must be equal powers of two");
        out.matching = naive_match(s, t, 0);
        tr.notes.push_back(
            "dyadic structure unavailable; returning the shifted-ones baseline");
        return out;
    }

    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
    tr.n = n;
    tr.n0 = p.n0(n);
    tr.heavy_threshold = std::int64_t{1} << tr.n0;

    // Tables are taken over leading dyadic blocks: for the forward strings
    // that is the whole string (ones count is exactly 2^n), and for the
    // reversals it strips the leading zeros inherited from the forward
    // trailing gap, whose size the forward cells already record.
    const BitString rs = s.reversed(), rt = t.reversed();
    if (!tables_equal(statistics_table(s.dyadic_block(n, 1), p),
                      statistics_table(t.dyadic_block(n, 1), p)))
        tr.preconditions.push_back("strings disagree on statistics");
    if (!tables_equal(statistics_table(rs.dyadic_block(n, 1), p),
                      statistics_table(rt.dyadic_block(n, 1), p)))
        tr.preconditions.push_back("reversed strings disagree on statistics");

    // A mass of ones whose largest Blue flag is long: cover them greedily
    // by their flag windows and walk the resulting interval family. The
    // family's own mass must clear the walk's hypothesis, which the count
    // alone does not imply at these parameters.
    const std::array<const BitString*, 4> flag_sources{&s, &t, &rs, &rt};
    const std::array<const char*, 4> source_names{"s", "t", "rev(s)", "rev(t)"};
    int fired = -1;
    std::vector<OnesInterval> heavy_family;
    for (int idx = 0; idx < 4; ++idx) {
        const FlagProfile prof = b_profile(*flag_sources[idx], p);
        std::int64_t count = 0;
        for (std::int64_t v : prof.b)
            if (v >= tr.heavy_threshold) ++count;
        tr.heavy_counts[static_cast<std::size_t>(idx)] = count;
        if (fired >= 0 || Rational(count) < p.gamma * p.gamma * L) continue;
        std::vector<OnesInterval> fam;
        std::int64_t mass = 0;
        std::int64_t i = 1;
        while (i <= L) {
            const std::int64_t b = prof.at(i);
            if (b >= tr.heavy_threshold) {
                fam.push_back({i, std::min(i + b - 1, L)});
                mass += fam.back().size();
                i += b;
            } else {
                ++i;
            }
        }
        if (Rational(10 * mass) < p.eps5() * L) {
            tr.notes.push_back(std::string("heavy flags on ") +
                               source_names[idx] +
                               " cover too little mass; continuing");
            continue;
        }
        fired = idx;
        heavy_family = std::move(fam);
    }
    if (fired >= 0) {
        tr.heavy_route = source_names[fired];
        tr.case_label = "heavy-flag-family";
        const bool on_rev = fired >= 2;
        StrategyResult r = imbalanced_strategy(on_rev ? rs : s, on_rev ? rt : t,
                                               heavy_family, p);
        out.certificate = std::move(r.certificate);
        if (on_rev) {
            out.matching = transport_rev(r.matching, s.length(), t.length());
            tr.notes.push_back("construction ran on the reversed pair");
        } else {
            out.matching = std::move(r.matching);
        }
        return out;
    }

    // Regular scale: the largest m below n at which all four strings split
    // into almost entirely flag-balanced blocks.
    const int m_lo = std::max(tr.n0, 1);
    std::optional<int> m_star;
    if (m_lo <= n - 1) {
        std::array<BalanceScanResult, 4> scans;
        for (int k = 0; k < 4; ++k)
            scans[static_cast<std::size_t>(k)] =
                balance_scan(*flag_sources[static_cast<std::size_t>(k)],
                             p.six_gamma(), p, BalanceVariant::Substring, m_lo);
        std::string qualifying;
        for (int m = m_lo; m <= n - 1; ++m) {
            bool ok = true;
            for (const BalanceScanResult& scan : scans) {
                const BalanceReport& report =
                    scan.reports[static_cast<std::size_t>(m - scan.m_lo)];
                if (Rational(report.unbalanced) >
                    3 * p.gamma * (std::int64_t{1} << (n - m))) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                m_star = m;
                qualifying += (qualifying.empty() ? "" : " ") + std::to_string(m);
            }
        }
        if (m_star)
            tr.notes.push_back("balanced scales: " + qualifying +
                               "; taking the largest");
    } else {
        tr.notes.push_back("no interior scale to scan");
    }
    if (!m_star) {
        out.matching = naive_match(s, t, 0);
        tr.notes.push_back(
            "no scale passed the balance scan; returning the shifted-ones "
            "baseline");
        return out;
    }
    tr.m_star = m_star;

    const int ms = *m_star;
    const std::int64_t B = std::int64_t{1} << (n - ms);
    tr.block_count = B;
    std::vector<std::optional<StringType>> fwd_type(static_cast<std::size_t>(B));
    std::vector<std::optional<StringType>> rev_type(static_cast<std::size_t>(B));
    auto bump = [](std::array<std::int64_t, 3>& counts,
                   const std::optional<StringType>& ty) {
        if (ty) ++counts[static_cast<std::size_t>(ty->kind)];
    };
    for (std::int64_t i = 1; i <= B; ++i) {
        // Reversed types are per block — reverse the block itself, not the
        // whole string — and stay indexed by the original i.
        fwd_type[static_cast<std::size_t>(i - 1)] =
            classify(s.dyadic_block(ms, i), p, RedCapMode::PowersOfTwo);
        rev_type[static_cast<std::size_t>(i - 1)] = classify(
            detail::reversed_block(s, ms, i), p, RedCapMode::PowersOfTwo);
        bump(tr.type_counts, fwd_type[static_cast<std::size_t>(i - 1)]);
        bump(tr.rev_type_counts, rev_type[static_cast<std::size_t>(i - 1)]);
    }

    auto is_kind = [](const std::optional<StringType>& ty, StringType::Kind k) {
        return ty && ty->kind == k;
    };
    auto finish = [&](StrategyResult&& r, bool on_rev) {
        out.certificate = std::move(r.certificate);
        if (on_rev) {
            out.matching = transport_rev(r.matching, s.length(), t.length());
            tr.notes.push_back("construction ran on the reversed pair");
        } else {
            out.matching = std::move(r.matching);
        }
    };

    // Reversal maps an imbalanced witness interval to one with the same
    // size and zero count, so a block and its reversal are imbalanced
    // together: a separate reversed branch for this case cannot fire.
    if (tr.type_counts[0] != tr.rev_type_counts[0])
        tr.notes.push_back("imbalanced block counts differ between orientations");
    if (10 * tr.type_counts[0] >= B) {
        std::vector<OnesInterval> family;
        for (std::int64_t i = 1; i <= B; ++i) {
            if (!is_kind(fwd_type[static_cast<std::size_t>(i - 1)],
                         StringType::Kind::Imbalanced))
                continue;
            const auto cert = find_imbalanced_interval(
                s.dyadic_block(ms, i),
                detail::imbalance_size_floor(p, std::int64_t{1} << ms),
                p.epsilon);
            if (!cert) {
                tr.notes.push_back("block " + std::to_string(i) +
                                   " lost its witness interval");
                continue;
            }
            const std::int64_t base = (i - 1) << ms;
            family.push_back({base + cert->interval.lo, base + cert->interval.hi});
            tr.chosen.push_back(i);
        }
        tr.case_label = "imbalanced-block-family";
        finish(imbalanced_strategy(s, t, family, p), false);
        return out;
    }

    if (10 * tr.type_counts[1] >= B) {
        std::vector<std::int64_t> Z, ells;
        for (std::int64_t i = 1; i <= B; ++i) {
            const auto& ty = fwd_type[static_cast<std::size_t>(i - 1)];
            if (!is_kind(ty, StringType::Kind::Green)) continue;
            Z.push_back(i);
            ells.push_back(ty->ell);
        }
        tr.chosen = Z;
        tr.case_label = "green-blocks";
        finish(green_strategy(s, t, ms, Z, ells, p, sweep_cap, seed), false);
        return out;
    }

    if (10 * tr.rev_type_counts[1] >= B) {
        // Green blocks of the reversed pair: block i of s is block B+1-i of
        // rev(s), so the strategy runs on the reversed strings and the
        // matching is transported back.
        std::vector<std::int64_t> Z, ells;
        for (std::int64_t j = 1; j <= B; ++j) {
            const auto& ty = rev_type[static_cast<std::size_t>(B - j)];
            if (!is_kind(ty, StringType::Kind::Green)) continue;
            Z.push_back(j);
            ells.push_back(ty->ell);
        }
        tr.chosen = Z;
        tr.case_label = "green-blocks-reversed";
        finish(green_strategy(rs, rt, ms, Z, ells, p, sweep_cap, seed), true);
        return out;
    }

    if (5 * tr.type_counts[2] >= 4 * B && 5 * tr.rev_type_counts[2] >= 4 * B) {
        // Pair neighbouring blocks: the odd block forward and the even
        // block reversed must both carry the long-flag type and all four
        // member strings must be flag-balanced. Each pair's flag scale is
        // taken from its forward member; the strategy re-checks the
        // reversed member at that scale and reports any gap.
        std::vector<std::int64_t> Z;
        std::vector<int> flag_scales;
        for (std::int64_t i = 1; 2 * i <= B; ++i) {
            const auto& f = fwd_type[static_cast<std::size_t>(2 * i - 2)];
            const auto& r2 = rev_type[static_cast<std::size_t>(2 * i - 1)];
            if (!is_kind(f, StringType::Kind::BlueYellow) ||
                !is_kind(r2, StringType::Kind::BlueYellow))
                continue;
            if (flag_balance_discrepancy(s.dyadic_block(ms, 2 * i - 1), p) >
                    p.six_gamma() ||
                flag_balance_discrepancy(t.dyadic_block(ms, 2 * i - 1), p) >
                    p.six_gamma() ||
                flag_balance_discrepancy(detail::reversed_block(s, ms, 2 * i),
                                         p) > p.six_gamma() ||
                flag_balance_discrepancy(detail::reversed_block(t, ms, 2 * i),
                                         p) > p.six_gamma())
                continue;
            Z.push_back(i);
            flag_scales.push_back(f->m);
        }
        tr.chosen = Z;
        tr.case_label = "blue-yellow-pairs";
        if (Z.empty()) tr.notes.push_back("pair filter left no blocks");
        finish(blue_yellow_strategy(s, t, ms, Z, flag_scales, p, sweep_cap, seed),
               false);
        return out;
    }

    out.matching = naive_match(s, t, 0);
    tr.notes.push_back(
        "no block-type family was large enough; returning the shifted-ones "
        "baseline");
    return out;
}

}  // namespace oscil
