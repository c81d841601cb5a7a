#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/errors.hpp"
#include "oscil/oracle.hpp"
#include "oscil/rational.hpp"

namespace oscil {

// A set of equal-length strings plus enough metadata to regenerate it.
struct Code {
    std::vector<BitString> words;
    std::string family;
    std::vector<std::int64_t> params;
    std::uint64_t seed = 0;
    std::string generator;  // named RNG recipe, empty for derived families

    std::int64_t word_length() const {
        return words.empty() ? 0 : words.front().length();
    }
};

namespace detail {

inline void check_code_uniform(const Code& c) {
    for (const BitString& w : c.words)
        if (w.length() != c.word_length())
            throw PreconditionError("code words must share one length");
}

// MSB-first consumption of 64-bit draws; each call starts a fresh draw.
inline BitString draw_bits(std::mt19937_64& rng, std::int64_t n) {
    BitString::Builder b(n);
    std::uint64_t buf = 0;
    int avail = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        if (avail == 0) {
            buf = rng();
            avail = 64;
        }
        b.push((buf >> 63 & 1) != 0);
        buf <<= 1;
        --avail;
    }
    return b.finish();
}

}  // namespace detail

// Phase i of the oscillation family: 2^{k-i-1} periods of 1^{2^i} 0^{2^i},
// total length 2^k.
inline BitString bukh_ma_phase(int i, int k) {
    if (k < 1 || i < 0 || i >= k)
        throw PreconditionError("phase index out of range");
    if (k > 30) throw ResourceError("oscillation exponent too large");
    const std::int64_t run = std::int64_t{1} << i;
    const std::int64_t reps = std::int64_t{1} << (k - i - 1);
    BitString::Builder b(std::int64_t{1} << k);
    for (std::int64_t r = 0; r < reps; ++r) {
        b.push_run(true, run);
        b.push_run(false, run);
    }
    return b.finish();
}

struct OscillationFamily {
    BitString concatenated;  // all phases joined, length k * 2^k
    Code periods;            // the k phase strings, each of length 2^k
};

inline OscillationFamily bukh_ma_code(int k) {
    if (k < 1) throw PreconditionError("exponent must be positive");
    if (k > 26) throw ResourceError("oscillation exponent too large");
    OscillationFamily fam;
    fam.periods.family = "oscillation-periods";
    fam.periods.params = {k};
    BitString::Builder cat(std::int64_t{k} << k);
    for (int i = 0; i < k; ++i) {
        BitString phase = bukh_ma_phase(i, k);
        cat.append(phase);
        fam.periods.words.push_back(std::move(phase));
    }
    fam.concatenated = cat.finish();
    return fam;
}

inline Code random_code(std::int64_t length, std::int64_t size,
                        std::uint64_t seed) {
    if (length < 1 || size < 1)
        throw PreconditionError("code dimensions must be positive");
    if (length > (std::int64_t{1} << 32) || size > (std::int64_t{1} << 20))
        throw ResourceError("random code too large");
    Code c;
    c.family = "random-uniform";
    c.params = {length, size};
    c.seed = seed;
    c.generator = "mt19937_64-msb";
    std::mt19937_64 rng(seed);
    c.words.reserve(static_cast<std::size_t>(size));
    for (std::int64_t j = 0; j < size; ++j)
        c.words.push_back(detail::draw_bits(rng, length));
    return c;
}

// One row of a pairwise sweep; surplus is measured against the half-length
// floor every balanced pair is guaranteed to clear.
struct PairMeasurement {
    std::size_t a = 0;
    std::size_t b = 0;
    std::int64_t lcs = 0;
    std::int64_t surplus = 0;  // lcs - word_length/2
};

inline std::vector<PairMeasurement> measure_pairs(const Code& c) {
    detail::check_code_uniform(c);
    const std::int64_t half = c.word_length() / 2;
    std::vector<PairMeasurement> rows;
    rows.reserve(c.words.size() * (c.words.size() - 1) / 2);
    for (std::size_t a = 0; a + 1 < c.words.size(); ++a)
        for (std::size_t b = a + 1; b < c.words.size(); ++b) {
            const std::int64_t v = lcs_fast(c.words[a], c.words[b]);
            rows.push_back({a, b, v, v - half});
        }
    return rows;
}

// Minimum of (|s'|+|t'|)/LCS(s',t') over contiguous substring pairs with
// |s'| >= c|s| and |t'| >= c|t|. Boundaries are bit positions; `end` is
// one past the last bit, as in BitString::slice.
struct SpanResult {
    BitRange s_range{1, 1};
    BitRange t_range{1, 1};
    std::int64_t lcs = 0;
    bool unbounded = false;  // every admissible pair has an empty LCS
    Rational ratio;          // zero when unbounded
    Rational floor_c;
    std::int64_t granularity = 1;  // boundary step; 1 means the exact scan
};

namespace detail {

inline std::vector<std::int64_t> grid_points(std::int64_t limit,
                                             std::int64_t step) {
    std::vector<std::int64_t> pts;
    for (std::int64_t p = 1; p <= limit; p += step) pts.push_back(p);
    if (pts.back() != limit) pts.push_back(limit);
    return pts;
}

inline std::int64_t admissible_pairs(const std::vector<std::int64_t>& pts,
                                     std::int64_t min_len) {
    std::int64_t count = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (j < i) j = i;
        while (j < pts.size() && pts[j] - pts[i] + 1 < min_len) ++j;
        count += static_cast<std::int64_t>(pts.size() - j);
    }
    return count;
}

}  // namespace detail

// Exact scan whenever every admissible substring pair fits in the budget;
// otherwise boundaries are restricted to a power-of-two grid (string ends
// always included) and the step is recorded in the result. Ties keep the
// lexicographically earliest (s_begin, s_end, t_begin, t_end).
inline SpanResult span(const BitString& s, const BitString& t,
                       const Rational& floor_c,
                       std::int64_t budget_pairs = std::int64_t{1} << 17) {
    if (floor_c <= 0 || floor_c > 1)
        throw PreconditionError("substring floor must lie in (0, 1]");
    if (s.length() < 1 || t.length() < 1)
        throw PreconditionError("span needs nonempty strings");
    if (budget_pairs < 1) throw ResourceError("span budget exhausted");

    const std::int64_t min_s = ceil64(floor_c * s.length());
    const std::int64_t min_t = ceil64(floor_c * t.length());

    std::int64_t step = 1;
    std::vector<std::int64_t> sp, tp;
    while (true) {
        sp = detail::grid_points(s.length(), step);
        tp = detail::grid_points(t.length(), step);
        const std::int64_t work = detail::admissible_pairs(sp, min_s) *
                                  detail::admissible_pairs(tp, min_t);
        if (work <= budget_pairs) break;
        step *= 2;
    }

    SpanResult best;
    best.floor_c = floor_c;
    best.granularity = step;
    bool have_finite = false, have_any = false;
    for (std::size_t si = 0; si < sp.size(); ++si)
        for (std::size_t sj = si; sj < sp.size(); ++sj) {
            const std::int64_t slen = sp[sj] - sp[si] + 1;
            if (slen < min_s) continue;
            BitString sub_s = s.slice({sp[si], sp[sj] + 1});
            for (std::size_t ti = 0; ti < tp.size(); ++ti)
                for (std::size_t tj = ti; tj < tp.size(); ++tj) {
                    const std::int64_t tlen = tp[tj] - tp[ti] + 1;
                    if (tlen < min_t) continue;
                    const std::int64_t v =
                        lcs_fast(sub_s, t.slice({tp[ti], tp[tj] + 1}));
                    if (v == 0) {
                        if (!have_any) {
                            have_any = true;
                            best.s_range = {sp[si], sp[sj] + 1};
                            best.t_range = {tp[ti], tp[tj] + 1};
                            best.lcs = 0;
                            best.unbounded = true;
                        }
                        continue;
                    }
                    const Rational r(slen + tlen, v);
                    if (!have_finite || r < best.ratio) {
                        have_finite = true;
                        have_any = true;
                        best.s_range = {sp[si], sp[sj] + 1};
                        best.t_range = {tp[ti], tp[tj] + 1};
                        best.lcs = v;
                        best.unbounded = false;
                        best.ratio = r;
                    }
                }
        }
    if (!have_any) throw PreconditionError("no substring pair meets the floor");
    return best;
}

// Seeded Monte-Carlo estimate of E[LCS/n] for uniform pairs. Each trial
// reseeds from (seed, trial), so prefixes of a longer run are bit-identical
// to the shorter run.
struct CsEstimate {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> lcs_values;
    double mean = 0.0;    // of LCS/n
    double stddev = 0.0;  // sample standard deviation of LCS/n
    double stderr_mean = 0.0;
};

inline CsEstimate cs_estimate(std::int64_t n, std::int64_t trials,
                              std::uint64_t seed) {
    if (n < 1 || trials < 1)
        throw PreconditionError("estimate needs a length and trials");
    CsEstimate est;
    est.n = n;
    est.trials = trials;
    est.seed = seed;
    est.lcs_values.reserve(static_cast<std::size_t>(trials));
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial)};
        std::mt19937_64 rng(seq);
        BitString a = detail::draw_bits(rng, n);
        BitString b = detail::draw_bits(rng, n);
        const std::int64_t v = lcs_fast(a, b);
        est.lcs_values.push_back(v);
        const double r = static_cast<double>(v) / static_cast<double>(n);
        sum += r;
        sumsq += r * r;
    }
    const double m = sum / static_cast<double>(trials);
    est.mean = m;
    if (trials > 1) {
        const double var =
            (sumsq - sum * m) / static_cast<double>(trials - 1);
        est.stddev = var > 0 ? std::sqrt(var) : 0.0;
        est.stderr_mean = est.stddev / std::sqrt(static_cast<double>(trials));
    }
    return est;
}

// Restriction of a q-ary code to its best two-symbol subcode: pick the
// symbol pair appearing as "two most frequent" in the most words, keep
// those words' subsequences over the pair, larger symbol becoming one.
// Words whose restriction is shorter than floor(2N/q) are flagged and
// left out; longer restrictions are truncated to that length so the
// output code stays uniform.
struct QaryRestriction {
    Code code;
    int symbol_one = 0;   // larger symbol of the winning pair, mapped to 1
    int symbol_zero = 0;  // smaller symbol, mapped to 0
    std::int64_t target_length = 0;  // floor(2N/q)
    std::vector<std::size_t> sources;  // input index of each output word
    std::vector<std::size_t> flagged_short;
    std::string policy = "truncate-to-floor(2N/q); short words flagged";
};

inline QaryRestriction qary_restrict(const std::vector<std::string>& words,
                                     int q) {
    if (q < 2 || q > 10) throw PreconditionError("alphabet size out of range");
    if (words.empty()) throw PreconditionError("empty code");
    const std::size_t N = words.front().size();
    if (N == 0) throw PreconditionError("empty code words");
    for (const std::string& w : words) {
        if (w.size() != N)
            throw PreconditionError("code words must share one length");
        for (char ch : w)
            if (ch < '0' || ch >= '0' + q)
                throw PreconditionError("symbol outside the alphabet");
    }

    // two most frequent symbols per word: count descending, symbol ascending
    auto top_pair = [q](const std::string& w) {
        std::array<std::int64_t, 10> freq{};
        for (char ch : w) ++freq[static_cast<std::size_t>(ch - '0')];
        int first = 0, second = -1;
        for (int sym = 1; sym < q; ++sym)
            if (freq[static_cast<std::size_t>(sym)] >
                freq[static_cast<std::size_t>(first)])
                first = sym;
        for (int sym = 0; sym < q; ++sym) {
            if (sym == first) continue;
            if (second < 0 || freq[static_cast<std::size_t>(sym)] >
                                  freq[static_cast<std::size_t>(second)])
                second = sym;
        }
        return std::pair<int, int>{std::min(first, second),
                                   std::max(first, second)};
    };

    std::vector<std::pair<int, int>> pairs(words.size());
    std::array<std::array<std::int64_t, 10>, 10> bucket{};
    for (std::size_t k = 0; k < words.size(); ++k) {
        pairs[k] = top_pair(words[k]);
        ++bucket[static_cast<std::size_t>(pairs[k].first)]
                [static_cast<std::size_t>(pairs[k].second)];
    }
    std::pair<int, int> chosen{0, 1};
    std::int64_t most = -1;
    for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b)
            if (bucket[static_cast<std::size_t>(a)]
                      [static_cast<std::size_t>(b)] > most) {
                most = bucket[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(b)];
                chosen = {a, b};
            }

    QaryRestriction out;
    out.symbol_zero = chosen.first;
    out.symbol_one = chosen.second;
    out.target_length = 2 * static_cast<std::int64_t>(N) / q;
    out.code.family = "qary-restriction";
    out.code.params = {q, static_cast<std::int64_t>(N), out.symbol_one,
                       out.symbol_zero};
    const char zero_ch = static_cast<char>('0' + chosen.first);
    const char one_ch = static_cast<char>('0' + chosen.second);
    for (std::size_t k = 0; k < words.size(); ++k) {
        if (pairs[k] != chosen) continue;
        BitString::Builder b(out.target_length);
        std::int64_t kept = 0;
        for (char ch : words[k]) {
            if (kept == out.target_length) break;
            if (ch == one_ch) {
                b.push(true);
                ++kept;
            } else if (ch == zero_ch) {
                b.push(false);
                ++kept;
            }
        }
        if (kept < out.target_length) {
            out.flagged_short.push_back(k);
            continue;
        }
        out.code.words.push_back(b.finish());
        out.sources.push_back(k);
    }
    return out;
}

}  // namespace oscil
