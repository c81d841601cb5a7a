#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "oscil/matching.hpp"

namespace oscil {

struct LcsResult {
    std::int64_t length = 0;
    Matching witness;
};

// Exponential reference, deliberately memoless: the one implementation
// simple enough to trust by inspection.
inline std::int64_t lcs_naive(const BitString& s, const BitString& t) {
    if (s.length() > 14 || t.length() > 14)
        throw PreconditionError("naive recursion capped at length 14");
    std::string a = s.to_text(), b = t.to_text();
    auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::int64_t {
        if (i == a.size() || j == b.size()) return 0;
        if (a[i] == b[j]) return 1 + self(self, i + 1, j + 1);
        return std::max(self(self, i + 1, j), self(self, i, j + 1));
    };
    return rec(rec, 0, 0);
}

namespace detail {

// forward DP row: row[j] = LCS(s[0..n), t[0..j))
inline void lcs_forward_row(const char* s, std::int64_t n, const char* t,
                            std::int64_t m, std::vector<std::int32_t>& row,
                            std::vector<std::int32_t>& scratch) {
    row.assign(static_cast<std::size_t>(m + 1), 0);
    scratch.assign(static_cast<std::size_t>(m + 1), 0);
    for (std::int64_t i = 1; i <= n; ++i) {
        row.swap(scratch);
        row[0] = 0;
        const char c = s[i - 1];
        for (std::int64_t j = 1; j <= m; ++j)
            row[static_cast<std::size_t>(j)] =
                c == t[j - 1]
                    ? scratch[static_cast<std::size_t>(j - 1)] + 1
                    : std::max(scratch[static_cast<std::size_t>(j)],
                               row[static_cast<std::size_t>(j - 1)]);
    }
}

// backward DP row: row[j] = LCS(s[0..n) reversed view, i.e. LCS of the
// suffixes) -- row[j] = LCS(s, t[j..m))
inline void lcs_backward_row(const char* s, std::int64_t n, const char* t,
                             std::int64_t m, std::vector<std::int32_t>& row,
                             std::vector<std::int32_t>& scratch) {
    row.assign(static_cast<std::size_t>(m + 1), 0);
    scratch.assign(static_cast<std::size_t>(m + 1), 0);
    for (std::int64_t i = n - 1; i >= 0; --i) {
        row.swap(scratch);
        row[static_cast<std::size_t>(m)] = 0;
        const char c = s[i];
        for (std::int64_t j = m - 1; j >= 0; --j)
            row[static_cast<std::size_t>(j)] =
                c == t[j]
                    ? scratch[static_cast<std::size_t>(j + 1)] + 1
                    : std::max(scratch[static_cast<std::size_t>(j)],
                               row[static_cast<std::size_t>(j + 1)]);
    }
}

// Full-table leaf: suffix DP plus greedy extraction of the
// lexicographically earliest maximum matching.
inline void lcs_leaf(const char* s, std::int64_t n, const char* t,
                     std::int64_t m, std::int64_t s_off, std::int64_t t_off,
                     Matching& out) {
    if (n == 0 || m == 0) return;
    const std::size_t stride = static_cast<std::size_t>(m + 1);
    std::vector<std::uint16_t> D(static_cast<std::size_t>(n + 1) * stride, 0);
    auto at = [&](std::int64_t i, std::int64_t j) -> std::uint16_t& {
        return D[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)];
    };
    for (std::int64_t i = n - 1; i >= 0; --i)
        for (std::int64_t j = m - 1; j >= 0; --j)
            at(i, j) = s[i] == t[j]
                           ? static_cast<std::uint16_t>(at(i + 1, j + 1) + 1)
                           : std::max(at(i + 1, j), at(i, j + 1));

    // nxt[c][j]: first position >= j where t has character c, else m
    std::vector<std::int32_t> nxt[2];
    for (int c = 0; c < 2; ++c) {
        nxt[c].assign(stride, static_cast<std::int32_t>(m));
        for (std::int64_t j = m - 1; j >= 0; --j)
            nxt[c][static_cast<std::size_t>(j)] =
                t[j] == '0' + c ? static_cast<std::int32_t>(j)
                                : nxt[c][static_cast<std::size_t>(j + 1)];
    }

    std::int64_t i = 0, j = 0;
    std::int64_t r = at(0, 0);
    while (r > 0) {
        std::int64_t b = nxt[s[i] - '0'][static_cast<std::size_t>(j)];
        if (b < m && at(i + 1, b + 1) == r - 1) {
            out.pairs.emplace_back(s_off + i + 1, t_off + b + 1);
            ++i;
            j = b + 1;
            --r;
        } else {
            ++i;  // row unusable: its first viable occurrence is already too late
        }
    }
}

inline void hirschberg(const char* s, std::int64_t n, const char* t,
                       std::int64_t m, std::int64_t s_off, std::int64_t t_off,
                       std::int64_t leaf_cells, Matching& out) {
    if (n == 0 || m == 0) return;
    if (m == 1 || n == 1) {
        // single match, earliest position
        if (n == 1) {
            for (std::int64_t j = 0; j < m; ++j)
                if (t[j] == s[0]) {
                    out.pairs.emplace_back(s_off + 1, t_off + j + 1);
                    return;
                }
        } else {
            for (std::int64_t i = 0; i < n; ++i)
                if (s[i] == t[0]) {
                    out.pairs.emplace_back(s_off + i + 1, t_off + 1);
                    return;
                }
        }
        return;
    }
    if ((n + 1) * (m + 1) <= leaf_cells) {
        lcs_leaf(s, n, t, m, s_off, t_off, out);
        return;
    }
    std::int64_t k = n / 2;
    std::vector<std::int32_t> fwd, bwd, scratch;
    lcs_forward_row(s, k, t, m, fwd, scratch);
    lcs_backward_row(s + k, n - k, t, m, bwd, scratch);
    std::int64_t best_j = 0;
    std::int32_t best = -1;
    for (std::int64_t j = 0; j <= m; ++j) {
        std::int32_t v = fwd[static_cast<std::size_t>(j)] +
                         bwd[static_cast<std::size_t>(j)];
        if (v > best) {
            best = v;
            best_j = j;
        }
    }
    fwd.clear();
    fwd.shrink_to_fit();
    bwd.clear();
    bwd.shrink_to_fit();
    scratch.clear();
    scratch.shrink_to_fit();
    hirschberg(s, k, t, best_j, s_off, t_off, leaf_cells, out);
    hirschberg(s + k, n - k, t + best_j, m - best_j, s_off + k, t_off + best_j,
               leaf_cells, out);
}

}  // namespace detail

// Exact LCS with a witness, linear space above the leaf size. The witness
// is the lexicographically earliest optimal pair list whenever the whole
// problem fits in one leaf table; larger instances are deterministic but
// splits may commit to a different optimal witness.
inline LcsResult lcs_exact(const BitString& s, const BitString& t,
                           std::int64_t budget_cells = std::int64_t{1} << 30,
                           std::int64_t leaf_cells = std::int64_t{1} << 22) {
    if (s.length() > 0 && t.length() > 0 && s.length() > budget_cells / t.length())
        throw ResourceError("lcs_exact cell budget exceeded: " +
                            std::to_string(s.length()) + " x " +
                            std::to_string(t.length()));
    std::string a = s.to_text(), b = t.to_text();
    LcsResult res;
    detail::hirschberg(a.data(), s.length(), b.data(), t.length(), 0, 0,
                       leaf_cells, res.witness);
    res.length = res.witness.size();
    return res;
}

// Independent length-only route: the bit-vector LCS kernel
// V' = (V + (V & M)) | (V & ~M) over 64-bit words, M the match mask of the
// current character of t against s. LCS = zeros left in V.
inline std::int64_t lcs_fast(const BitString& s, const BitString& t) {
    std::int64_t n = s.length();
    if (n == 0 || t.length() == 0) return 0;
    std::size_t W = static_cast<std::size_t>((n + 63) / 64);
    std::uint64_t top_mask =
        (n & 63) ? (std::uint64_t{1} << (n & 63)) - 1 : ~std::uint64_t{0};

    std::vector<std::uint64_t> eq1(s.words().begin(), s.words().begin() + W);
    std::vector<std::uint64_t> eq0(W);
    for (std::size_t w = 0; w < W; ++w) eq0[w] = ~eq1[w];
    eq0[W - 1] &= top_mask;
    eq1[W - 1] &= top_mask;

    std::vector<std::uint64_t> V(W, ~std::uint64_t{0});
    V[W - 1] &= top_mask;
    for (std::int64_t j = 1; j <= t.length(); ++j) {
        const std::vector<std::uint64_t>& M = t.bit(j) ? eq1 : eq0;
        std::uint64_t carry = 0;
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t u = V[w] & M[w];
            unsigned __int128 sum =
                static_cast<unsigned __int128>(V[w]) + u + carry;
            carry = static_cast<std::uint64_t>(sum >> 64);
            V[w] = static_cast<std::uint64_t>(sum) | (V[w] & ~M[w]);
        }
        V[W - 1] &= top_mask;
    }
    std::int64_t ones = 0;
    for (std::size_t w = 0; w < W; ++w) ones += std::popcount(V[w]);
    return n - ones;
}

}  // namespace oscil
