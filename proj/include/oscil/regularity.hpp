#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/flags.hpp"
#include "oscil/params.hpp"

namespace oscil {

// Distribution of b-values over some reference index set: support holds 0
// and powers of two, entries are sorted by value, carry positive mass only,
// and sum to exactly 1.
struct FlagDistribution {
    std::vector<std::pair<std::int64_t, Rational>> mass;

    Rational at(std::int64_t value) const {
        for (const auto& [v, m] : mass)
            if (v == value) return m;
        return Rational(0);
    }
    Rational total() const {
        Rational t(0);
        for (const auto& [v, m] : mass) t += m;
        return t;
    }
    bool operator==(const FlagDistribution&) const = default;
};

namespace detail {

inline FlagDistribution distribution_of(const std::vector<std::int64_t>& b,
                                        std::int64_t lo, std::int64_t hi) {
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t i = lo; i <= hi; ++i)
        ++counts[b[static_cast<std::size_t>(i - 1)]];
    FlagDistribution out;
    std::int64_t size = hi - lo + 1;
    out.mass.reserve(counts.size());
    for (const auto& [v, c] : counts) out.mass.emplace_back(v, Rational(c, size));
    return out;
}

inline void check_interval(const BitString& w, const OnesInterval& I) {
    if (I.empty()) throw PreconditionError("flag distribution needs a nonempty interval");
    if (I.lo < 1 || I.hi > w.ones())
        throw PreconditionError("flag distribution interval must sit inside [L]");
}

}  // namespace detail

// p_{w,I}: b-values of w itself, restricted to indices in I.
inline FlagDistribution flag_distribution_interval(const BitString& w,
                                                   const OnesInterval& I,
                                                   const ParamSet& p) {
    detail::check_interval(w, I);
    FlagProfile prof = b_profile(w, p);
    return detail::distribution_of(prof.b, I.lo, I.hi);
}

// p_{w_I}: b-values recomputed on the extracted substring, where flag
// windows truncate at the substring's right edge instead of reaching into
// the rest of w.
inline FlagDistribution flag_distribution_substring(const BitString& w,
                                                    const OnesInterval& I,
                                                    const ParamSet& p) {
    detail::check_interval(w, I);
    BitString u = w.substring(I);
    FlagProfile prof = b_profile(u, p);
    return detail::distribution_of(prof.b, 1, u.ones());
}

inline Rational l1(const FlagDistribution& p, const FlagDistribution& q) {
    Rational sum(0);
    std::size_t a = 0, b = 0;
    while (a < p.mass.size() || b < q.mass.size()) {
        if (b == q.mass.size() ||
            (a < p.mass.size() && p.mass[a].first < q.mass[b].first)) {
            sum += p.mass[a++].second;
        } else if (a == p.mass.size() || q.mass[b].first < p.mass[a].first) {
            sum += q.mass[b++].second;
        } else {
            Rational d = p.mass[a++].second - q.mass[b++].second;
            sum += d < 0 ? -d : d;
        }
    }
    return sum;
}

// Base-2 entropy; the only floating-point quantity in this header, since it
// is only ever compared with slack.
inline double entropy(const FlagDistribution& p) {
    double h = 0;
    for (const auto& [v, m] : p.mass) {
        double x = m.convert_to<double>();
        if (x > 0) h -= x * std::log2(x);
    }
    return h;
}

// 2H(p) - H(p-) - H(p+) - (1/4)||p+ - p-||_1^2, nonnegative up to numeric
// tolerance whenever p-(x) + p+(x) = 2 p(x) pointwise.
inline double pinsker_gap(const FlagDistribution& p_minus,
                          const FlagDistribution& p,
                          const FlagDistribution& p_plus) {
    std::vector<std::int64_t> support;
    for (const auto& [v, m] : p_minus.mass) support.push_back(v);
    for (const auto& [v, m] : p.mass) support.push_back(v);
    for (const auto& [v, m] : p_plus.mass) support.push_back(v);
    for (std::int64_t v : support)
        if (p_minus.at(v) + p_plus.at(v) != 2 * p.at(v))
            throw PreconditionError("pinsker gap needs p-(x) + p+(x) = 2 p(x)");
    Rational d = l1(p_plus, p_minus);
    return 2 * entropy(p) - entropy(p_minus) - entropy(p_plus) -
           (d * d / 4).convert_to<double>();
}

enum class BalanceVariant { Interval = 0, Substring = 1 };

inline const char* balance_variant_name(BalanceVariant v) {
    return v == BalanceVariant::Interval ? "interval" : "substring";
}

struct BlockVerdict {
    std::int64_t index = 1;  // i of the dyadic block I_{m,i}
    Rational discrepancy;    // L1 distance between the two children
    bool balanced = true;    // discrepancy <= beta
};

struct BalanceReport {
    int m = 0;
    std::vector<BlockVerdict> blocks;
    std::int64_t unbalanced = 0;
};

struct BalanceScanResult {
    BalanceVariant variant = BalanceVariant::Interval;
    Rational beta;
    int n = 0;
    int m_lo = 1;                       // lowest scanned scale
    std::vector<BalanceReport> reports;  // scales m_lo..n, ascending
    std::vector<double> ledger;          // E_m for m = 0..n
};

// Per-scale balance verdicts plus the entropy ledger E_m = 2^m sum_i
// H(p_{w,I_{m,i}}). A dyadic block is balanced when its two children at
// scale m-1 differ by at most beta in L1: the interval variant compares the
// children's b-distributions within w, the substring variant recomputes
// b-values on the two extracted child substrings. The ledger always uses
// interval distributions — it is the quantity the increment argument
// tracks, and each unbalanced block at scale m costs it at least
// 2^{m-3} beta^2. The substring window floor n - 150 beta^-3 log2 n from
// the coverage lemma collapses to 1 at desk scale; m_lo_override exposes
// it either way.
inline BalanceScanResult balance_scan(
        const BitString& w, const Rational& beta, const ParamSet& p,
        BalanceVariant variant = BalanceVariant::Interval,
        std::optional<int> m_lo_override = std::nullopt) {
    if (beta <= 0) throw PreconditionError("balance parameter must be positive");
    const std::int64_t L = w.ones();
    if (L < 1 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        throw PreconditionError("balance scan needs a power-of-two ones count");
    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;

    BalanceScanResult out;
    out.variant = variant;
    out.beta = beta;
    out.n = n;
    out.m_lo = 1;
    if (variant == BalanceVariant::Substring && n >= 2) {
        double span = 150 * std::pow(beta.convert_to<double>(), -3.0) *
                      std::log2(static_cast<double>(n));
        if (span < static_cast<double>(n - 1))
            out.m_lo = n - static_cast<int>(span);
    }
    if (m_lo_override) out.m_lo = std::min(std::max(*m_lo_override, 1), std::max(n, 1));

    const FlagProfile prof = b_profile(w, p);
    out.ledger.resize(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        double sum = 0;
        for (std::int64_t i = 1; i <= (std::int64_t{1} << (n - m)); ++i) {
            std::int64_t lo = (i - 1) * (std::int64_t{1} << m) + 1;
            sum += entropy(
                detail::distribution_of(prof.b, lo, lo + (std::int64_t{1} << m) - 1));
        }
        out.ledger[static_cast<std::size_t>(m)] =
            static_cast<double>(std::int64_t{1} << m) * sum;
    }

    for (int m = out.m_lo; m <= n; ++m) {
        BalanceReport report;
        report.m = m;
        const std::int64_t half = std::int64_t{1} << (m - 1);
        for (std::int64_t i = 1; i <= (std::int64_t{1} << (n - m)); ++i) {
            OnesInterval left{(i - 1) * 2 * half + 1, (i - 1) * 2 * half + half};
            OnesInterval right{left.hi + 1, left.hi + half};
            Rational d;
            if (variant == BalanceVariant::Interval) {
                d = l1(detail::distribution_of(prof.b, left.lo, left.hi),
                       detail::distribution_of(prof.b, right.lo, right.hi));
            } else {
                d = l1(flag_distribution_substring(w, left, p),
                       flag_distribution_substring(w, right, p));
            }
            bool ok = d <= beta;
            if (!ok) ++report.unbalanced;
            report.blocks.push_back(BlockVerdict{i, std::move(d), ok});
        }
        out.reports.push_back(std::move(report));
    }
    return out;
}

}  // namespace oscil
