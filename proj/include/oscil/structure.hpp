#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/flags.hpp"
#include "oscil/params.hpp"

namespace oscil {

enum class ImbalanceSide { Below = 0, Above = 1 };

inline const char* side_name(ImbalanceSide s) {
    return s == ImbalanceSide::Below ? "below" : "above";
}

// zeros vs the closed band [(1-delta)*ones, (1+delta)*ones]: strictly
// outside on either side is imbalanced, endpoints included are balanced.
inline std::optional<ImbalanceSide> imbalance_side(std::int64_t zeros,
                                                   std::int64_t ones,
                                                   const Rational& delta) {
    if (Rational(zeros) < (1 - delta) * ones) return ImbalanceSide::Below;
    if (Rational(zeros) > (1 + delta) * ones) return ImbalanceSide::Above;
    return std::nullopt;
}

inline std::optional<ImbalanceSide> imbalance_side(const BitString& w,
                                                   const Rational& delta) {
    return imbalance_side(w.zeros(), w.ones(), delta);
}

struct ImbalanceCertificate {
    OnesInterval interval;
    std::int64_t zeros = 0;
    ImbalanceSide side = ImbalanceSide::Below;
    bool operator==(const ImbalanceCertificate&) const = default;
};

// Lexicographically smallest (start, then end) ones-interval of size at
// least min_size whose substring is delta-imbalanced. Equivalent to scanning
// all O(L^2) intervals with constant-time zero counts: with S(k) the zeros
// of w_[1,k] and delta = a/b, the interval [x,y] violates the lower bound
// exactly when F(y) < F(x-1) for F(k) = b*S(k) - (b-a)*k, and the upper
// bound when H(y) > H(x-1) for H(k) = b*S(k) - (b+a)*k, so suffix extrema
// of F and H locate the smallest witness start directly.
inline std::optional<ImbalanceCertificate> find_imbalanced_interval(
        const BitString& w, std::int64_t min_size, const Rational& delta) {
    if (min_size < 1) throw PreconditionError("interval size floor must be >= 1");
    const std::int64_t L = w.ones();
    if (min_size > L) return std::nullopt;

    const BigInt a = numerator(delta), b = denominator(delta);
    std::vector<BigInt> F(static_cast<std::size_t>(L) + 1);
    std::vector<BigInt> H(static_cast<std::size_t>(L) + 1);
    for (std::int64_t k = 0; k <= L; ++k) {
        BigInt bs = k == 0 ? BigInt(0) : b * w.zeros_in(OnesInterval{1, k});
        F[static_cast<std::size_t>(k)] = bs - (b - a) * k;
        H[static_cast<std::size_t>(k)] = bs - (b + a) * k;
    }
    std::vector<BigInt> minF = F, maxH = H;
    for (std::int64_t k = L - 1; k >= 0; --k) {
        std::size_t u = static_cast<std::size_t>(k);
        if (minF[u + 1] < minF[u]) minF[u] = minF[u + 1];
        if (maxH[u + 1] > maxH[u]) maxH[u] = maxH[u + 1];
    }
    for (std::int64_t x = 1; x + min_size - 1 <= L; ++x) {
        std::size_t px = static_cast<std::size_t>(x - 1);
        std::size_t y0 = static_cast<std::size_t>(x + min_size - 1);
        if (minF[y0] >= F[px] && maxH[y0] <= H[px]) continue;
        for (std::int64_t y = x + min_size - 1; y <= L; ++y) {
            std::size_t u = static_cast<std::size_t>(y);
            bool below = F[u] < F[px], above = H[u] > H[px];
            if (!below && !above) continue;
            return ImbalanceCertificate{
                OnesInterval{x, y}, w.zeros_in(OnesInterval{x, y}),
                below ? ImbalanceSide::Below : ImbalanceSide::Above};
        }
    }
    return std::nullopt;
}

struct StringType {
    enum class Kind { Imbalanced = 0, Green = 1, BlueYellow = 2 };
    Kind kind = Kind::Imbalanced;
    std::int64_t ell = 0;  // Green: flag length, 1 <= ell <= eps^5 L
    int m = 0;             // BlueYellow: scale exponent, 1 <= m <= n

    static StringType imbalanced() { return {}; }
    static StringType green(std::int64_t ell) { return {Kind::Green, ell, 0}; }
    static StringType blue_yellow(int m) { return {Kind::BlueYellow, 0, m}; }
    bool operator==(const StringType&) const = default;
};

inline std::string type_name(const StringType& t) {
    switch (t.kind) {
        case StringType::Kind::Imbalanced: return "imbalanced";
        case StringType::Kind::Green:
            return "green(ell=" + std::to_string(t.ell) + ")";
        case StringType::Kind::BlueYellow:
            return "blue-yellow(m=" + std::to_string(t.m) + ")";
    }
    return "?";
}

// The Red-flag cap ranges over every flag length ell >= 2^m; exact mode
// checks every integer in [2^m, L], fast mode only the powers of two.
enum class RedCapMode { Exact = 0, PowersOfTwo = 1 };

inline const char* red_cap_mode_name(RedCapMode m) {
    return m == RedCapMode::Exact ? "exact" : "powers-of-two";
}

struct ClassifyGap {
    std::string condition;  // "imbalanced" | "green" | "blue-yellow"
    std::string detail;     // which bound failed and by how much
};

struct ClassifyOutcome {
    std::optional<StringType> type;
    RedCapMode red_cap_mode = RedCapMode::Exact;
    std::vector<ClassifyGap> gaps;  // populated only when type is absent
};

namespace detail {

inline std::int64_t imbalance_size_floor(const ParamSet& p, std::int64_t L) {
    return std::max<std::int64_t>(1, ceil64(p.eps5() * L));
}

inline std::int64_t window_count(const FlagProfile& prof, std::int64_t b_lo,
                                 std::int64_t b_hi) {
    std::int64_t count = 0;
    for (std::int64_t v : prof.b)
        if (b_lo <= v && v <= b_hi) ++count;
    return count;
}

// First flag length in [ell_lo, L] whose Red count exceeds 600*eps*L,
// with that count; nullopt when the cap holds over the whole range.
inline std::optional<std::pair<std::int64_t, std::int64_t>> red_cap_violation(
        const BitString& w, std::int64_t ell_lo, RedCapMode mode,
        const ParamSet& p) {
    const std::int64_t L = w.ones();
    const Rational cap = p.red_flag_cap() * L;
    for (std::int64_t ell = ell_lo; ell <= L;
         ell = mode == RedCapMode::Exact ? ell + 1 : ell * 2) {
        std::int64_t reds = count_flags(w, ell, FlagColor::Red, p);
        if (Rational(reds) > cap) return std::make_pair(ell, reds);
    }
    return std::nullopt;
}

}  // namespace detail

// Deterministic priority Imbalanced > Green(smallest ell) > BlueYellow
// (smallest m), so both halves of a colliding pair land on the same rule.
// Absence is possible: coverage of the three conditions is asymptotic, and
// at small scales none may hold; the gaps then say what fell short.
inline ClassifyOutcome classify_outcome(const BitString& w, const ParamSet& p,
                                        RedCapMode mode = RedCapMode::Exact) {
    if (!w.starts_with_one())
        throw PreconditionError("classify needs a string starting with a one");
    const std::int64_t L = w.ones();
    if (L < 1 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        throw PreconditionError("classify needs a power-of-two ones count, got " +
                                std::to_string(L));
    ClassifyOutcome out;
    out.red_cap_mode = mode;

    const std::int64_t min_size = detail::imbalance_size_floor(p, L);
    if (find_imbalanced_interval(w, min_size, p.epsilon)) {
        out.type = StringType::imbalanced();
        return out;
    }
    out.gaps.push_back({"imbalanced",
                        "no interval of size >= " + std::to_string(min_size) +
                            " with zeros outside (1±" +
                            to_fraction_string(p.epsilon) + ")|I|"});

    const std::int64_t ell_max = floor64(p.eps5() * L);
    const Rational green_need = p.eps2() * L;
    std::int64_t best_count = -1, best_ell = 0;
    for (std::int64_t ell = 1; ell <= ell_max; ++ell) {
        std::int64_t count = count_flags(w, ell, FlagColor::Green, p);
        if (Rational(count) >= green_need) {
            out.type = StringType::green(ell);
            out.gaps.clear();
            return out;
        }
        if (count > best_count) best_count = count, best_ell = ell;
    }
    out.gaps.push_back(
        {"green",
         ell_max < 1
             ? "no admissible flag length: floor(eps^5 L) = 0"
             : "best count " + std::to_string(best_count) + " at ell=" +
                   std::to_string(best_ell) + ", need >= " +
                   to_fraction_string(green_need)});

    const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
    const std::int64_t b_hi = floor64(p.gamma * L);
    const Rational by_need = (p.eps2() - p.gamma) * L;
    std::string by_detail = "no admissible scale: n = 0";
    if (n >= 1) {
        const FlagProfile prof = b_profile(w, p);
        std::int64_t best_window = -1;
        int best_m = 1;
        std::string red_fail;
        for (int m = 1; m <= n; ++m) {
            const std::int64_t b_lo = std::int64_t{1} << m;
            std::int64_t count = detail::window_count(prof, b_lo, b_hi);
            if (count > best_window) {
                best_window = count;
                best_m = m;
            }
            if (Rational(count) < by_need) continue;
            auto red = detail::red_cap_violation(w, b_lo, mode, p);
            if (!red) {
                out.type = StringType::blue_yellow(m);
                out.gaps.clear();
                return out;
            }
            // A larger m narrows the cap's flag-length range, so keep going.
            if (red_fail.empty())
                red_fail = "b-window passes at m=" + std::to_string(m) +
                           " but " + std::to_string(red->second) + " Red " +
                           std::to_string(red->first) + "-flags exceed cap " +
                           to_fraction_string(p.red_flag_cap() * L);
        }
        by_detail = !red_fail.empty()
                        ? red_fail
                        : "best b-window count " + std::to_string(best_window) +
                              " at m=" + std::to_string(best_m) + " for b in [" +
                              std::to_string(std::int64_t{1} << best_m) + "," +
                              std::to_string(b_hi) + "], need >= " +
                              to_fraction_string(by_need);
    }
    out.gaps.push_back({"blue-yellow", by_detail});
    return out;
}

inline std::optional<StringType> classify(const BitString& w, const ParamSet& p,
                                          RedCapMode mode = RedCapMode::Exact) {
    return classify_outcome(w, p, mode).type;
}

// Re-checks the defining condition of a claimed type by brute force. Types
// are only defined for strings with a power-of-two ones count; everything
// else fails every condition. The Red cap here is always the exhaustive
// integer scan.
inline bool type_certificate(const BitString& w, const StringType& t,
                             const ParamSet& p) {
    const std::int64_t L = w.ones();
    if (L < 1 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        return false;
    switch (t.kind) {
        case StringType::Kind::Imbalanced:
            return find_imbalanced_interval(w, detail::imbalance_size_floor(p, L),
                                            p.epsilon)
                .has_value();
        case StringType::Kind::Green: {
            if (t.ell < 1 || Rational(t.ell) > p.eps5() * L) return false;
            std::int64_t count = count_flags(w, t.ell, FlagColor::Green, p);
            return Rational(count) >= p.eps2() * L;
        }
        case StringType::Kind::BlueYellow: {
            const int n = std::bit_width(static_cast<std::uint64_t>(L)) - 1;
            if (t.m < 1 || t.m > n) return false;
            const std::int64_t b_lo = std::int64_t{1} << t.m;
            const std::int64_t b_hi = floor64(p.gamma * L);
            std::int64_t count =
                detail::window_count(b_profile(w, p), b_lo, b_hi);
            if (Rational(count) < (p.eps2() - p.gamma) * L) return false;
            return !detail::red_cap_violation(w, b_lo, RedCapMode::Exact, p);
        }
    }
    return false;
}

}  // namespace oscil
