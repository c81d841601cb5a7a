#pragma once

#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/params.hpp"

namespace oscil {

enum class FlagColor { Red = 0, Yellow = 1, Green = 2, Blue = 3 };

inline const char* color_name(FlagColor c) {
    switch (c) {
        case FlagColor::Red: return "red";
        case FlagColor::Yellow: return "yellow";
        case FlagColor::Green: return "green";
        case FlagColor::Blue: return "blue";
    }
    return "?";
}

// Zero rate of a flag window: exact rational, or the symbolic +inf that
// the length-1 convention produces (0^-1 * m = +inf for m >= 1).
struct Rate {
    bool infinite = false;
    Rational value{0};

    static Rate inf() { return Rate{true, 0}; }
    static Rate finite(Rational v) { return Rate{false, std::move(v)}; }
    bool exceeds(const Rational& threshold) const {
        return infinite || value > threshold;
    }
    bool operator==(const Rate& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

// Exact comparison "z / (ell-1) > t" on machine words when t fits, with a
// bignum fallback; the length-1 conventions are folded in.
class ThresholdCmp {
public:
    explicit ThresholdCmp(Rational t) : exact_(std::move(t)) {
        fast_ = fits_int64(exact_, num_, den_);
    }
    bool rate_exceeds(std::int64_t zeros, std::int64_t ell) const {
        if (ell == 1) return zeros > 0 && exact_ >= 0;
        if (fast_)
            return static_cast<__int128>(zeros) * den_ >
                   static_cast<__int128>(num_) * (ell - 1);
        return Rational(zeros) > exact_ * (ell - 1);
    }

private:
    Rational exact_;
    std::int64_t num_ = 0, den_ = 1;
    bool fast_ = false;
};

// Zeros of the window w_[i, i+ell-1] (clamped at the string end, like any
// ones-interval substring).
inline std::int64_t flag_window_zeros(const BitString& w, std::int64_t i,
                                      std::int64_t ell) {
    return w.zeros_in(OnesInterval{i, i + ell - 1});
}

inline Rate flag_rate(const BitString& w, std::int64_t i, std::int64_t ell) {
    if (ell < 1) throw PreconditionError("flag length must be >= 1");
    std::int64_t z = flag_window_zeros(w, i, ell);
    if (ell == 1) return z == 0 ? Rate::finite(0) : Rate::inf();
    return Rate::finite(Rational(z, ell - 1));
}

inline FlagColor flag_color(const Rate& r, const ParamSet& p) {
    if (r.exceeds(p.inv_epsilon())) return FlagColor::Blue;
    if (r.exceeds(p.green_threshold())) return FlagColor::Green;
    if (r.exceeds(ParamSet::yellow_threshold())) return FlagColor::Yellow;
    return FlagColor::Red;
}

inline FlagColor flag_color(const BitString& w, std::int64_t i, std::int64_t ell,
                            const ParamSet& p) {
    return flag_color(flag_rate(w, i, ell), p);
}

// b_w(i) for every i in [L]: the largest power of two ell in [L] such that
// i is a Blue ell-flag, 0 when none qualifies.
struct FlagProfile {
    std::vector<std::int64_t> b;
    std::int64_t size() const { return static_cast<std::int64_t>(b.size()); }
    std::int64_t at(std::int64_t i) const {
        if (i < 1 || i > size()) throw PreconditionError("b index out of range");
        return b[static_cast<std::size_t>(i - 1)];
    }
    bool operator==(const FlagProfile&) const = default;
};

inline FlagProfile b_profile(const BitString& w, const ParamSet& p) {
    std::int64_t L = w.ones();
    FlagProfile out{std::vector<std::int64_t>(static_cast<std::size_t>(L), 0)};
    ThresholdCmp blue(p.inv_epsilon());
    for (std::int64_t i = 1; i <= L; ++i) {
        std::int64_t best = 0;
        for (std::int64_t ell = 1; ell <= L; ell <<= 1)
            if (blue.rate_exceeds(flag_window_zeros(w, i, ell), ell)) best = ell;
        out.b[static_cast<std::size_t>(i - 1)] = best;
    }
    return out;
}

// Flags of color at least c in the Blue > Green > Yellow ordering; asking
// for Red counts exactly-Red flags (the Yellow complement).
inline std::int64_t count_flags(const BitString& w, std::int64_t ell, FlagColor c,
                                const ParamSet& p) {
    if (ell < 1) throw PreconditionError("flag length must be >= 1");
    Rational threshold;
    switch (c) {
        case FlagColor::Blue: threshold = p.inv_epsilon(); break;
        case FlagColor::Green: threshold = p.green_threshold(); break;
        case FlagColor::Yellow:
        case FlagColor::Red: threshold = ParamSet::yellow_threshold(); break;
    }
    ThresholdCmp cmp(threshold);
    std::int64_t L = w.ones(), count = 0;
    for (std::int64_t i = 1; i <= L; ++i) {
        bool above = cmp.rate_exceeds(flag_window_zeros(w, i, ell), ell);
        if (c == FlagColor::Red ? !above : above) ++count;
    }
    return count;
}

// |{i : b_w(i) >= ell}| for a power of two ell.
inline std::int64_t count_blue_plus(const BitString& w, std::int64_t ell,
                                    const ParamSet& p) {
    if (ell < 1 || (ell & (ell - 1)) != 0)
        throw PreconditionError("blue-plus length must be a power of two");
    FlagProfile prof = b_profile(w, p);
    std::int64_t count = 0;
    for (std::int64_t v : prof.b)
        if (v >= ell) ++count;
    return count;
}

}  // namespace oscil
