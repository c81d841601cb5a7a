#pragma once

#include <cmath>
#include <optional>

#include "oscil/rational.hpp"

namespace oscil {

// The two base constants and every threshold derived from them. Defaults
// match the source setting (epsilon 1e-6, gamma 0.001*eps^2 = 1e-15); most
// tests scale them up so the thresholds bite at desk-size strings.
struct ParamSet {
    Rational epsilon{1, 1000000};
    Rational gamma{BigInt(1), BigInt("1000000000000000")};
    // Pins the table's smallest scale directly. The formula-derived n0 is
    // 0 for any feasible string, which makes agreement require equality;
    // planted corpora set this to get coarser, collidable tables.
    std::optional<int> n0_override;

    ParamSet() = default;
    ParamSet(Rational eps, Rational gam, std::optional<int> n0 = std::nullopt)
        : epsilon(std::move(eps)), gamma(std::move(gam)), n0_override(n0) {
        validate();
    }

    void validate() const {
        if (epsilon <= 0)
            throw PreconditionError("epsilon must be positive");
        if (inv_epsilon() < green_threshold())
            throw PreconditionError(
                "epsilon too large: color containment needs 1/eps >= 1+2*eps "
                "(eps <= 1/2), else a rate can be Blue without being Green");
        if (gamma <= 0 || gamma > epsilon * epsilon / 1000)
            throw PreconditionError("gamma must satisfy 0 < gamma <= 0.001*eps^2");
    }

    Rational inv_epsilon() const { return Rational(1) / epsilon; }
    Rational green_threshold() const { return 1 + 2 * epsilon; }
    static Rational yellow_threshold() { return Rational(9, 10); }
    Rational eps2() const { return epsilon * epsilon; }
    Rational eps5() const { return eps2() * eps2() * epsilon; }
    Rational eps6() const { return eps5() * epsilon; }
    // Imbalance levels: the technical single-pair bound and the headline one.
    Rational delta_technical() const { return eps6() / 150; }
    Rational delta_main() const { return eps6() / 900; }
    // Yellow-window stretch 0.56/eps used by the Blue-Yellow construction.
    Rational yellow_stretch() const { return Rational(14, 25) / epsilon; }
    Rational red_flag_cap() const { return 600 * epsilon; }  // fraction of L
    Rational six_gamma() const { return 6 * gamma; }

    // Smallest table scale for a string with 2^n ones: n - 200*gamma^-3*log2(n),
    // floored at 0. Overflow-safe via long double; gamma^-3 is astronomically
    // large at defaults, so this is 0 whenever n >= 2.
    int n0(int n) const {
        if (n0_override) return std::clamp(*n0_override, 0, n);
        if (n <= 0) return 0;
        long double inv_g = static_cast<long double>(Rational(1) / gamma);
        long double shift = 200.0L * inv_g * inv_g * inv_g * std::log2((long double)n);
        if (shift >= (long double)n) return 0;
        return (int)std::floor((long double)n - shift);
    }
};

}  // namespace oscil
