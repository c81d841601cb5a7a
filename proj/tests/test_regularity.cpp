#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "oscil/regularity.hpp"

using namespace oscil;
using testutil::from_gaps;

namespace {

ParamSet half() { return ParamSet(Rational(1, 2), Rational(1, 4000)); }

FlagDistribution dist(std::initializer_list<std::pair<std::int64_t, Rational>> m) {
    FlagDistribution d;
    for (const auto& e : m) d.mass.push_back(e);
    return d;
}

FlagDistribution mix(const FlagDistribution& a, const FlagDistribution& b) {
    FlagDistribution out;
    std::size_t i = 0, j = 0;
    while (i < a.mass.size() || j < b.mass.size()) {
        if (j == b.mass.size() ||
            (i < a.mass.size() && a.mass[i].first < b.mass[j].first)) {
            out.mass.emplace_back(a.mass[i].first, a.mass[i].second / 2);
            ++i;
        } else if (i == a.mass.size() || b.mass[j].first < a.mass[i].first) {
            out.mass.emplace_back(b.mass[j].first, b.mass[j].second / 2);
            ++j;
        } else {
            out.mass.emplace_back(a.mass[i].first,
                                  (a.mass[i].second + b.mass[j].second) / 2);
            ++i, ++j;
        }
    }
    return out;
}

BitString seeded_random(std::uint64_t seed, std::size_t ones, int gap_spread) {
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> gaps(ones);
    for (auto& g : gaps) g = static_cast<std::int64_t>(rng() % gap_spread);
    return from_gaps(gaps);
}

}  // namespace

TEST_CASE("flag distributions over intervals and substrings", "[regularity]") {
    ParamSet dflt;
    BitString w = BitString::from_text("1001011");

    FlagDistribution d = flag_distribution_interval(w, OnesInterval{1, 4}, dflt);
    CHECK(d == dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
    CHECK(d.total() == 1);

    CHECK(flag_distribution_interval(w, OnesInterval{3, 3}, dflt) ==
          dist({{0, Rational(1)}}));
    CHECK(flag_distribution_interval(w, OnesInterval{1, 1}, dflt) ==
          dist({{1, Rational(1)}}));

    BitString ones4 = BitString::from_text("1111");
    CHECK(flag_distribution_interval(ones4, OnesInterval{1, 4}, dflt) ==
          dist({{0, Rational(1)}}));
    CHECK(flag_distribution_substring(ones4, OnesInterval{1, 4}, dflt) ==
          dist({{0, Rational(1)}}));

    CHECK_THROWS_AS(flag_distribution_interval(w, OnesInterval{2, 1}, dflt),
                    PreconditionError);
    CHECK_THROWS_AS(flag_distribution_interval(w, OnesInterval{1, 5}, dflt),
                    PreconditionError);
    CHECK_THROWS_AS(flag_distribution_substring(w, OnesInterval{0, 2}, dflt),
                    PreconditionError);
}

TEST_CASE("right truncation separates the two distribution routes",
          "[regularity]") {
    // In w, index 1 carries a Blue 4-flag fed by the gap beyond I = [1,2];
    // the extracted substring keeps only gaps 1 and 2 and loses it.
    BitString w = from_gaps({0, 1, 9, 0});
    ParamSet p = half();
    FlagDistribution via_interval =
        flag_distribution_interval(w, OnesInterval{1, 2}, p);
    FlagDistribution via_substring =
        flag_distribution_substring(w, OnesInterval{1, 2}, p);
    CHECK(via_interval == dist({{4, Rational(1)}}));
    CHECK(via_substring == dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
    CHECK(l1(via_interval, via_substring) == 2);

    // Whole-string reference set: no truncation, identical routes.
    OnesInterval all{1, w.ones()};
    CHECK(flag_distribution_interval(w, all, p) ==
          flag_distribution_substring(w, all, p));
}

TEST_CASE("l1 distance on pinned distributions", "[regularity]") {
    FlagDistribution p = dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK(l1(p, p) == 0);
    CHECK(l1(dist({{0, Rational(1)}}), dist({{1, Rational(1)}})) == 2);
    CHECK(l1(p, dist({{0, Rational(1)}})) == 1);
}

TEST_CASE("entropy on pinned distributions", "[regularity]") {
    CHECK(entropy(dist({{0, Rational(1)}})) == 0.0);
    CHECK(entropy(dist({{0, Rational(1, 2)}, {2, Rational(1, 2)}})) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK(entropy(dist({{0, Rational(1, 4)}, {1, Rational(3, 4)}})) ==
          Catch::Approx(2.0 - 0.75 * std::log2(3.0)).margin(1e-12));
}

TEST_CASE("pinsker gap on pinned and random splits", "[regularity]") {
    FlagDistribution u = dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
    CHECK(pinsker_gap(u, u, u) == Catch::Approx(0.0).margin(1e-12));
    CHECK(pinsker_gap(dist({{0, Rational(1)}}), u, dist({{1, Rational(1)}})) ==
          Catch::Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(
        pinsker_gap(dist({{0, Rational(1)}}), u, dist({{0, Rational(1)}})),
        PreconditionError);

    std::mt19937_64 rng(0x9A6F);
    const std::int64_t support[4] = {0, 1, 2, 4};
    for (int trial = 0; trial < 300; ++trial) {
        auto random_dist = [&] {
            Rational weights[4];
            Rational total(0);
            for (auto& x : weights) {
                x = Rational(static_cast<std::int64_t>(rng() % 8));
                total += x;
            }
            FlagDistribution d;
            if (total == 0) {
                d.mass.emplace_back(0, Rational(1));
                return d;
            }
            for (int k = 0; k < 4; ++k)
                if (weights[k] > 0) d.mass.emplace_back(support[k], weights[k] / total);
            return d;
        };
        FlagDistribution lo = random_dist(), hi = random_dist();
        REQUIRE(pinsker_gap(lo, mix(lo, hi), hi) >= -1e-12);
    }
}

TEST_CASE("all-ones strings are balanced at every scale", "[regularity]") {
    BitString w = from_gaps(std::vector<std::int64_t>(16, 0));
    for (BalanceVariant v : {BalanceVariant::Interval, BalanceVariant::Substring}) {
        BalanceScanResult r = balance_scan(w, Rational(1, 4), half(), v);
        REQUIRE(r.n == 4);
        REQUIRE(r.reports.size() == 4);
        for (const auto& rep : r.reports) {
            CHECK(rep.unbalanced == 0);
            for (const auto& b : rep.blocks) {
                CHECK(b.balanced);
                CHECK(b.discrepancy == 0);
            }
        }
        for (double e : r.ledger) CHECK(e == 0.0);
    }
}

TEST_CASE("balance scan on the concatenated oscillation phases", "[regularity]") {
    // Phases with gap sizes 2 and 4 glued together: the phase boundary shows
    // up as unbalanced blocks at every scale.
    BitString bm = BitString::from_text("1100110011110000");
    ParamSet p = half();

    BalanceScanResult r = balance_scan(bm, Rational(1, 4), p);
    REQUIRE(r.n == 3);
    REQUIRE(r.reports.size() == 3);
    CHECK(r.reports[0].unbalanced == 2);
    CHECK(r.reports[1].unbalanced == 1);
    CHECK(r.reports[2].unbalanced == 1);
    CHECK(r.reports[0].blocks[0].discrepancy == 2);
    CHECK(r.reports[1].blocks[0].discrepancy == 0);
    CHECK(r.reports[1].blocks[1].discrepancy == 2);
    CHECK(r.reports[2].blocks[0].discrepancy == 1);
    REQUIRE(r.ledger.size() == 4);
    CHECK(r.ledger[0] == 0.0);
    CHECK(r.ledger[1] == Catch::Approx(4.0).margin(1e-12));
    CHECK(r.ledger[2] == Catch::Approx(8.0).margin(1e-12));
    CHECK(r.ledger[3] == Catch::Approx(12.0).margin(1e-12));

    BalanceScanResult s =
        balance_scan(bm, Rational(1, 4), p, BalanceVariant::Substring);
    CHECK(s.reports[0].unbalanced == 3);
    CHECK(s.reports[1].unbalanced == 1);
    CHECK(s.reports[2].unbalanced == 1);
}

TEST_CASE("committed scan of a seeded random string", "[regularity]") {
    BitString w = seeded_random(0xB44A, 2048, 3);
    REQUIRE(w.length() == 4069);
    REQUIRE(w.ones() == 2048);
    BalanceScanResult r = balance_scan(w, Rational(1, 2), half());
    REQUIRE(r.n == 11);
    const std::int64_t expected[11] = {696, 414, 129, 59, 18, 6, 1, 0, 0, 0, 0};
    for (int m = 1; m <= 11; ++m)
        CHECK(r.reports[static_cast<std::size_t>(m - 1)].unbalanced ==
              expected[m - 1]);
    // At scale 1 a block is unbalanced exactly when its two singleton
    // children differ, each such pair contributing entropy 1 to E_1.
    CHECK(r.ledger[0] == 0.0);
    CHECK(r.ledger[1] == Catch::Approx(1392.0).margin(1e-9));
    CHECK(r.ledger[11] == Catch::Approx(3704.535604794).margin(1e-6));
}

TEST_CASE("scan verdicts match a block-by-block recomputation", "[regularity]") {
    std::mt19937_64 rng(0x5CA9);
    ParamSet p = half();
    for (int trial = 0; trial < 5; ++trial) {
        BitString w = seeded_random(rng(), 256, 4);
        for (BalanceVariant v :
             {BalanceVariant::Interval, BalanceVariant::Substring}) {
            BalanceScanResult r = balance_scan(w, Rational(1, 2), p, v);
            for (const auto& rep : r.reports) {
                std::int64_t half_size = std::int64_t{1} << (rep.m - 1);
                for (const auto& b : rep.blocks) {
                    OnesInterval left{(b.index - 1) * 2 * half_size + 1,
                                      (b.index - 1) * 2 * half_size + half_size};
                    OnesInterval right{left.hi + 1, left.hi + half_size};
                    Rational d =
                        v == BalanceVariant::Interval
                            ? l1(flag_distribution_interval(w, left, p),
                                 flag_distribution_interval(w, right, p))
                            : l1(flag_distribution_substring(w, left, p),
                                 flag_distribution_substring(w, right, p));
                    REQUIRE(b.discrepancy == d);
                    REQUIRE(b.balanced == (d <= Rational(1, 2)));
                }
            }
        }
    }
}

TEST_CASE("dyadic distributions mix exactly into their parent", "[regularity]") {
    ParamSet p = half();
    std::mt19937_64 rng(0x31AC);
    for (int trial = 0; trial < 10; ++trial) {
        BitString w = seeded_random(rng(), 64, 5);
        int n = 6;
        for (int m = 1; m <= n; ++m) {
            std::int64_t size = std::int64_t{1} << m;
            for (std::int64_t i = 1; i <= (std::int64_t{1} << (n - m)); ++i) {
                OnesInterval parent{(i - 1) * size + 1, i * size};
                OnesInterval left{parent.lo, parent.lo + size / 2 - 1};
                OnesInterval right{left.hi + 1, parent.hi};
                REQUIRE(flag_distribution_interval(w, parent, p) ==
                        mix(flag_distribution_interval(w, left, p),
                            flag_distribution_interval(w, right, p)));
            }
        }
    }
}

TEST_CASE("entropy ledger pays for every unbalanced block", "[regularity]") {
    std::mt19937_64 rng(0xE01);
    std::vector<Rational> betas{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
    for (int trial = 0; trial < 12; ++trial) {
        BitString w = seeded_random(rng(), 128, 4);
        const Rational& beta = betas[trial % betas.size()];
        BalanceScanResult r = balance_scan(w, beta, half());
        double b2 = (beta * beta).convert_to<double>();
        for (const auto& rep : r.reports) {
            double lhs = r.ledger[static_cast<std::size_t>(rep.m - 1)];
            double rhs = r.ledger[static_cast<std::size_t>(rep.m)] -
                         std::pow(2.0, rep.m - 3) *
                             static_cast<double>(rep.unbalanced) * b2;
            REQUIRE(lhs <= rhs + 1e-9);
        }
    }
}

TEST_CASE("balanced strings move value sets by at most half the slack",
          "[regularity]") {
    ParamSet p = half();
    std::mt19937_64 rng(0xF1A6);
    for (int trial = 0; trial < 40; ++trial) {
        BitString w = seeded_random(rng(), 32, 4);
        std::int64_t L = 32;
        FlagProfile prof = b_profile(w, p);
        // The string is exactly d-balanced for the top-scale discrepancy d.
        BalanceScanResult r = balance_scan(w, Rational(1), p);
        Rational d = r.reports.back().blocks[0].discrepancy;
        for (int s = 0; s < 32; ++s) {
            std::uint64_t pick = rng();
            auto in_set = [&](std::int64_t v) {
                int slot = v == 0 ? 0 : std::bit_width(static_cast<std::uint64_t>(v));
                return (pick >> slot & 1) != 0;
            };
            std::int64_t full = 0, front = 0;
            for (std::int64_t i = 1; i <= L; ++i) {
                if (!in_set(prof.at(i))) continue;
                ++full;
                if (i <= L / 2) ++front;
            }
            Rational drift = Rational(full, L) - Rational(front, L / 2);
            if (drift < 0) drift = -drift;
            REQUIRE(drift <= d / 2);
        }
    }
}

TEST_CASE("interval and substring distributions transfer with bounded loss",
          "[regularity]") {
    ParamSet p = half();
    std::mt19937_64 rng(0x71AF);
    for (int trial = 0; trial < 120; ++trial) {
        std::int64_t ones = 8 + static_cast<std::int64_t>(rng() % 57);
        BitString w = seeded_random(rng(), static_cast<std::size_t>(ones), 6);
        std::int64_t lo = 1 + static_cast<std::int64_t>(rng() % (ones / 2));
        std::int64_t hi =
            lo + 3 + static_cast<std::int64_t>(rng() % (ones - lo - 2));
        if (hi > ones) hi = ones;
        OnesInterval I{lo, hi};
        FlagProfile prof = b_profile(w, p);
        for (std::int64_t ell0 : {1, 2, 3, 4, 8}) {
            std::int64_t tall = 0;
            for (std::int64_t i = I.lo; i <= I.hi; ++i)
                if (prof.at(i) >= ell0) ++tall;
            Rational beta_hat(tall, I.size());
            Rational bound = 2 * (beta_hat + Rational(ell0, I.size()));
            REQUIRE(l1(flag_distribution_interval(w, I, p),
                       flag_distribution_substring(w, I, p)) <= bound);
        }
    }
}

TEST_CASE("scan preconditions and the scale window", "[regularity]") {
    ParamSet p = half();
    CHECK_THROWS_AS(balance_scan(BitString::from_text("10101"), Rational(1, 2), p),
                    PreconditionError);  // three ones
    BitString w = from_gaps(std::vector<std::int64_t>(16, 1));
    CHECK_THROWS_AS(balance_scan(w, Rational(0), p), PreconditionError);

    BalanceScanResult r =
        balance_scan(w, Rational(1, 2), p, BalanceVariant::Interval, 3);
    REQUIRE(r.m_lo == 3);
    REQUIRE(r.reports.size() == 2);
    CHECK(r.reports[0].m == 3);
    CHECK(r.reports[1].m == 4);
    // Clamped into [1, n].
    CHECK(balance_scan(w, Rational(1, 2), p, BalanceVariant::Interval, 9).m_lo == 4);
    CHECK(balance_scan(w, Rational(1, 2), p, BalanceVariant::Interval, -2).m_lo == 1);
    // The paper's substring window floor is far below 1 at this scale.
    CHECK(balance_scan(w, Rational(1, 2), p, BalanceVariant::Substring).m_lo == 1);
}
