#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oscil/structure.hpp"

using namespace oscil;
using testutil::from_gaps;

namespace {

// Independent route: literally every interval, smallest start then end.
std::optional<ImbalanceCertificate> brute_interval(const BitString& w,
                                                   std::int64_t min_size,
                                                   const Rational& delta) {
    std::int64_t L = w.ones();
    for (std::int64_t x = 1; x <= L; ++x)
        for (std::int64_t y = x + min_size - 1; y <= L; ++y) {
            std::int64_t z = w.zeros_in(OnesInterval{x, y});
            auto side = imbalance_side(z, y - x + 1, delta);
            if (side) return ImbalanceCertificate{OnesInterval{x, y}, z, *side};
        }
    return std::nullopt;
}

ParamSet tenth() { return ParamSet(Rational(1, 10), Rational(1, 100000)); }
ParamSet half() { return ParamSet(Rational(1, 2), Rational(1, 4000)); }

// gap 4 every 8th one (generators, two b=2 indices each), gap 2 on the
// offset 8-grid (fillers), one generator slot left empty so the Green
// 1-flag count stays one short of eps^2 L while the b-window count does
// not: 2046 qualifying indices against a floor of 2045.952.
BitString knife_edge() {
    std::vector<std::int64_t> g(8192, 0);
    for (std::int64_t i = 1; i <= 8192; ++i) {
        if (i % 8 == 4 && i != 8188) g[static_cast<std::size_t>(i) - 1] = 4;
        if (i % 8 == 0) g[static_cast<std::size_t>(i) - 1] = 2;
    }
    return from_gaps(g);
}

}  // namespace

TEST_CASE("imbalance side of a zero count", "[structure]") {
    Rational quarter(1, 4);
    CHECK(!imbalance_side(3, 4, quarter));  // band [3, 5] is closed
    CHECK(!imbalance_side(4, 4, quarter));
    CHECK(!imbalance_side(5, 4, quarter));
    CHECK(imbalance_side(2, 4, quarter) == ImbalanceSide::Below);
    CHECK(imbalance_side(6, 4, quarter) == ImbalanceSide::Above);
    CHECK(imbalance_side(BitString::from_text("100"), Rational(1, 10)) ==
          ImbalanceSide::Above);
    CHECK(!imbalance_side(BitString::from_text("10"), Rational(1, 10)));
}

TEST_CASE("imbalanced interval search on pinned strings", "[structure]") {
    Rational d(1, 2);
    auto c = find_imbalanced_interval(BitString::from_text("1111"), 1, d);
    REQUIRE(c.has_value());
    CHECK(c->interval == OnesInterval{1, 1});
    CHECK(c->zeros == 0);
    CHECK(c->side == ImbalanceSide::Below);

    CHECK(!find_imbalanced_interval(BitString::from_text("101010"), 1, d));

    c = find_imbalanced_interval(BitString::from_text("10100"), 1, d);
    REQUIRE(c.has_value());
    CHECK(c->interval == OnesInterval{2, 2});
    CHECK(c->zeros == 2);
    CHECK(c->side == ImbalanceSide::Above);

    // [2,2] with two zeros also qualifies; the earlier start wins.
    c = find_imbalanced_interval(BitString::from_text("1100"), 1, d);
    REQUIRE(c.has_value());
    CHECK(c->interval == OnesInterval{1, 1});
    CHECK(c->side == ImbalanceSide::Below);

    c = find_imbalanced_interval(BitString::from_text("10011"), 1, d);
    REQUIRE(c.has_value());
    CHECK(c->interval == OnesInterval{1, 1});
    CHECK(c->zeros == 2);
    CHECK(c->side == ImbalanceSide::Above);

    BitString w = BitString::from_text("1011010");
    CHECK(!find_imbalanced_interval(w, w.ones() + 1, d));
    CHECK_THROWS_AS(find_imbalanced_interval(w, 0, d), PreconditionError);
}

TEST_CASE("imbalanced interval search agrees with the interval-by-interval scan",
          "[structure]") {
    std::mt19937_64 rng(0x57B1);
    std::vector<Rational> deltas{Rational(1, 10), Rational(1, 4),
                                 Rational(49, 100), Rational(1, 2)};
    for (int trial = 0; trial < 400; ++trial) {
        std::int64_t len = 1 + static_cast<std::int64_t>(rng() % 22);
        BitString w = testutil::random_bits(rng, len, 0.55);
        const Rational& d = deltas[trial % deltas.size()];
        std::int64_t L = w.ones();
        for (std::int64_t min_size :
             {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}, L, L + 1}) {
            if (min_size < 1) continue;
            auto got = find_imbalanced_interval(w, min_size, d);
            auto want = brute_interval(w, min_size, d);
            REQUIRE(got == want);
            if (got) {
                CHECK(got->interval.size() >= min_size);
                CHECK(got->zeros == w.zeros_in(got->interval));
                CHECK(imbalance_side(got->zeros, got->interval.size(), d) ==
                      got->side);
            }
        }
    }
}

TEST_CASE("classify pins the all-zero tail as imbalanced", "[structure]") {
    auto t = classify(BitString::from_text("100"), tenth());
    REQUIRE(t.has_value());
    CHECK(*t == StringType::imbalanced());
    CHECK(type_certificate(BitString::from_text("100"), *t, tenth()));

    auto t4 = classify(BitString::from_text("111100000000"), tenth());
    REQUIRE(t4.has_value());
    CHECK(t4->kind == StringType::Kind::Imbalanced);
}

TEST_CASE("classify finds no type for the short periodic string", "[structure]") {
    std::vector<std::int64_t> gaps(16, 1);
    BitString w = from_gaps(gaps);
    ClassifyOutcome out = classify_outcome(w, tenth());
    CHECK(!out.type);
    REQUIRE(out.gaps.size() == 3);
    CHECK(out.gaps[0].condition == "imbalanced");
    CHECK(out.gaps[1].condition == "green");
    CHECK(out.gaps[2].condition == "blue-yellow");
    CHECK(out.gaps[1].detail.find("no admissible flag length") !=
          std::string::npos);
}

TEST_CASE("classify goes green once length-1 flags are admissible",
          "[structure]") {
    // eps = 1/2: eps^5 L = 1 admits ell = 1, and every gap is a zero.
    std::vector<std::int64_t> g32(32, 1);
    BitString small = from_gaps(g32);
    ClassifyOutcome out = classify_outcome(small, half());
    REQUIRE(out.type.has_value());
    CHECK(*out.type == StringType::green(1));
    CHECK(out.gaps.empty());
    CHECK(type_certificate(small, StringType::green(1), half()));
    CHECK(!type_certificate(small, StringType::imbalanced(), half()));

    // eps = 1/10 needs L > 10^5 before ell = 1 is admissible.
    std::vector<std::int64_t> gBig(std::size_t{1} << 17, 1);
    auto t = classify(from_gaps(gBig), tenth());
    REQUIRE(t.has_value());
    CHECK(*t == StringType::green(1));
}

TEST_CASE("classify blue-yellow on the knife-edge instance", "[structure]") {
    BitString w = knife_edge();
    ParamSet p = half();
    REQUIRE(w.ones() == 8192);
    REQUIRE(w.zeros() == 6140);

    // One short of the eps^2 L = 2048 floor at both admissible lengths.
    CHECK(count_flags(w, 1, FlagColor::Green, p) == 2047);
    CHECK(count_flags(w, 2, FlagColor::Green, p) == 2046);
    CHECK(count_flags(w, 3, FlagColor::Green, p) == 0);

    ClassifyOutcome exact = classify_outcome(w, p);
    REQUIRE(exact.type.has_value());
    CHECK(*exact.type == StringType::blue_yellow(1));
    CHECK(exact.gaps.empty());
    CHECK(exact.red_cap_mode == RedCapMode::Exact);

    ClassifyOutcome fast = classify_outcome(w, p, RedCapMode::PowersOfTwo);
    CHECK(fast.type == exact.type);
    CHECK(fast.red_cap_mode == RedCapMode::PowersOfTwo);

    CHECK(type_certificate(w, StringType::blue_yellow(1), p));
    CHECK(!type_certificate(w, StringType::blue_yellow(0), p));
    CHECK(!type_certificate(w, StringType::blue_yellow(2), p));
    CHECK(!type_certificate(w, StringType::blue_yellow(14), p));
    CHECK(!type_certificate(w, StringType::imbalanced(), p));
}

TEST_CASE("classify rejects malformed inputs", "[structure]") {
    CHECK_THROWS_AS(classify(BitString::from_text("10101"), tenth()),
                    PreconditionError);  // three ones
    CHECK_THROWS_AS(classify(BitString::from_text("0110"), tenth()),
                    PreconditionError);  // leading zero
    CHECK_THROWS_AS(classify(BitString::from_text(""), tenth()),
                    PreconditionError);
}

TEST_CASE("certificates reject out-of-range type parameters", "[structure]") {
    BitString w = BitString::from_text("1111");
    ParamSet p = tenth();
    CHECK(!type_certificate(w, StringType::green(1), p));  // eps^5 L < 1
    CHECK(!type_certificate(w, StringType::green(0), p));
    CHECK(!type_certificate(w, StringType::blue_yellow(1), p));
    // Types live on power-of-two ones counts only.
    CHECK(!type_certificate(BitString::from_text("10101"),
                            StringType::imbalanced(), p));
}

TEST_CASE("classification is deterministic, certified, and priority-sound",
          "[structure]") {
    std::mt19937_64 rng(0xC1A5);
    std::vector<ParamSet> params{tenth(), half()};
    int certified = 0, imbalanced_first = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t L = std::int64_t{1} << (rng() % 6);
        std::vector<std::int64_t> gaps(static_cast<std::size_t>(L));
        for (auto& g : gaps) g = static_cast<std::int64_t>(rng() % 5);
        BitString w = from_gaps(gaps);
        const ParamSet& p = params[trial % params.size()];

        ClassifyOutcome a = classify_outcome(w, p);
        ClassifyOutcome b = classify_outcome(w, p);
        REQUIRE(a.type == b.type);
        if (a.type) {
            CHECK(a.gaps.empty());
            CHECK(type_certificate(w, *a.type, p));
            ++certified;
        } else {
            REQUIRE(a.gaps.size() == 3);
        }
        if (type_certificate(w, StringType::imbalanced(), p)) {
            REQUIRE(a.type.has_value());
            CHECK(*a.type == StringType::imbalanced());
            ++imbalanced_first;
        }
    }
    CHECK(certified > 50);
    CHECK(imbalanced_first > 50);
}

TEST_CASE("flag colors certify imbalance of their own window", "[structure]") {
    // For ell >= 2/eps, a Green or Blue ell-flag means the window holds
    // more than (1+eps)|I| zeros, and an untruncated Red flag fewer than
    // (1-eps)|I|.
    ParamSet p = tenth();
    std::mt19937_64 rng(0xB10E);
    int greens = 0, reds = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::int64_t L = 20 + static_cast<std::int64_t>(rng() % 25);
        std::vector<std::int64_t> gaps(static_cast<std::size_t>(L));
        // Dense gaps feed the Green side, sparse ones the Red side.
        std::int64_t spread = trial % 2 == 0 ? 6 : 2;
        for (auto& g : gaps) g = static_cast<std::int64_t>(rng() % spread);
        BitString w = from_gaps(gaps);
        for (std::int64_t ell : {std::int64_t{20}, std::int64_t{24}, L}) {
            if (ell > L) continue;
            for (std::int64_t i = 1; i <= L; ++i) {
                FlagColor c = flag_color(w, i, ell, p);
                OnesInterval I{i, std::min(i + ell - 1, L)};
                auto side = imbalance_side(w.zeros_in(I), I.size(), p.epsilon);
                if (c == FlagColor::Green || c == FlagColor::Blue) {
                    REQUIRE(side == ImbalanceSide::Above);
                    ++greens;
                } else if (c == FlagColor::Red && i <= L - ell + 1) {
                    REQUIRE(side == ImbalanceSide::Below);
                    ++reds;
                }
            }
        }
    }
    CHECK(greens > 100);
    CHECK(reds > 100);
}
