#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "oscil/statistics.hpp"

using namespace oscil;
using testutil::from_gaps;

namespace {

ParamSet half(std::optional<int> n0 = std::nullopt) {
    return ParamSet(Rational(1, 2), Rational(1, 4000), n0);
}

struct FamilySearch {
    std::int64_t total = -1;
    std::vector<std::pair<std::int64_t, std::int64_t>> intervals;
};

// Independent route: enumerate every disjoint family of imbalanced
// intervals outright, keeping the largest mass and the lexicographically
// smallest list among ties.
void search_families(const BitString& w, std::int64_t msize,
                     const Rational& eps, std::int64_t x,
                     std::vector<std::pair<std::int64_t, std::int64_t>>& cur,
                     std::int64_t mass, FamilySearch& best) {
    const std::int64_t L = w.ones();
    if (x > L) {
        if (mass > best.total ||
            (mass == best.total && cur < best.intervals)) {
            best.total = mass;
            best.intervals = cur;
        }
        return;
    }
    search_families(w, msize, eps, x + 1, cur, mass, best);
    for (std::int64_t y = x + msize - 1; y <= L; ++y) {
        if (!imbalance_side(w.zeros_in({x, y}), y - x + 1, eps)) continue;
        cur.emplace_back(x, y);
        search_families(w, msize, eps, y + 1, cur, mass + (y - x + 1), best);
        cur.pop_back();
    }
}

FamilySearch best_family(const BitString& w, std::int64_t msize,
                         const Rational& eps) {
    FamilySearch best;
    std::vector<std::pair<std::int64_t, std::int64_t>> cur;
    search_families(w, msize, eps, 1, cur, 0, best);
    return best;
}

void check_family_against_search(const StatisticsTable& T, const BitString& w,
                                 std::int64_t msize, const Rational& eps) {
    FamilySearch best = best_family(w, msize, eps);
    REQUIRE(T.family.size() == best.intervals.size());
    std::int64_t mass = 0;
    for (std::size_t k = 0; k < T.family.size(); ++k) {
        CHECK(T.family[k].interval.lo == best.intervals[k].first);
        CHECK(T.family[k].interval.hi == best.intervals[k].second);
        mass += T.family[k].interval.size();
    }
    CHECK(mass == best.total);
}

BitString heavy_string() {
    std::vector<std::int64_t> g(32, 3);
    g[31] = 0;
    return from_gaps(g);
}

}  // namespace

TEST_CASE("table of the all-ones string", "[statistics]") {
    BitString w = from_gaps(std::vector<std::int64_t>(8, 0));
    ParamSet p;
    StatisticsTable T = statistics_table(w, p);

    CHECK(T.length == 8);
    CHECK(T.ones == 8);
    CHECK(T.n == 3);
    CHECK(T.n0 == 0);
    CHECK(T.family_mode == FamilyMode::Exact);
    REQUIRE(T.scales.size() == 4);
    for (int m = 0; m <= 3; ++m) {
        const ScaleRow& row = T.scales[static_cast<std::size_t>(m)];
        CHECK(row.m == m);
        REQUIRE(row.blocks.size() == static_cast<std::size_t>(8 >> m));
        for (const BlockStat& b : row.blocks) {
            CHECK(b.ones == (std::int64_t{1} << m));
            CHECK(b.zeros == 0);
            CHECK(b.type == StringType::imbalanced());
        }
    }
    // every one sits below the band on its own, so singletons tile the string
    REQUIRE(T.family.size() == 8);
    for (std::int64_t k = 1; k <= 8; ++k) {
        const FamilyInterval& f = T.family[static_cast<std::size_t>(k - 1)];
        CHECK(f.interval.lo == k);
        CHECK(f.interval.hi == k);
        CHECK(f.bit_lo == k);
        CHECK(f.bit_hi == k);
        CHECK(f.zeros == 0);
        CHECK(f.side == ImbalanceSide::Below);
    }
    check_family_against_search(T, w, 1, p.epsilon);
}

TEST_CASE("family respects the scale floor override", "[statistics]") {
    BitString w = from_gaps(std::vector<std::int64_t>(8, 0));
    ParamSet p;
    p.n0_override = 2;
    StatisticsTable T = statistics_table(w, p);

    CHECK(T.n0 == 2);
    REQUIRE(T.scales.size() == 2);
    CHECK(T.scales[0].m == 2);
    CHECK(T.scales[1].m == 3);
    REQUIRE(T.family.size() == 2);
    CHECK(T.family[0].interval == OnesInterval{1, 4});
    CHECK(T.family[1].interval == OnesInterval{5, 8});
    check_family_against_search(T, w, 4, p.epsilon);
}

TEST_CASE("moving one zero across a one changes the table", "[statistics]") {
    ParamSet p;
    BitString w = from_gaps({1, 1, 2, 0, 1, 1, 2, 0});
    BitString v = from_gaps({1, 2, 1, 0, 1, 1, 2, 0});
    StatisticsTable A = statistics_table(w, p);
    StatisticsTable B = statistics_table(v, p);

    CHECK(!tables_equal(A, B));

    // the pair row: the move crosses the boundary between blocks 1 and 2
    const ScaleRow& ra = A.scales[1];
    const ScaleRow& rb = B.scales[1];
    REQUIRE(ra.m == 1);
    REQUIRE(rb.m == 1);
    CHECK(ra.blocks[0] == BlockStat{2, 2, std::nullopt});
    CHECK(ra.blocks[1] == BlockStat{2, 2, StringType::imbalanced()});
    CHECK(rb.blocks[0] == BlockStat{2, 3, StringType::imbalanced()});
    CHECK(rb.blocks[1] == BlockStat{2, 1, StringType::imbalanced()});
    CHECK(ra.blocks[2] == rb.blocks[2]);
    CHECK(ra.blocks[3] == rb.blocks[3]);

    REQUIRE(A.family.size() == 4);
    CHECK(A.family[0].interval == OnesInterval{1, 3});
    CHECK(A.family[0].zeros == 4);
    CHECK(A.family[0].side == ImbalanceSide::Above);
    CHECK(A.family[1].interval == OnesInterval{4, 4});
    CHECK(A.family[2].interval == OnesInterval{5, 7});
    CHECK(A.family[3].interval == OnesInterval{8, 8});
    REQUIRE(B.family.size() == 4);
    CHECK(B.family[0].interval == OnesInterval{1, 2});
    CHECK(B.family[0].zeros == 3);
    CHECK(B.family[1].interval == OnesInterval{3, 4});
    CHECK(B.family[1].zeros == 1);
    CHECK(B.family[1].side == ImbalanceSide::Below);
    CHECK(B.family[2].interval == OnesInterval{5, 7});
    CHECK(B.family[3].interval == OnesInterval{8, 8});

    check_family_against_search(A, w, 1, p.epsilon);
    check_family_against_search(B, v, 1, p.epsilon);
}

TEST_CASE("reversal keeps the counts but not the table", "[statistics]") {
    ParamSet p;
    BitString w = from_gaps({2, 0, 1, 1, 0, 2, 1, 1});
    BitString r = w.reversed();

    CHECK(r.length() == w.length());
    CHECK(r.ones() == w.ones());
    CHECK(r.zeros() == w.zeros());
    CHECK(!tables_equal(statistics_table(w, p), statistics_table(r, p)));
}

TEST_CASE("serialization is canonical and stable", "[statistics]") {
    ParamSet p = half(5);
    StatisticsTable A = statistics_table(heavy_string(), p);
    StatisticsTable B = statistics_table(heavy_string(), p);

    CHECK(tables_equal(A, B));
    std::string sa = canonical_serialization(A);
    CHECK(sa == canonical_serialization(B));
    CHECK(sa ==
          "v1;len=125;ones=32;n=5;n0=5;red=powers-of-two;family=exact;"
          "m5=(32,93,imbalanced);I=[1,32;1,125;93;above]");
}

TEST_CASE("collision scan flags a duplicated code word", "[statistics]") {
    ParamSet p;
    std::vector<BitString> code{from_gaps({2, 0, 1, 1}), from_gaps({1, 1, 2, 0}),
                                from_gaps({2, 0, 1, 1})};
    CollisionReport rep = find_collision(code, p);
    REQUIRE(rep.pair.has_value());
    CHECK(rep.pair->first == 0);
    CHECK(rep.pair->second == 2);
    CHECK(rep.distinct_keys == 2);
    CHECK(rep.log2_key_bound > 0.0);
}

TEST_CASE("collision scan keys on both reading directions", "[statistics]") {
    // all gaps equal to two; move one zero between adjacent gaps
    ParamSet p = half(2);
    BitString w = from_gaps({2, 2, 2, 2, 2, 2, 2, 2});
    BitString interior = from_gaps({2, 2, 2, 2, 1, 3, 2, 2});
    BitString straddling = from_gaps({2, 2, 2, 1, 3, 2, 2, 2});

    // both rearrangements keep length and ones count
    CHECK(interior.length() == w.length());
    CHECK(straddling.length() == w.length());

    // inside one scale-floor block the move is invisible to every cell
    CollisionReport hit = find_collision({w, interior}, p);
    CHECK(tables_equal(statistics_table(w, p), statistics_table(interior, p)));
    REQUIRE(hit.pair.has_value());
    CHECK(*hit.pair == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(hit.distinct_keys == 1);

    // across the block boundary the cell sums shift and the keys split
    CollisionReport miss = find_collision({w, straddling}, p);
    CHECK(!tables_equal(statistics_table(w, p), statistics_table(straddling, p)));
    CHECK(!miss.pair.has_value());
    CHECK(miss.distinct_keys == 2);
}

TEST_CASE("collision scan separates different ones counts", "[statistics]") {
    ParamSet p;
    CollisionReport rep = find_collision(
        {from_gaps({1, 1, 1, 1}), from_gaps({1, 1, 1, 1, 1, 1, 1, 1})}, p);
    CHECK(!rep.pair.has_value());
    CHECK(rep.distinct_keys == 2);
}
