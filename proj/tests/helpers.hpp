#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oscil/bitstring.hpp"

namespace testutil {

using oscil::BitString;

// 1 0^{z1} 1 0^{z2} ... 1 0^{zL}
inline BitString from_gaps(const std::vector<std::int64_t>& gaps) {
    std::int64_t total = 0;
    for (std::int64_t z : gaps) total += 1 + z;
    BitString::Builder b(total);
    for (std::int64_t z : gaps) {
        b.push(true);
        b.push_run(false, z);
    }
    return b.finish();
}

inline BitString random_bits(std::mt19937_64& rng, std::int64_t len,
                             double one_prob = 0.5) {
    std::bernoulli_distribution coin(one_prob);
    BitString::Builder b(len);
    for (std::int64_t k = 0; k < len; ++k) b.push(coin(rng));
    return b.finish();
}

// Random string with exactly `ones` ones, starting with a one, gaps
// uniform in [0, max_gap].
inline BitString random_with_ones(std::mt19937_64& rng, std::int64_t ones,
                                  std::int64_t max_gap) {
    std::uniform_int_distribution<std::int64_t> gap(0, max_gap);
    std::vector<std::int64_t> gaps(static_cast<std::size_t>(ones));
    for (auto& z : gaps) z = gap(rng);
    return from_gaps(gaps);
}

// All 2^len strings of exactly the given length, as text.
inline std::vector<std::string> all_strings(int len) {
    std::vector<std::string> out;
    out.reserve(std::size_t{1} << len);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        std::string s(static_cast<std::size_t>(len), '0');
        for (int k = 0; k < len; ++k)
            if (mask >> k & 1) s[static_cast<std::size_t>(k)] = '1';
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace testutil
