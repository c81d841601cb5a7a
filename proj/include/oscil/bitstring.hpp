#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oscil/errors.hpp"
#include "oscil/rational.hpp"

namespace oscil {

// Closed interval [lo, hi] of ones-indices; empty iff hi < lo. Endpoints
// may lie outside [1, L]: substring extraction clamps per the convention
// "start of string when lo <= 0, end of string when hi >= L".
struct OnesInterval {
    std::int64_t lo = 1;
    std::int64_t hi = 0;
    bool empty() const { return hi < lo; }
    std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
    bool operator==(const OnesInterval&) const = default;
};

// Real endpoints round inward: [x, y] -> [ceil(x), floor(y)]. Every call
// site that needs fractional endpoints goes through here.
inline OnesInterval round_interval(const Rational& x, const Rational& y) {
    return OnesInterval{ceil64(x), floor64(y)};
}

// Half-open range of bit positions [begin, end), 1-based.
struct BitRange {
    std::int64_t begin = 1;
    std::int64_t end = 1;
    std::int64_t length() const { return end - begin; }
    bool operator==(const BitRange&) const = default;
};

// Immutable packed bit string. Bit positions and ones-indices are 1-based
// throughout the public interface. Words hold bits LSB-first; unused high
// bits of the last word are kept zero so equality is word equality.
class BitString {
public:
    BitString() = default;

    class Builder {
    public:
        explicit Builder(std::int64_t reserve_bits = 0) {
            words_.reserve(static_cast<std::size_t>((reserve_bits + 63) / 64));
        }
        void push(bool bit) {
            std::size_t w = static_cast<std::size_t>(size_ >> 6);
            if (w == words_.size()) words_.push_back(0);
            if (bit) words_[w] |= std::uint64_t{1} << (size_ & 63);
            ++size_;
        }
        void push_run(bool bit, std::int64_t count) {
            for (std::int64_t k = 0; k < count; ++k) push(bit);
        }
        void append(const BitString& s) {
            for (std::int64_t p = 1; p <= s.length(); ++p) push(s.bit(p));
        }
        BitString finish() {
            BitString out;
            out.words_ = std::move(words_);
            out.size_ = size_;
            out.finalize();
            return out;
        }

    private:
        std::vector<std::uint64_t> words_;
        std::int64_t size_ = 0;
    };

    static BitString from_text(std::string_view line) {
        Builder b(static_cast<std::int64_t>(line.size()));
        for (std::size_t k = 0; k < line.size(); ++k) {
            char c = line[k];
            if (c != '0' && c != '1')
                throw ParseError("bit string has non-binary character at column " +
                                 std::to_string(k + 1));
            b.push(c == '1');
        }
        return b.finish();
    }

    static BitString from_words(std::vector<std::uint64_t> words, std::int64_t bits) {
        BitString out;
        out.words_ = std::move(words);
        out.size_ = bits;
        std::size_t need = static_cast<std::size_t>((bits + 63) / 64);
        if (out.words_.size() < need)
            throw ParseError("payload shorter than declared bit length");
        out.words_.resize(need);
        if (bits & 63 && need > 0)
            out.words_.back() &= (std::uint64_t{1} << (bits & 63)) - 1;
        out.finalize();
        return out;
    }

    static BitString concat(const BitString& a, const BitString& b) {
        Builder out(a.length() + b.length());
        out.append(a);
        out.append(b);
        return out.finish();
    }

    std::int64_t length() const { return size_; }
    std::int64_t ones() const { return static_cast<std::int64_t>(one_pos_.size()); }
    std::int64_t zeros() const { return size_ - ones(); }
    bool empty() const { return size_ == 0; }
    bool starts_with_one() const { return size_ > 0 && bit(1); }

    bool bit(std::int64_t pos) const {
        check(pos >= 1 && pos <= size_, "bit position out of range");
        std::uint64_t w = words_[static_cast<std::size_t>((pos - 1) >> 6)];
        return (w >> ((pos - 1) & 63)) & 1;
    }

    // Ones among bit positions [1, prefix].
    std::int64_t rank_ones(std::int64_t prefix) const {
        check(prefix >= 0 && prefix <= size_, "rank prefix out of range");
        std::size_t w = static_cast<std::size_t>(prefix >> 6);
        std::int64_t r = word_rank_[w];
        if (prefix & 63)
            r += std::popcount(words_[w] & ((std::uint64_t{1} << (prefix & 63)) - 1));
        return r;
    }

    // Bit position of the k-th one, 1 <= k <= ones().
    std::int64_t one_position(std::int64_t k) const {
        check(k >= 1 && k <= ones(), "ones-index out of range");
        return one_pos_[static_cast<std::size_t>(k - 1)];
    }

    // Zeros strictly after the i-th one and before the (i+1)-st (after the
    // last one when i = ones(); leading zeros when i = 0).
    std::int64_t gap_zeros(std::int64_t i) const {
        check(i >= 0 && i <= ones(), "gap index out of range");
        std::int64_t from = (i == 0) ? 1 : one_position(i) + 1;
        std::int64_t to = (i == ones()) ? size_ + 1 : one_position(i + 1);
        return to - from;
    }

    // Bit span of the ones-interval substring, with the clamping rules:
    // begin at the lo-th one (string start if lo <= 0), end just before
    // the (hi+1)-st one (string end if hi >= ones()).
    BitRange interval_bits(OnesInterval I) const {
        std::int64_t L = ones();
        std::int64_t begin, end;
        if (I.lo <= 0)
            begin = 1;
        else if (I.lo <= L)
            begin = one_position(I.lo);
        else
            begin = size_ + 1;
        if (I.hi >= L)
            end = size_ + 1;
        else if (I.hi >= 0)
            end = one_position(I.hi + 1);
        else
            end = 1;
        if (end < begin) end = begin;
        return BitRange{begin, end};
    }

    BitString substring(OnesInterval I) const { return slice(interval_bits(I)); }

    std::int64_t ones_in(OnesInterval I) const {
        BitRange r = interval_bits(I);
        return rank_ones(r.end - 1) - rank_ones(r.begin - 1);
    }

    std::int64_t zeros_in(OnesInterval I) const {
        BitRange r = interval_bits(I);
        return r.length() - (rank_ones(r.end - 1) - rank_ones(r.begin - 1));
    }

    // Dyadic block w_{m,i}: ones-interval [(i-1)*2^m + 1, i*2^m].
    static OnesInterval dyadic_interval(int m, std::int64_t i) {
        check(m >= 0 && m < 62 && i >= 1, "bad dyadic block coordinates");
        std::int64_t len = std::int64_t{1} << m;
        return OnesInterval{(i - 1) * len + 1, i * len};
    }
    BitString dyadic_block(int m, std::int64_t i) const {
        return substring(dyadic_interval(m, i));
    }

    BitString slice(BitRange r) const {
        check(r.begin >= 1 && r.begin <= r.end && r.end <= size_ + 1,
              "bit range out of bounds");
        std::int64_t n = r.length();
        std::vector<std::uint64_t> out(static_cast<std::size_t>((n + 63) / 64), 0);
        std::int64_t base = r.begin - 1;  // 0-based first bit
        std::size_t src = static_cast<std::size_t>(base >> 6);
        int off = static_cast<int>(base & 63);
        for (std::size_t k = 0; k < out.size(); ++k) {
            std::uint64_t lo = words_[src + k] >> off;
            std::uint64_t hi = 0;
            if (off != 0 && src + k + 1 < words_.size())
                hi = words_[src + k + 1] << (64 - off);
            out[k] = lo | hi;
        }
        return from_words(std::move(out), n);
    }

    // First bit stays, the rest reverses; equivalently the gap vector
    // (z_1, ..., z_L) reverses. Requires a leading one.
    BitString reversed() const {
        if (!starts_with_one())
            throw PreconditionError("rev needs a string starting with a one");
        Builder b(size_);
        b.push(true);
        for (std::int64_t j = 2; j <= size_; ++j) b.push(bit(size_ + 2 - j));
        return b.finish();
    }

    // Drop_delta: remove the last delta ones (delta >= 0) or the first
    // -delta ones (delta < 0), zeros beyond the cut included.
    BitString drop(std::int64_t delta) const {
        std::int64_t L = ones();
        if (delta > L || delta < -L)
            throw PreconditionError("drop shift exceeds ones count");
        if (delta >= 0) return substring(OnesInterval{1, L - delta});
        return substring(OnesInterval{1 - delta, L});
    }

    std::string to_text() const {
        std::string s;
        s.reserve(static_cast<std::size_t>(size_));
        for (std::int64_t p = 1; p <= size_; ++p) s.push_back(bit(p) ? '1' : '0');
        return s;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitString& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }

private:
    static void check(bool ok, const char* what) {
        if (!ok) throw PreconditionError(what);
    }

    void finalize() {
        word_rank_.assign(words_.size() + 1, 0);
        one_pos_.clear();
        for (std::size_t w = 0; w < words_.size(); ++w) {
            word_rank_[w + 1] = word_rank_[w] + std::popcount(words_[w]);
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                one_pos_.push_back(static_cast<std::int64_t>(w) * 64 + b + 1);
                bits &= bits - 1;
            }
        }
    }

    std::vector<std::uint64_t> words_;
    std::vector<std::int64_t> word_rank_{0};
    std::vector<std::int64_t> one_pos_;
    std::int64_t size_ = 0;
};

}  // namespace oscil
