#pragma once

// Corpus file formats. Text: one '0'/'1' string per line, newline-terminated,
// ASCII. Packed: a binary container for large corpora. Both round-trip
// bit-exactly; readers auto-detect by the leading magic.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "oscil/bitstring.hpp"
#include "oscil/errors.hpp"

namespace oscil {

// Packed layout, all integers little-endian:
//   "OSCB" | u32 version | u64 word count
//   per word: u64 bit length | ceil(length/8) payload bytes,
//   bit k stored in byte k/8 at position k%8 from the least significant bit.
inline constexpr char kPackedMagic[4] = {'O', 'S', 'C', 'B'};
inline constexpr std::uint32_t kPackedVersion = 1;

namespace detail {

template <typename U>
void put_le(std::ostream& os, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i)
        os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(std::istream& is) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        int c = is.get();
        if (c == std::istream::traits_type::eof())
            throw PreconditionError("packed container truncated");
        v |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace detail

inline void write_text(std::ostream& os, const std::vector<BitString>& words) {
    for (const BitString& w : words) os << w.to_text() << '\n';
}

inline std::vector<BitString> read_text(std::istream& is) {
    std::vector<BitString> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out.push_back(BitString::from_text(line));
    }
    return out;
}

inline void write_packed(std::ostream& os, const std::vector<BitString>& words) {
    os.write(kPackedMagic, 4);
    detail::put_le<std::uint32_t>(os, kPackedVersion);
    detail::put_le<std::uint64_t>(os, words.size());
    for (const BitString& w : words) {
        const std::int64_t n = w.length();
        detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(n));
        unsigned char byte = 0;
        for (std::int64_t k = 0; k < n; ++k) {
            if (w.bit(k + 1)) byte |= static_cast<unsigned char>(1u << (k % 8));
            if (k % 8 == 7) {
                os.put(static_cast<char>(byte));
                byte = 0;
            }
        }
        if (n % 8 != 0) os.put(static_cast<char>(byte));
    }
}

inline std::vector<BitString> read_packed(std::istream& is) {
    char magic[4] = {};
    is.read(magic, 4);
    if (is.gcount() != 4 || !std::equal(magic, magic + 4, kPackedMagic))
        throw PreconditionError("not a packed container: bad magic");
    const auto version = detail::get_le<std::uint32_t>(is);
    if (version != kPackedVersion)
        throw PreconditionError("unsupported packed container version " +
                                std::to_string(version));
    const auto count = detail::get_le<std::uint64_t>(is);
    std::vector<BitString> out;
    out.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) {
        const auto n = detail::get_le<std::uint64_t>(is);
        std::string bits(n, '0');
        unsigned char byte = 0;
        for (std::uint64_t k = 0; k < n; ++k) {
            if (k % 8 == 0) {
                int c = is.get();
                if (c == std::istream::traits_type::eof())
                    throw PreconditionError("packed container truncated");
                byte = static_cast<unsigned char>(c);
            }
            if (byte & (1u << (k % 8))) bits[k] = '1';
        }
        out.push_back(BitString::from_text(bits));
    }
    return out;
}

inline std::vector<BitString> read_strings(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open input file: " + path);
    char magic[4] = {};
    f.read(magic, 4);
    const bool packed =
        f.gcount() == 4 && std::equal(magic, magic + 4, kPackedMagic);
    f.clear();
    f.seekg(0);
    return packed ? read_packed(f) : read_text(f);
}

inline void write_strings(const std::string& path,
                          const std::vector<BitString>& words, bool packed) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw PreconditionError("cannot open output file: " + path);
    if (packed)
        write_packed(f, words);
    else
        write_text(f, words);
    if (!f) throw ResourceError("write failed: " + path);
}

}  // namespace oscil
