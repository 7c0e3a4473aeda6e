#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "wzns/error.hpp"

namespace wzns::detail {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

template <class T>
void write_pod(std::ostream& os, const T& v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error(ErrorCode::io, "unexpected end of binary stream");
    return v;
}

inline void write_magic(std::ostream& os, std::string_view magic)
{
    char buf[8] = {};
    std::memcpy(buf, magic.data(), std::min<std::size_t>(magic.size(), 8));
    os.write(buf, 8);
}

inline void expect_magic(std::istream& is, std::string_view magic)
{
    char buf[8] = {};
    is.read(buf, 8);
    char want[8] = {};
    std::memcpy(want, magic.data(), std::min<std::size_t>(magic.size(), 8));
    if (!is || std::memcmp(buf, want, 8) != 0) throw Error(ErrorCode::io, "bad magic: not a " + std::string(magic) + " file");
}

}  // namespace wzns::detail
