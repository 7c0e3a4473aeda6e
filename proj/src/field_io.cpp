#include <fstream>

#include "binary_io.hpp"
#include "wzns/spectral.hpp"

namespace wzns {

namespace {
constexpr std::string_view field_magic = "WZNSFLD";
}

void write_field(std::ostream& os, const SpectralField& f, std::uint64_t config_hash, std::uint64_t seed)
{
    detail::write_magic(os, field_magic);
    detail::write_pod(os, field_format_version);
    detail::write_pod(os, std::int32_t(f.M()));
    detail::write_pod(os, std::uint64_t(f.size() - 1));
    detail::write_pod(os, config_hash);
    detail::write_pod(os, seed);
    const std::size_t origin = f.cube().origin();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i == origin) continue;
        for (const Complex& c : f[i]) {
            detail::write_pod(os, c.real());
            detail::write_pod(os, c.imag());
        }
    }
    if (!os) throw Error(ErrorCode::io, "failed to write field");
}

LoadedField read_field(std::istream& is)
{
    detail::expect_magic(is, field_magic);
    const auto version = detail::read_pod<std::uint32_t>(is);
    if (version != field_format_version) {
        throw Error(ErrorCode::unsupported_version, "field format version " + std::to_string(version) + " is not supported");
    }
    const auto M = detail::read_pod<std::int32_t>(is);
    const auto count = detail::read_pod<std::uint64_t>(is);
    const auto hash = detail::read_pod<std::uint64_t>(is);
    const auto seed = detail::read_pod<std::uint64_t>(is);
    if (M < 1) throw Error(ErrorCode::io, "field header has invalid truncation");
    SpectralField f(M);
    if (count != f.size() - 1) throw Error(ErrorCode::io, "field header mode count does not match truncation");
    const std::size_t origin = f.cube().origin();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i == origin) continue;
        for (Complex& c : f[i]) {
            const double re = detail::read_pod<double>(is);
            const double im = detail::read_pod<double>(is);
            c = {re, im};
        }
    }
    return {std::move(f), hash, seed};
}

void save_field(const std::string& path, const SpectralField& f, std::uint64_t config_hash, std::uint64_t seed)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
    write_field(os, f, config_hash, seed);
}

LoadedField load_field(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::io, "cannot open " + path);
    return read_field(is);
}

}  // namespace wzns
