#include "wzns/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "wzns/error.hpp"
#include "wzns/lattice.hpp"

namespace wzns {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::int64_t v) { return splitmix(h ^ splitmix(std::uint64_t(v))); }

void fill_levels(std::vector<double>& v, std::size_t offset, std::size_t points, double T, int from_level,
                 int to_level, std::uint64_t seed, const Vec3i& k, int alpha)
{
    const std::size_t intervals = points - 1;
    for (int lvl = from_level; lvl <= to_level; ++lvl) {
        const std::size_t stride = intervals >> lvl;
        const double sd = std::sqrt(T / std::ldexp(1.0, lvl + 1));
        for (std::size_t j = 1; j < (std::size_t(1) << lvl); j += 2) {
            const std::size_t idx = j * stride;
            const double mid = 0.5 * (v[offset + idx - stride] + v[offset + idx + stride]);
            v[offset + idx] = mid + sd * keyed_normal(seed, k, alpha, lvl, j);
        }
    }
}

}  // namespace

double keyed_normal(std::uint64_t seed, const Vec3i& k, int alpha, int level, std::uint64_t position)
{
    std::uint64_t h = splitmix(seed);
    h = mix(h, k[0]);
    h = mix(h, k[1]);
    h = mix(h, k[2]);
    h = mix(h, alpha);
    h = mix(h, level);
    h = mix(h, std::int64_t(position));
    const std::uint64_t h2 = splitmix(h);
    const double u1 = (double(h >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = double(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

BrownianEnsemble::BrownianEnsemble(double horizon, int level, std::uint64_t seed, std::vector<Vec3i> modes,
                                   std::vector<double> values)
    : T_(horizon), level_(level), seed_(seed), modes_(std::move(modes)), values_(std::move(values))
{
    if (values_.size() != path_count() * points()) throw Error(ErrorCode::internal, "ensemble storage size mismatch");
}

std::optional<std::size_t> BrownianEnsemble::find_mode(const Vec3i& k) const
{
    auto it = std::lower_bound(modes_.begin(), modes_.end(), k);
    if (it == modes_.end() || *it != k) return std::nullopt;
    return std::size_t(it - modes_.begin());
}

std::span<const double> BrownianEnsemble::path(std::size_t mode_idx, int alpha) const
{
    return {values_.data() + (2 * mode_idx + std::size_t(alpha - 1)) * points(), points()};
}

std::span<const double> BrownianEnsemble::path(const RealIndex& idx) const
{
    auto m = find_mode(idx.k);
    if (!m) throw Error(ErrorCode::unknown_mode, "ensemble has no path for the requested wave vector");
    return path(*m, idx.alpha);
}

BrownianEnsemble sample_ensemble(std::vector<Vec3i> modes, double horizon, int level, std::uint64_t seed)
{
    if (!(horizon > 0.0)) throw Error(ErrorCode::invalid_argument, "horizon T must be > 0");
    if (level < 0 || level > 30) throw Error(ErrorCode::invalid_argument, "dyadic level must lie in [0, 30]");
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    const std::size_t points = (std::size_t(1) << level) + 1;
    std::vector<double> values(2 * modes.size() * points, 0.0);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        for (int alpha = 1; alpha <= 2; ++alpha) {
            const std::size_t off = (2 * m + std::size_t(alpha - 1)) * points;
            values[off + points - 1] = std::sqrt(horizon) * keyed_normal(seed, modes[m], alpha, 0, 0);
            fill_levels(values, off, points, horizon, 1, level, seed, modes[m], alpha);
        }
    }
    return BrownianEnsemble(horizon, level, seed, std::move(modes), std::move(values));
}

BrownianEnsemble refine(const BrownianEnsemble& e, int new_level)
{
    if (new_level < e.level()) throw Error(ErrorCode::invalid_argument, "refine cannot coarsen an ensemble");
    if (new_level > 30) throw Error(ErrorCode::invalid_argument, "dyadic level must lie in [0, 30]");
    const std::size_t points = (std::size_t(1) << new_level) + 1;
    const std::size_t ratio = std::size_t(1) << (new_level - e.level());
    std::vector<double> values(e.path_count() * points, 0.0);
    for (std::size_t p = 0; p < e.path_count(); ++p) {
        const auto old = e.path(p / 2, int(p % 2) + 1);
        const std::size_t off = p * points;
        for (std::size_t j = 0; j < old.size(); ++j) values[off + j * ratio] = old[j];
        fill_levels(values, off, points, e.horizon(), e.level() + 1, new_level, e.seed(), e.modes()[p / 2],
                    int(p % 2) + 1);
    }
    return BrownianEnsemble(e.horizon(), new_level, e.seed(), e.modes(), std::move(values));
}

BrownianEnsemble truncate_after(const BrownianEnsemble& e, std::size_t last_index)
{
    std::vector<double> values = e.raw_values();
    for (std::size_t p = 0; p < e.path_count(); ++p) {
        for (std::size_t j = last_index + 1; j < e.points(); ++j) {
            values[p * e.points() + j] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return BrownianEnsemble(e.horizon(), e.level(), e.seed(), e.modes(), std::move(values));
}

ComplexPathFamily complex_from_real(const BrownianEnsemble& e)
{
    const std::size_t pts = e.points();
    std::vector<Complex> values(e.path_count() * pts);
    for (std::size_t m = 0; m < e.modes().size(); ++m) {
        const Vec3i& k = e.modes()[m];
        const auto neg = e.find_mode(-k);
        if (!neg) throw Error(ErrorCode::incomplete_ensemble, "ensemble lacks the negated mode of a sampled wave vector");
        const bool plus = is_plus(k);
        for (int alpha = 1; alpha <= 2; ++alpha) {
            const auto bk = e.path(m, alpha);
            const auto bn = e.path(*neg, alpha);
            Complex* out = values.data() + (2 * m + std::size_t(alpha - 1)) * pts;
            for (std::size_t j = 0; j < pts; ++j) {
                out[j] = plus ? Complex(bk[j], bn[j]) : Complex(bn[j], -bk[j]);
            }
        }
    }
    return ComplexPathFamily(e.modes(), pts, std::move(values));
}

std::size_t PiecewiseLinearFamily::segment_of(double t) const
{
    if (t < partition_.front() || t > partition_.back()) {
        throw Error(ErrorCode::time_range, "time outside the partition range");
    }
    auto it = std::upper_bound(partition_.begin(), partition_.end(), t);
    std::size_t seg = std::size_t(it - partition_.begin());
    seg = seg == 0 ? 0 : seg - 1;
    return std::min(seg, segments() - 1);
}

double PiecewiseLinearFamily::value(std::size_t component, double t) const
{
    const std::size_t s = segment_of(t);
    return node_value(component, s) + slope(component, s) * (t - partition_[s]);
}

PiecewiseLinearFamily piecewise_linear(const BrownianEnsemble& e, int n)
{
    if (n < 1) throw Error(ErrorCode::invalid_argument, "approximation index n must be >= 1");
    if (std::size_t(n) > e.intervals()) {
        throw Error(ErrorCode::refine_first, "n = " + std::to_string(n) + " exceeds the ensemble resolution 2^" +
                                                 std::to_string(e.level()) + "; refine the ensemble first");
    }
    PiecewiseLinearFamily pl;
    pl.n_ = n;
    pl.T_ = e.horizon();
    const std::size_t I = e.intervals();
    for (int i = 0; i <= n; ++i) {
        // round(i I / n) in integer arithmetic
        const std::size_t g = (2 * std::size_t(i) * I + std::size_t(n)) / (2 * std::size_t(n));
        pl.grid_nodes_.push_back(g);
        pl.partition_.push_back(e.time(g));
    }
    const std::size_t nodes = pl.grid_nodes_.size();
    for (std::size_t p = 0; p < e.path_count(); ++p) {
        pl.labels_.push_back(e.label(p));
        const auto path = e.path(p / 2, int(p % 2) + 1);
        for (std::size_t g : pl.grid_nodes_) pl.values_.push_back(path[g]);
    }
    pl.slopes_.resize(e.path_count() * (nodes - 1));
    for (std::size_t c = 0; c < e.path_count(); ++c) {
        for (std::size_t i = 0; i + 1 < nodes; ++i) {
            const double dv = pl.values_[c * nodes + i + 1] - pl.values_[c * nodes + i];
            pl.slopes_[c * (nodes - 1) + i] = dv / (pl.partition_[i + 1] - pl.partition_[i]);
        }
    }
    return pl;
}

namespace {
constexpr std::string_view ensemble_magic = "WZNSENS";
}

void write_ensemble(std::ostream& os, const BrownianEnsemble& e)
{
    detail::write_magic(os, ensemble_magic);
    detail::write_pod(os, ensemble_format_version);
    detail::write_pod(os, e.horizon());
    detail::write_pod(os, std::uint32_t(e.level()));
    detail::write_pod(os, std::uint32_t(e.modes().size()));
    detail::write_pod(os, e.seed());
    for (const auto& k : e.modes()) {
        for (int c : k) detail::write_pod(os, std::int32_t(c));
    }
    for (double v : e.raw_values()) detail::write_pod(os, v);
    if (!os) throw Error(ErrorCode::io, "failed to write ensemble");
}

BrownianEnsemble read_ensemble(std::istream& is)
{
    detail::expect_magic(is, ensemble_magic);
    const auto version = detail::read_pod<std::uint32_t>(is);
    if (version != ensemble_format_version) {
        throw Error(ErrorCode::unsupported_version, "ensemble format version " + std::to_string(version) + " is not supported");
    }
    const double T = detail::read_pod<double>(is);
    const auto level = detail::read_pod<std::uint32_t>(is);
    const auto count = detail::read_pod<std::uint32_t>(is);
    const auto seed = detail::read_pod<std::uint64_t>(is);
    if (level > 30) throw Error(ErrorCode::io, "ensemble header has invalid level");
    std::vector<Vec3i> modes(count);
    for (auto& k : modes) {
        for (int& c : k) c = detail::read_pod<std::int32_t>(is);
    }
    const std::size_t points = (std::size_t(1) << level) + 1;
    std::vector<double> values(2 * std::size_t(count) * points);
    for (double& v : values) v = detail::read_pod<double>(is);
    return BrownianEnsemble(T, int(level), seed, std::move(modes), std::move(values));
}

void save_ensemble(const std::string& path, const BrownianEnsemble& e)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
    write_ensemble(os, e);
}

BrownianEnsemble load_ensemble(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::io, "cannot open " + path);
    return read_ensemble(is);
}

}  // namespace wzns
