#include "wzns/rough.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "wzns/error.hpp"

namespace wzns {

namespace {

// Accumulates I = int X (x) dX along a piecewise-linear path and records
// (X, I) whenever keep() is called.
class AreaAccumulator {
public:
    explicit AreaAccumulator(std::size_t dim) : dim_(dim), x_(dim, 0.0), area_(dim * dim, 0.0) {}

    void start(std::span<const double> x0) { std::copy(x0.begin(), x0.end(), x_.begin()); }

    void advance(std::span<const double> x_next)
    {
        std::vector<double> d(dim_);
        for (std::size_t a = 0; a < dim_; ++a) d[a] = x_next[a] - x_[a];
        for (std::size_t a = 0; a < dim_; ++a) {
            const double base = x_[a] + 0.5 * d[a];
            double* row = area_.data() + a * dim_;
            for (std::size_t b = 0; b < dim_; ++b) row[b] += base * d[b];
        }
        std::copy(x_next.begin(), x_next.end(), x_.begin());
    }

    void keep(std::vector<double>& path, std::vector<double>& area) const
    {
        path.insert(path.end(), x_.begin(), x_.end());
        area.insert(area.end(), area_.begin(), area_.end());
    }

private:
    std::size_t dim_;
    std::vector<double> x_;
    std::vector<double> area_;
};

bool contains_time(std::span<const double> grid, double t, double tol)
{
    auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
    return it != grid.end() && std::abs(*it - t) <= tol;
}

}  // namespace

RoughPathLift::RoughPathLift(std::vector<double> grid, std::size_t dim, std::vector<double> path, double alpha,
                             std::vector<RealIndex> labels)
    : grid_(std::move(grid)), dim_(dim), path_(std::move(path)), alpha_(alpha), labels_(std::move(labels))
{
    if (grid_.empty()) throw Error(ErrorCode::grid_incompatible, "empty lift grid");
    if (path_.size() != grid_.size() * dim_) throw Error(ErrorCode::grid_incompatible, "path samples do not match grid");
    if (!labels_.empty() && labels_.size() != dim_) throw Error(ErrorCode::invalid_argument, "label count mismatch");
    if (!(alpha_ > 1.0 / 3.0 && alpha_ <= 0.5)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (1/3, 1/2]");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        if (!(grid_[i] > grid_[i - 1])) throw Error(ErrorCode::grid_incompatible, "lift grid must be increasing");
    }
    AreaAccumulator acc(dim_);
    acc.start({path_.data(), dim_});
    std::vector<double> dummy;
    area_.reserve(grid_.size() * dim_ * dim_);
    acc.keep(dummy, area_);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        acc.advance({path_.data() + i * dim_, dim_});
        acc.keep(dummy, area_);
    }
}

RoughPathLift RoughPathLift::with_area(RoughPathLift base, std::vector<double> area)
{
    if (area.size() != base.area_.size()) throw Error(ErrorCode::internal, "area size mismatch");
    base.area_ = std::move(area);
    return base;
}

std::vector<double> RoughPathLift::increment(std::size_t s, std::size_t t) const
{
    std::vector<double> z(dim_);
    for (std::size_t a = 0; a < dim_; ++a) z[a] = path(t, a) - path(s, a);
    return z;
}

std::vector<double> RoughPathLift::second_level(std::size_t s, std::size_t t) const
{
    std::vector<double> w(dim_ * dim_);
    const double* is = area_.data() + s * dim_ * dim_;
    const double* it = area_.data() + t * dim_ * dim_;
    for (std::size_t a = 0; a < dim_; ++a) {
        const double xs = path(s, a);
        for (std::size_t b = 0; b < dim_; ++b) {
            w[a * dim_ + b] = it[a * dim_ + b] - is[a * dim_ + b] - xs * (path(t, b) - path(s, b));
        }
    }
    return w;
}

RoughPathLift lift_linear_samples(std::vector<double> grid, std::size_t dim, std::vector<double> values, double alpha,
                                  std::vector<RealIndex> labels)
{
    return RoughPathLift(std::move(grid), dim, std::move(values), alpha, std::move(labels));
}

RoughPathLift canonical_lift(const PiecewiseLinearFamily& paths, std::span<const double> grid, double alpha)
{
    if (grid.empty()) throw Error(ErrorCode::grid_incompatible, "empty lift grid");
    const double tol = 1e-12 * paths.horizon();
    for (double t : paths.partition()) {
        if (!contains_time(grid, t, tol)) {
            throw Error(ErrorCode::grid_incompatible, "lift grid does not refine the partition of the paths");
        }
    }
    if (grid.front() < -tol || grid.back() > paths.horizon() + tol) {
        throw Error(ErrorCode::grid_incompatible, "lift grid leaves the path horizon");
    }
    const std::size_t dim = paths.components();
    std::vector<double> values;
    values.reserve(grid.size() * dim);
    for (double t : grid) {
        const double tc = std::clamp(t, 0.0, paths.horizon());
        for (std::size_t c = 0; c < dim; ++c) values.push_back(paths.value(c, tc));
    }
    // Partition nodes are exact samples, not interpolants.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto it = std::lower_bound(paths.partition().begin(), paths.partition().end(), grid[i] - tol);
        if (it != paths.partition().end() && std::abs(*it - grid[i]) <= tol) {
            const std::size_t node = std::size_t(it - paths.partition().begin());
            for (std::size_t c = 0; c < dim; ++c) values[i * dim + c] = paths.node_value(c, node);
        }
    }
    return RoughPathLift({grid.begin(), grid.end()}, dim, std::move(values), alpha, paths.labels());
}

RoughPathLift stratonovich_reference_lift(const BrownianEnsemble& e, std::span<const double> grid, double alpha)
{
    if (grid.empty()) throw Error(ErrorCode::grid_incompatible, "empty lift grid");
    const double h = e.step();
    std::vector<std::size_t> keep;
    for (double t : grid) {
        const double j = t / h;
        const double r = std::round(j);
        if (std::abs(j - r) > 1e-9 || r < 0 || r > double(e.intervals())) {
            throw Error(ErrorCode::grid_incompatible, "reference lift grid must consist of ensemble grid points");
        }
        keep.push_back(std::size_t(r));
    }
    for (std::size_t i = 1; i < keep.size(); ++i) {
        if (keep[i] <= keep[i - 1]) throw Error(ErrorCode::grid_incompatible, "lift grid must be increasing");
    }
    const std::size_t dim = e.path_count();
    std::vector<RealIndex> labels;
    for (std::size_t p = 0; p < dim; ++p) labels.push_back(e.label(p));

    // Accumulate at the finest resolution, store only the requested points.
    std::vector<double> x(dim);
    auto sample = [&](std::size_t j) {
        for (std::size_t p = 0; p < dim; ++p) x[p] = e.path(p / 2, int(p % 2) + 1)[j];
    };
    std::vector<double> path;
    path.reserve(keep.size() * dim);
    for (std::size_t j : keep) {
        sample(j);
        path.insert(path.end(), x.begin(), x.end());
    }
    RoughPathLift coarse({grid.begin(), grid.end()}, dim, std::move(path), alpha, labels);
    // The coarse constructor assumes linearity between kept points; replace
    // its area with the fine-grid accumulation.
    AreaAccumulator acc(dim);
    sample(keep.front());
    acc.start(x);
    std::vector<double> fine_path, fine_area;
    acc.keep(fine_path, fine_area);
    for (std::size_t i = 1; i < keep.size(); ++i) {
        for (std::size_t j = keep[i - 1] + 1; j <= keep[i]; ++j) {
            sample(j);
            acc.advance(x);
        }
        acc.keep(fine_path, fine_area);
    }
    return RoughPathLift::with_area(std::move(coarse), std::move(fine_area));
}

double chen_defect(const RoughPathLift& lift, std::size_t subgrid_points, std::size_t random_triples,
                   std::uint64_t seed)
{
    const std::size_t n = lift.points();
    const std::size_t d = lift.dim();
    double worst = 0.0;
    auto check = [&](std::size_t s, std::size_t u, std::size_t t) {
        const auto wst = lift.second_level(s, t);
        const auto wsu = lift.second_level(s, u);
        const auto wut = lift.second_level(u, t);
        const auto zsu = lift.increment(s, u);
        const auto zut = lift.increment(u, t);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                const double def = wst[a * d + b] - wsu[a * d + b] - wut[a * d + b] - zsu[a] * zut[b];
                worst = std::max(worst, std::abs(def));
            }
        }
    };
    const std::size_t stride = std::max<std::size_t>(1, (n - 1 + subgrid_points - 2) / std::max<std::size_t>(1, subgrid_points - 1));
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < n; i += stride) sub.push_back(i);
    if (sub.back() != n - 1) sub.push_back(n - 1);
    for (std::size_t a = 0; a < sub.size(); ++a) {
        for (std::size_t b = a; b < sub.size(); ++b) {
            for (std::size_t c = b; c < sub.size(); ++c) check(sub[a], sub[b], sub[c]);
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t r = 0; r < random_triples; ++r) {
        std::array<std::size_t, 3> idx{pick(rng), pick(rng), pick(rng)};
        std::sort(idx.begin(), idx.end());
        check(idx[0], idx[1], idx[2]);
    }
    return worst;
}

double symmetric_part_defect(const RoughPathLift& lift)
{
    const std::size_t d = lift.dim();
    double worst = 0.0;
    for (std::size_t s = 0; s < lift.points(); ++s) {
        for (std::size_t t = s; t < lift.points(); ++t) {
            const auto w = lift.second_level(s, t);
            const auto z = lift.increment(s, t);
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) {
                    const double sym = 0.5 * (w[a * d + b] + w[b * d + a]);
                    worst = std::max(worst, std::abs(sym - 0.5 * z[a] * z[b]));
                }
            }
        }
    }
    return worst;
}

std::vector<IndexPair> dyadic_pairs(int level)
{
    if (level < 0) throw Error(ErrorCode::invalid_argument, "dyadic level must be >= 0");
    std::vector<IndexPair> out;
    const std::size_t n = std::size_t(1) << level;
    for (int j = 0; j <= level; ++j) {
        const std::size_t stride = n >> j;
        for (std::size_t i = 0; i + stride <= n; i += stride) out.push_back({i, i + stride});
    }
    return out;
}

std::vector<IndexPair> all_pairs(std::size_t points)
{
    std::vector<IndexPair> out;
    for (std::size_t s = 0; s < points; ++s) {
        for (std::size_t t = s + 1; t < points; ++t) out.push_back({s, t});
    }
    return out;
}

namespace {

template <class V, class NormFn>
double seminorm_impl(const TwoIndexMap<V>& map, double exponent, NormFn&& norm_of)
{
    if (!(exponent > 0.0)) throw Error(ErrorCode::invalid_argument, "Hoelder exponent must be > 0");
    if (map.grid.empty() || map.pairs.empty()) throw Error(ErrorCode::undefined_seminorm, "seminorm of an empty two-index map");
    double sup = 0.0;
    for (std::size_t p = 0; p < map.pairs.size(); ++p) {
        const auto [s, t] = map.pairs[p];
        const double dt = map.grid[t] - map.grid[s];
        if (!(dt > 0.0)) continue;
        sup = std::max(sup, norm_of(map.values[p]) / std::pow(dt, exponent));
    }
    return sup;
}

template <class V, class NormFn>
std::vector<std::pair<double, double>> scales_impl(const TwoIndexMap<V>& map, double exponent, NormFn&& norm_of)
{
    std::map<double, double, std::greater<>> by_scale;
    for (std::size_t p = 0; p < map.pairs.size(); ++p) {
        const auto [s, t] = map.pairs[p];
        const double dt = map.grid[t] - map.grid[s];
        if (!(dt > 0.0)) continue;
        // Group scales that agree to rounding.
        const double key = std::ldexp(std::round(std::ldexp(dt, 40)), -40);
        double& slot = by_scale[key];
        slot = std::max(slot, norm_of(map.values[p]) / std::pow(dt, exponent));
    }
    return {by_scale.begin(), by_scale.end()};
}

}  // namespace

double holder_seminorm(const TwoIndexMap<double>& map, double exponent)
{
    return seminorm_impl(map, exponent, [](double v) { return std::abs(v); });
}

double holder_seminorm(const TwoIndexMap<SpectralField>& map, double exponent)
{
    return seminorm_impl(map, exponent, [&](const SpectralField& f) { return sobolev_norm(f, map.sobolev_index); });
}

std::vector<std::pair<double, double>> scale_ratios(const TwoIndexMap<SpectralField>& map, double exponent)
{
    return scales_impl(map, exponent, [&](const SpectralField& f) { return sobolev_norm(f, map.sobolev_index); });
}

std::vector<std::pair<double, double>> scale_ratios(const TwoIndexMap<double>& map, double exponent)
{
    return scales_impl(map, exponent, [](double v) { return std::abs(v); });
}

std::pair<double, double> driver_norm_proxy(const RoughPathLift& lift, const NoiseCoefficients& theta, double C_nu)
{
    if (lift.labels().size() != lift.dim()) {
        throw Error(ErrorCode::invalid_argument, "driver_norm_proxy needs a lift with wave-vector labels");
    }
    const std::size_t d = lift.dim();
    std::vector<double> w(d);
    for (std::size_t a = 0; a < d; ++a) w[a] = theta.at(lift.labels()[a].k);
    const double scale = C_nu / theta.l2_norm();
    double z_sup = 0.0, ww_sup = 0.0;
    for (std::size_t s = 0; s < lift.points(); ++s) {
        for (std::size_t t = s + 1; t < lift.points(); ++t) {
            const double dt = lift.grid()[t] - lift.grid()[s];
            const auto z = lift.increment(s, t);
            const auto ww = lift.second_level(s, t);
            double zn = 0.0, wn = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                zn += (w[a] * z[a]) * (w[a] * z[a]);
                for (std::size_t b = 0; b < d; ++b) {
                    const double v = w[a] * w[b] * ww[a * d + b];
                    wn += v * v;
                }
            }
            z_sup = std::max(z_sup, std::sqrt(zn) / std::pow(dt, lift.alpha()));
            ww_sup = std::max(ww_sup, std::sqrt(wn) / std::pow(dt, 2.0 * lift.alpha()));
        }
    }
    return {scale * z_sup, scale * scale * ww_sup};
}

TwoIndexMap<SpectralField> remainder_map(std::span<const SpectralField> states, const RoughPathLift& lift,
                                         std::span<const SpectralField> drift_integral, const TransportNoise& noise,
                                         const std::vector<IndexPair>& pairs)
{
    if (states.size() != lift.points() || drift_integral.size() != lift.points()) {
        throw Error(ErrorCode::grid_incompatible, "states, drift integral and lift must share one grid");
    }
    if (lift.dim() != noise.size()) throw Error(ErrorCode::grid_incompatible, "lift dimension does not match the noise");
    if (!lift.labels().empty() && lift.labels() != noise.labels()) {
        throw Error(ErrorCode::grid_incompatible, "lift components are not the noise indices");
    }
    TwoIndexMap<SpectralField> out;
    out.grid = lift.grid();
    out.sobolev_index = -3.0;
    for (const auto& pr : pairs) {
        if (pr.s >= pr.t || pr.t >= lift.points()) throw Error(ErrorCode::grid_incompatible, "pair outside the grid");
        const SpectralField& xs = states[pr.s];
        SpectralField r = states[pr.t];
        r -= xs;
        r -= drift_integral[pr.t];
        r += drift_integral[pr.s];
        r -= noise.first_order(lift.increment(pr.s, pr.t), xs);
        r -= noise.second_order(lift.second_level(pr.s, pr.t), xs);
        out.pairs.push_back(pr);
        out.values.push_back(std::move(r));
    }
    return out;
}

}  // namespace wzns
