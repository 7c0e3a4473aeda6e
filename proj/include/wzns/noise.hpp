#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wzns/vec.hpp"

namespace wzns {

// Label of one real Brownian motion B^{k,alpha}.
struct RealIndex {
    Vec3i k{};
    int alpha = 1;

    friend bool operator==(const RealIndex&, const RealIndex&) = default;
};

// Standard normal keyed by (seed, k, alpha, dyadic level, position). The
// value does not depend on the order in which keys are drawn.
double keyed_normal(std::uint64_t seed, const Vec3i& k, int alpha, int level, std::uint64_t position);

// Independent real Brownian paths B^{k,alpha} on the dyadic grid
// t_j = j T 2^-level, j = 0..2^level, built by Levy midpoint refinement.
class BrownianEnsemble {
public:
    BrownianEnsemble(double horizon, int level, std::uint64_t seed, std::vector<Vec3i> modes,
                     std::vector<double> values);

    double horizon() const { return T_; }
    int level() const { return level_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t intervals() const { return std::size_t(1) << level_; }
    std::size_t points() const { return intervals() + 1; }
    double step() const { return T_ / double(intervals()); }
    double time(std::size_t j) const { return T_ * double(j) / double(intervals()); }

    // Sorted lexicographically; path arrays follow this order with alpha = 1, 2.
    const std::vector<Vec3i>& modes() const { return modes_; }
    std::optional<std::size_t> find_mode(const Vec3i& k) const;
    std::size_t path_count() const { return 2 * modes_.size(); }
    std::span<const double> path(std::size_t mode_idx, int alpha) const;
    std::span<const double> path(const RealIndex& idx) const;
    RealIndex label(std::size_t path_idx) const { return {modes_[path_idx / 2], int(path_idx % 2) + 1}; }
    const std::vector<double>& raw_values() const { return values_; }

private:
    double T_;
    int level_;
    std::uint64_t seed_;
    std::vector<Vec3i> modes_;
    std::vector<double> values_;  // path_count x points
};

// Duplicate wave vectors are removed. Throws invalid_argument for T <= 0 or
// level < 0.
BrownianEnsemble sample_ensemble(std::vector<Vec3i> modes, double horizon, int level, std::uint64_t seed);

// Adds Brownian-bridge midpoints down to new_level; existing grid values are
// copied unchanged.
BrownianEnsemble refine(const BrownianEnsemble& ensemble, int new_level);

// Copy with every value after grid index last_index replaced by NaN.
BrownianEnsemble truncate_after(const BrownianEnsemble& ensemble, std::size_t last_index);

// W^{k,a} = B^{k,a} + i B^{-k,a} for k plus, B^{-k,a} - i B^{k,a} for k minus.
class ComplexPathFamily {
public:
    ComplexPathFamily(std::vector<Vec3i> modes, std::size_t points, std::vector<Complex> values)
        : modes_(std::move(modes)), points_(points), values_(std::move(values)) {}

    const std::vector<Vec3i>& modes() const { return modes_; }
    std::size_t points() const { return points_; }
    std::span<const Complex> path(std::size_t mode_idx, int alpha) const
    {
        return {values_.data() + (2 * mode_idx + std::size_t(alpha - 1)) * points_, points_};
    }

private:
    std::vector<Vec3i> modes_;
    std::size_t points_;
    std::vector<Complex> values_;
};

// Throws incomplete_ensemble if some -k is missing.
ComplexPathFamily complex_from_real(const BrownianEnsemble& ensemble);

// Piecewise-linear interpolation of every real path on the partition
// t_i = grid(round(i 2^level / n)), i = 0..n.
class PiecewiseLinearFamily {
public:
    int n() const { return n_; }
    double horizon() const { return T_; }
    std::size_t components() const { return labels_.size(); }
    std::size_t nodes() const { return partition_.size(); }
    std::size_t segments() const { return partition_.size() - 1; }
    const std::vector<double>& partition() const { return partition_; }
    const std::vector<std::size_t>& grid_nodes() const { return grid_nodes_; }
    const std::vector<RealIndex>& labels() const { return labels_; }

    double node_value(std::size_t component, std::size_t node) const { return values_[component * nodes() + node]; }
    double slope(std::size_t component, std::size_t segment) const { return slopes_[component * segments() + segment]; }
    // Segment containing t (right-continuous; t = T maps to the last one).
    std::size_t segment_of(double t) const;
    double value(std::size_t component, double t) const;

private:
    friend PiecewiseLinearFamily piecewise_linear(const BrownianEnsemble&, int);
    int n_ = 0;
    double T_ = 0.0;
    std::vector<double> partition_;
    std::vector<std::size_t> grid_nodes_;
    std::vector<RealIndex> labels_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

// Throws refine_first when n exceeds the ensemble resolution.
PiecewiseLinearFamily piecewise_linear(const BrownianEnsemble& ensemble, int n);

// Binary checkpoint: "WZNSENS\0", u32 version, f64 T, u32 level, u32 mode
// count, u64 seed, mode table (3 x i32 per mode), then one float64 array of
// 2^level + 1 values per (mode, alpha) in enumeration order.
inline constexpr std::uint32_t ensemble_format_version = 1;
void write_ensemble(std::ostream& os, const BrownianEnsemble& ensemble);
BrownianEnsemble read_ensemble(std::istream& is);
void save_ensemble(const std::string& path, const BrownianEnsemble& ensemble);
BrownianEnsemble load_ensemble(const std::string& path);

}  // namespace wzns
