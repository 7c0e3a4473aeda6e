#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wzns/noise.hpp"
#include "wzns/spectral.hpp"
#include "wzns/transport_noise.hpp"

namespace wzns {

// First and second level (Z, WW) of a path that is linear between
// consecutive grid points. Stored as path values X and the running integral
// I_t = int_0^t X (x) dX, so that
//   Z_st = X_t - X_s,  WW_st = I_t - I_s - X_s (x) Z_st,
// and Chen's relation holds up to rounding.
class RoughPathLift {
public:
    RoughPathLift(std::vector<double> grid, std::size_t dim, std::vector<double> path, double alpha,
                  std::vector<RealIndex> labels = {});

    const std::vector<double>& grid() const { return grid_; }
    std::size_t points() const { return grid_.size(); }
    std::size_t dim() const { return dim_; }
    double alpha() const { return alpha_; }
    const std::vector<RealIndex>& labels() const { return labels_; }

    double path(std::size_t i, std::size_t c) const { return path_[i * dim_ + c]; }
    std::vector<double> increment(std::size_t s, std::size_t t) const;
    // Row-major dim x dim, entry (a, b) = int_s^t (X^a_r - X^a_s) dX^b_r.
    std::vector<double> second_level(std::size_t s, std::size_t t) const;

    // Replaces the running integral, for paths that are not linear between
    // grid points (area accumulated on a finer grid).
    static RoughPathLift with_area(RoughPathLift base, std::vector<double> area);

private:
    std::vector<double> grid_;
    std::size_t dim_;
    std::vector<double> path_;
    std::vector<double> area_;
    double alpha_;
    std::vector<RealIndex> labels_;
};

// Canonical lift of piecewise-linear samples given on grid (row-major
// points x dim). Exact because the path is linear on each grid interval.
RoughPathLift lift_linear_samples(std::vector<double> grid, std::size_t dim, std::vector<double> values,
                                  double alpha = 0.4, std::vector<RealIndex> labels = {});

// Canonical lift of a piecewise-linear family evaluated on grid, which must
// contain every partition node (grid_incompatible otherwise).
RoughPathLift canonical_lift(const PiecewiseLinearFamily& paths, std::span<const double> grid, double alpha = 0.4);

// Canonical lift at the finest ensemble level; grid must be the ensemble
// grid (grid_incompatible otherwise).
RoughPathLift stratonovich_reference_lift(const BrownianEnsemble& ensemble, std::span<const double> grid,
                                          double alpha = 0.4);

// max over sampled triples s <= u <= t of |WW_st - WW_su - WW_ut - Z_su (x) Z_ut|.
// All triples on a subgrid with at most subgrid_points points plus
// random_triples random triples.
double chen_defect(const RoughPathLift& lift, std::size_t subgrid_points = 48, std::size_t random_triples = 20000,
                   std::uint64_t seed = 7);
// max over all grid pairs of |Sym(WW_st) - Z_st (x) Z_st / 2|
double symmetric_part_defect(const RoughPathLift& lift);

struct IndexPair {
    std::size_t s;
    std::size_t t;
};

// Grid pairs (i s, (i+1) s) for every dyadic stride s = 2^j, on a grid of
// 2^level + 1 points. Coarsest scale first.
std::vector<IndexPair> dyadic_pairs(int level);
std::vector<IndexPair> all_pairs(std::size_t points);

// Two-index map on a grid, values in a target space named by its Sobolev
// index (used only for field-valued maps).
template <class V>
struct TwoIndexMap {
    std::vector<double> grid;
    std::vector<IndexPair> pairs;
    std::vector<V> values;
    double sobolev_index = 0.0;
};

double holder_seminorm(const TwoIndexMap<double>& map, double exponent);
double holder_seminorm(const TwoIndexMap<SpectralField>& map, double exponent);

// Per dyadic scale (distinct t - s, coarsest first): (t - s, max ratio).
std::vector<std::pair<double, double>> scale_ratios(const TwoIndexMap<SpectralField>& map, double exponent);
std::vector<std::pair<double, double>> scale_ratios(const TwoIndexMap<double>& map, double exponent);

// Proxy for the driver constant: ([Z]_alpha, [WW]_{2 alpha}) with each
// component weighted by theta_k, scaled by C_nu/||theta|| and its square.
// Not the operator norm between Sobolev spaces; it bounds it up to a
// constant fixed by the truncation.
std::pair<double, double> driver_norm_proxy(const RoughPathLift& lift, const NoiseCoefficients& theta, double C_nu);

// xi^nat_st = delta xi_st - delta mu_st - A1_st xi_s - A2_st xi_s on the
// given pairs. states and drift_integral (running int_0^t drift) live on
// the lift grid; the lift components must match noise.labels().
TwoIndexMap<SpectralField> remainder_map(std::span<const SpectralField> states, const RoughPathLift& lift,
                                         std::span<const SpectralField> drift_integral, const TransportNoise& noise,
                                         const std::vector<IndexPair>& pairs);

}  // namespace wzns
