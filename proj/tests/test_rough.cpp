#include <cmath>
#include <random>

#include "test_util.hpp"
#include "wzns/rough.hpp"

using namespace wzns;

namespace {

std::vector<double> uniform_grid(std::size_t points, double T = 1.0)
{
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = T * double(i) / double(points - 1);
    return g;
}

}  // namespace

TEST(Rough, ConstantPath)
{
    const auto lift = lift_linear_samples(uniform_grid(5), 2, std::vector<double>(10, 3.0));
    for (double z : lift.increment(0, 4)) EXPECT_EQ(z, 0.0);
    for (double w : lift.second_level(1, 3)) EXPECT_EQ(w, 0.0);
}

TEST(Rough, SingleSegmentArea)
{
    const auto lift = lift_linear_samples({0.0, 1.0}, 2, {0.0, 0.0, 1.0, 1.0});
    const auto w = lift.second_level(0, 1);
    EXPECT_NEAR(w[1], 0.5, 1e-15);
    EXPECT_NEAR(w[0], 0.5, 1e-15);
}

TEST(Rough, HandArea)
{
    // x = (t, 0) then (1, t - 1): int x^1 dx^2 = 1, int x^2 dx^1 = 0
    const auto lift = lift_linear_samples({0.0, 1.0, 2.0}, 2, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0});
    const auto w = lift.second_level(0, 2);
    EXPECT_NEAR(w[1], 1.0, 1e-15);
    EXPECT_NEAR(w[2], 0.0, 1e-15);
}

TEST(Rough, ChenAndSymmetry)
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    const std::size_t m = 8, pts = 513;
    std::vector<double> v(m * pts, 0.0);
    for (std::size_t i = 1; i < pts; ++i) {
        for (std::size_t c = 0; c < m; ++c) v[i * m + c] = v[(i - 1) * m + c] + n(rng) / std::sqrt(512.0);
    }
    const auto lift = lift_linear_samples(uniform_grid(pts), m, v);
    EXPECT_LE(chen_defect(lift), 1e-10);
    EXPECT_LE(symmetric_part_defect(lift), 1e-12);
}

TEST(Rough, AlphaAndGrid)
{
    EXPECT_WZNS_ERROR(lift_linear_samples({0.0, 1.0}, 1, {0.0, 1.0}, 0.3), ErrorCode::invalid_argument);
    EXPECT_WZNS_ERROR(lift_linear_samples({0.0, 1.0}, 1, {0.0, 1.0}, 0.6), ErrorCode::invalid_argument);
    EXPECT_WZNS_ERROR(lift_linear_samples({1.0, 0.0}, 1, {0.0, 1.0}), ErrorCode::grid_incompatible);
}

TEST(Rough, CanonicalLiftMatchesSamples)
{
    const auto e = sample_ensemble({{1, 0, 0}, {0, 1, 0}}, 1.0, 5, 4);
    const auto pl = piecewise_linear(e, 4);
    const auto grid = uniform_grid(33);
    const auto lift = canonical_lift(pl, grid);
    const auto coarse = canonical_lift(pl, pl.partition());
    const auto w1 = lift.second_level(0, 32);
    const auto w2 = coarse.second_level(0, 4);
    for (std::size_t i = 0; i < w1.size(); ++i) EXPECT_NEAR(w1[i], w2[i], 1e-13);
    EXPECT_WZNS_ERROR(canonical_lift(pl, uniform_grid(4)), ErrorCode::grid_incompatible);
}

TEST(Rough, StratonovichReference)
{
    const auto e = sample_ensemble({{1, 0, 0}}, 1.0, 6, 11);
    std::vector<double> grid;
    for (std::size_t j = 0; j < e.points(); j += 8) grid.push_back(e.time(j));
    const auto lift = stratonovich_reference_lift(e, grid);
    EXPECT_EQ(lift.points(), 9u);
    const auto full = stratonovich_reference_lift(e, uniform_grid(65));
    const auto a = lift.second_level(2, 7);
    const auto b = full.second_level(16, 56);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13);
    for (std::size_t c = 0; c < lift.dim(); ++c) {
        const double z = lift.increment(1, 6)[c];
        EXPECT_NEAR(lift.second_level(1, 6)[c * lift.dim() + c], 0.5 * z * z, 1e-13);
    }
    EXPECT_WZNS_ERROR(stratonovich_reference_lift(e, std::vector<double>{0.0, 0.3, 1.0}), ErrorCode::grid_incompatible);
}

TEST(Rough, LevyAreaMoments)
{
    const int samples = 4000;
    const double t = 1.0;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0, a2 = 0.0, a4 = 0.0;
    for (int s = 0; s < samples; ++s) {
        const auto e = sample_ensemble({{1, 0, 0}}, t, 7, 300 + std::uint64_t(s));
        const auto lift = stratonovich_reference_lift(e, uniform_grid(e.points(), t));
        const auto w = lift.second_level(0, lift.points() - 1);
        const double area = 0.5 * (w[1] - w[2]);
        m1 += w[1];
        m2 += w[1] * w[1];
        m4 += w[1] * w[1] * w[1] * w[1];
        a2 += area * area;
        a4 += area * area * area * area;
    }
    m1 /= samples;
    m2 /= samples;
    m4 /= samples;
    a2 /= samples;
    a4 /= samples;
    EXPECT_LE(std::abs(m1), 5.0 * std::sqrt(m2 / samples));
    EXPECT_LE(std::abs(m2 - t * t / 2.0), 5.0 * std::sqrt((m4 - m2 * m2) / samples));
    EXPECT_LE(std::abs(a2 - t * t / 4.0), 5.0 * std::sqrt((a4 - a2 * a2) / samples));
}

TEST(Rough, HolderExamples)
{
    TwoIndexMap<double> lin;
    lin.grid = uniform_grid(9, 2.0);
    lin.pairs = all_pairs(9);
    TwoIndexMap<double> quad = lin;
    TwoIndexMap<double> zero = lin;
    for (const auto& p : lin.pairs) {
        const double h = lin.grid[p.t] - lin.grid[p.s];
        lin.values.push_back(h);
        quad.values.push_back(h * h);
        zero.values.push_back(0.0);
    }
    EXPECT_NEAR(holder_seminorm(lin, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(holder_seminorm(quad, 1.0), 2.0, 1e-15);
    EXPECT_EQ(holder_seminorm(zero, 0.4), 0.0);
    EXPECT_WZNS_ERROR(holder_seminorm(TwoIndexMap<double>{}, 1.0), ErrorCode::undefined_seminorm);
    EXPECT_WZNS_ERROR(holder_seminorm(lin, 0.0), ErrorCode::invalid_argument);

    const auto pairs = dyadic_pairs(2);
    ASSERT_EQ(pairs.size(), 7u);
    EXPECT_EQ(pairs[0].s, 0u);
    EXPECT_EQ(pairs[0].t, 4u);
    EXPECT_EQ(pairs.back().t - pairs.back().s, 1u);
}

TEST(Rough, DriverProxy)
{
    const auto modes = enumerate_modes(2);
    const auto theta = theta_coefficients(1, 1.0, modes);
    const auto labels = shell_labels(theta);
    const auto e = sample_ensemble(shell_modes(theta), 1.0, 4, 3);
    std::vector<RealIndex> lab;
    for (std::size_t p = 0; p < e.path_count(); ++p) lab.push_back(e.label(p));
    std::vector<double> v(e.points() * lab.size());
    for (std::size_t j = 0; j < e.points(); ++j) {
        for (std::size_t c = 0; c < lab.size(); ++c) v[j * lab.size() + c] = e.path(lab[c])[j];
    }
    const auto lift = lift_linear_samples(uniform_grid(e.points()), lab.size(), v, 0.4, lab);
    const auto a = driver_norm_proxy(lift, theta, 1.0);
    const auto b = driver_norm_proxy(lift, theta, 2.0);
    EXPECT_NEAR(b.first, 2.0 * a.first, 1e-12 * a.first);
    EXPECT_NEAR(b.second, 4.0 * a.second, 1e-12 * a.second);

    std::vector<double> sub;
    for (std::size_t j = 0; j < e.points(); j += 4) {
        for (std::size_t c = 0; c < lab.size(); ++c) sub.push_back(v[j * lab.size() + c]);
    }
    const auto coarse = lift_linear_samples(uniform_grid(5), lab.size(), sub, 0.4, lab);
    EXPECT_LE(driver_norm_proxy(coarse, theta, 1.0).first, a.first * (1 + 1e-12));

    const auto flat = lift_linear_samples(uniform_grid(3), lab.size(), std::vector<double>(3 * lab.size(), 0.0), 0.4, lab);
    const auto z = driver_norm_proxy(flat, theta, 1.0);
    EXPECT_EQ(z.first, 0.0);
    EXPECT_EQ(z.second, 0.0);
}

TEST(Rough, RemainderOfZeroData)
{
    const auto modes = enumerate_modes(2);
    const auto theta = theta_coefficients(1, 1.0, modes);
    const Lattice lat(2);
    const TransportNoise noise(lat, theta, 1.0, shell_labels(theta));
    const auto e = sample_ensemble(shell_modes(theta), 1.0, 3, 3);
    const std::size_t m = noise.size();
    std::vector<double> v(e.points() * m);
    for (std::size_t j = 0; j < e.points(); ++j) {
        for (std::size_t c = 0; c < m; ++c) v[j * m + c] = e.path(noise.labels()[c])[j];
    }
    const auto lift = lift_linear_samples(uniform_grid(e.points()), m, v, 0.4, noise.labels());
    const std::vector<SpectralField> states(e.points(), SpectralField(2));
    const auto r = remainder_map(states, lift, states, noise, dyadic_pairs(3));
    EXPECT_EQ(r.sobolev_index, -3.0);
    for (const auto& f : r.values) EXPECT_EQ(f.max_abs(), 0.0);
    EXPECT_WZNS_ERROR(remainder_map(std::vector<SpectralField>(3, SpectralField(2)), lift, states, noise, dyadic_pairs(3)),
                      ErrorCode::grid_incompatible);
}
