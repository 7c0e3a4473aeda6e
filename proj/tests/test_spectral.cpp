#include <cmath>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "wzns/dynamics.hpp"
#include "wzns/spectral.hpp"
#include "wzns/transport_noise.hpp"

using namespace wzns;

namespace {

SpectralField random_field(int M, std::uint64_t seed)
{
    return random_initial_field(M, 1.0, seed, 1.0);
}

// (a.grad) b as a direct double sum over cube modes, truncated to the cube.
SpectralField brute_advect(const SpectralField& a, const SpectralField& b)
{
    const int M = a.M();
    const ModeCube& cube = a.cube();
    SpectralField out(M);
    for (std::size_t p = 0; p < a.size(); ++p) {
        const Vec3i kp = cube.wave_vector(p);
        for (std::size_t q = 0; q < b.size(); ++q) {
            const Vec3i kq = cube.wave_vector(q);
            const Vec3i k = kp + kq;
            if (!cube.contains(k)) continue;
            Complex s = 0.0;
            for (int j = 0; j < 3; ++j) s += a[p][j] * Complex(0.0, two_pi * kq[j]);
            for (int i = 0; i < 3; ++i) out.at(k)[i] += s * b[q][i];
        }
    }
    return out;
}

void expect_close(const SpectralField& a, const SpectralField& b, double tol)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int d = 0; d < 3; ++d) m = std::max(m, std::abs(a[i][d] - b[i][d]));
    }
    EXPECT_LE(m, tol);
}

}  // namespace

TEST(Spectral, GridSize)
{
    EXPECT_EQ(physical_grid_size(2), 8);
    EXPECT_EQ(physical_grid_size(4), 16);
    EXPECT_EQ(physical_grid_size(5), 16);
    EXPECT_EQ(physical_grid_size(8), 32);
}

TEST(Spectral, LerayExamples)
{
    SpectralField f(2);
    f.at({0, 0, 1}) = {1.0, 0.0, 0.0};
    f.at({0, 0, -1}) = {1.0, 0.0, 0.0};
    EXPECT_EQ(leray_project(f).at({0, 0, 1}), (Vec3c{1.0, 0.0, 0.0}));

    SpectralField g(2);
    g.at({0, 0, 1}) = {0.0, 0.0, 1.0};
    g.at({0, 0, -1}) = {0.0, 0.0, 1.0};
    EXPECT_EQ(leray_project(g).at({0, 0, 1}), (Vec3c{}));

    SpectralField h(2);
    h.at({1, 0, 0}) = {1.0, 1.0, 0.0};
    h.at({-1, 0, 0}) = {1.0, 1.0, 0.0};
    EXPECT_EQ(leray_project(h).at({1, 0, 0}), (Vec3c{0.0, 1.0, 0.0}));

    SpectralField bad(2);
    bad.at({1, 0, 0}) = {0.0, Complex(0.0, 1.0), 0.0};
    EXPECT_WZNS_ERROR(leray_project(bad), ErrorCode::symmetry);
}

TEST(Spectral, ProjectionProperties)
{
    SpectralField f(3);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3i k = f.cube().wave_vector(i);
        if (!is_plus(k)) continue;
        for (int d = 0; d < 3; ++d) f[i][d] = Complex(n(rng), n(rng));
        for (int d = 0; d < 3; ++d) f.at(-k)[d] = std::conj(f[i][d]);
    }
    const SpectralField p = leray_project(f);
    expect_close(leray_project(p), p, 1e-15);
    EXPECT_LE(std::sqrt(enstrophy(p)), std::sqrt(enstrophy(f)));
    EXPECT_LE(divergence_defect(p), 1e-14);
}

TEST(Spectral, BiotSavart)
{
    SpectralField xi(2);
    xi.at({0, 0, 1}) = {1.0, 0.0, 0.0};
    xi.at({0, 0, -1}) = {1.0, 0.0, 0.0};
    const SpectralField u = biot_savart(xi);
    const Vec3c c = u.at({0, 0, 1});
    EXPECT_NEAR(std::abs(c[0]), 0.0, 1e-16);
    EXPECT_NEAR(c[1].real(), 0.0, 1e-16);
    EXPECT_NEAR(c[1].imag(), 1.0 / two_pi, 1e-16);
    EXPECT_NEAR(std::abs(c[2]), 0.0, 1e-16);

    EXPECT_EQ(biot_savart(SpectralField(3)).max_abs(), 0.0);
    const SpectralField w = random_field(6, 11);
    const SpectralField r = curl(biot_savart(w));
    expect_close(r, w, 1e-12 * w.max_abs());
    EXPECT_LE(divergence_defect(biot_savart(w)), 1e-15);
}

TEST(Spectral, SobolevNorm)
{
    SpectralField f(2);
    f.at({1, 0, 0}) = {0.0, 1.0, 0.0};
    EXPECT_NEAR(sobolev_norm(f, 1.0), std::sqrt(1.0 + 4.0 * pi * pi), 1e-13);
    EXPECT_NEAR(sobolev_norm(f, 0.0), 1.0, 1e-15);
    const SpectralField g = random_field(5, 2);
    EXPECT_NEAR(sobolev_norm(g, 0.0), std::sqrt(enstrophy(g)), 1e-14);
    EXPECT_LE(sobolev_norm(g, -0.5), sobolev_norm(g, 0.0));
    EXPECT_NEAR(gradient_energy(f), 4.0 * pi * pi, 1e-12);
}

TEST(Spectral, LieDerivativeMatchesConvolution)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SpectralField xi = random_field(2, seed);
        const SpectralField u = biot_savart(xi);
        const SpectralField fast = lie_derivative(u, xi);
        const SpectralField slow = brute_advect(u, xi) - brute_advect(xi, u);
        expect_close(fast, slow, 1e-10);
    }
    const SpectralField z(2);
    EXPECT_EQ(lie_derivative(z, random_field(2, 4)).max_abs(), 0.0);
}

TEST(Spectral, TransportMatchesConvolution)
{
    const SpectralField xi = random_field(3, 5);
    const SpectralField v = random_field(3, 6);
    SpectralField slow = brute_advect(v, xi);
    leray_project_in_place(slow);
    expect_close(engine_for(3).transport(v, xi), slow, 1e-10);

    // cached-field identity form agrees with the divergence form
    PseudoSpectral& eng = engine_for(3);
    eng.prepare_transport_field(v);
    SpectralField lie(3), noise(3);
    eng.lie_and_transport_cached(xi, lie, noise);
    expect_close(noise, slow, 1e-10);
    expect_close(lie, lie_derivative(biot_savart(xi), xi), 1e-12);
    SpectralField comb(3);
    eng.combined_cached(xi, 0.7, comb);
    expect_close(comb, slow - 0.7 * lie, 1e-10);
}

TEST(Spectral, TransportApplySingleMode)
{
    const Lattice lat(2);
    SpectralField xi(2);
    const LatticeMode l = make_mode({0, 1, 0});
    xi.at(l.k) = {Complex(l.a1[0]), Complex(l.a1[1]), Complex(l.a1[2])};
    xi.at(-l.k) = xi.at(l.k);
    const SpectralField out = transport_apply(lat, {1, 0, 0}, 1, xi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec3i k = out.cube().wave_vector(i);
        if (k == Vec3i{1, 1, 0} || k == Vec3i{1, -1, 0}) continue;
        EXPECT_EQ(out[i], (Vec3c{})) << k[0] << k[1] << k[2];
    }

    // pointwise product on a grid evaluated by direct sums
    const SpectralField w = random_field(2, 8);
    const SpectralField fast = transport_apply(lat, {1, -1, 2}, 2, w);
    const SigmaAction act = sigma_action_offsets(lat, {1, -1, 2}, 2);
    SpectralField sigma(2);
    sigma.at(act.shift) = {Complex(act.amplitude[0]), Complex(act.amplitude[1]), Complex(act.amplitude[2])};
    SpectralField slow = brute_advect(sigma, w);
    leray_project_in_place(slow);
    expect_close(fast, slow, 1e-12);
}

TEST(Spectral, Trilinear)
{
    const SpectralField u = random_field(4, 1), v = random_field(4, 2), w = random_field(4, 3);
    const double scale = 1.0 + std::abs(trilinear_b(u, v, w));
    EXPECT_NEAR(trilinear_b(u, v, v), 0.0, 1e-12 * scale);
    EXPECT_NEAR(trilinear_b(u, v, w), -trilinear_b(u, w, v), 1e-12 * scale);
    EXPECT_EQ(trilinear_b(SpectralField(4), v, w), 0.0);
}

TEST(Spectral, EnstrophyNeutralNoise)
{
    SolverConfig c;
    const Lattice lat(8);
    const NoiseModel nm(c, lat);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    std::vector<double> w(nm.transport().size());
    for (auto& x : w) x = n(rng);
    const SpectralField v = nm.transport().field(w);
    EXPECT_LE(divergence_defect(v), 1e-14);
    EXPECT_LE(reality_defect(v), 1e-14);
    const SpectralField xi = random_field(8, 10);
    const double b = inner(engine_for(8).transport(v, xi), xi);
    EXPECT_LE(std::abs(b), 1e-11 * enstrophy(xi) * std::sqrt(enstrophy(v)));
}

TEST(Spectral, RealityCriterion)
{
    const SpectralField f = random_field(3, 12);
    double im = 0.0;
    for (int d = 0; d < 3; ++d) {
        for (const Complex& z : synthesize_complex(f, d, 8)) im = std::max(im, std::abs(z.imag()));
    }
    EXPECT_LE(im, 1e-12 * f.max_abs());
    SpectralField g = f;
    g.at({1, 0, 0})[1] += Complex(0.0, 0.5);
    double im2 = 0.0;
    for (const Complex& z : synthesize_complex(g, 1, 8)) im2 = std::max(im2, std::abs(z.imag()));
    EXPECT_GT(im2, 0.1);
}

TEST(Spectral, FieldRoundTrip)
{
    const SpectralField f = random_field(3, 13);
    std::stringstream ss;
    write_field(ss, f, 0x1234, 77);
    const LoadedField g = read_field(ss);
    EXPECT_EQ(g.config_hash, 0x1234u);
    EXPECT_EQ(g.seed, 77u);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f[i], g.field[i]);

    std::string bytes;
    {
        std::stringstream s2;
        write_field(s2, f, 1, 1);
        bytes = s2.str();
    }
    bytes[8] = 9;  // version
    std::stringstream bad(bytes);
    EXPECT_WZNS_ERROR(read_field(bad), ErrorCode::unsupported_version);
    std::stringstream junk("not a field");
    EXPECT_WZNS_ERROR(read_field(junk), ErrorCode::io);
}
