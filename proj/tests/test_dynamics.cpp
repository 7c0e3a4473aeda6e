#include <cmath>

#include "test_util.hpp"
#include "wzns/dynamics.hpp"

using namespace wzns;

namespace {

SolverConfig small_config()
{
    SolverConfig c;
    c.M = 4;
    c.N = 2;
    c.T = 0.05;
    c.dt = c.T / 64;
    c.n = 8;
    return c;
}

double max_diff(const SpectralField& a, const SpectralField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int d = 0; d < 3; ++d) m = std::max(m, std::abs(a[i][d] - b[i][d]));
    }
    return m;
}

}  // namespace

TEST(Dynamics, Cutoff)
{
    EXPECT_EQ(cutoff_factor(0.0, 2.0), 1.0);
    EXPECT_EQ(cutoff_factor(2.0, 2.0), 1.0);
    EXPECT_NEAR(cutoff_factor(2.5, 2.0), 0.5, 1e-15);
    EXPECT_EQ(cutoff_factor(3.0, 2.0), 0.0);
    EXPECT_EQ(cutoff_factor(9.0, 2.0), 0.0);
    double prev = 1.0;
    for (double x = 2.0; x <= 3.0; x += 0.01) {
        const double f = cutoff_factor(x, 2.0);
        EXPECT_LE(f, prev);
        prev = f;
    }
    EXPECT_WZNS_ERROR(cutoff_factor(1.0, 0.0), ErrorCode::invalid_argument);
}

TEST(Dynamics, ZeroStateStaysZero)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 1);
    for (StepMode m : {StepMode::deterministic, StepMode::wong_zakai, StepMode::stratonovich}) {
        const Trajectory tr = simulate(c, SpectralField(c.M), m, &e);
        EXPECT_EQ(tr.states.back().max_abs(), 0.0);
        EXPECT_EQ(tr.energy_functional(), 0.0);
        EXPECT_FALSE(lifespan(tr, 1.0).has_value());
    }
}

TEST(Dynamics, HeatDecayIsExact)
{
    SolverConfig c = small_config();
    c.nonlinear = false;
    c.save_points = 4;
    SpectralField xi(c.M);
    const LatticeMode m = make_mode({1, 2, 0});
    for (int d = 0; d < 3; ++d) {
        xi.at(m.k)[d] = Complex(0.3, -0.2) * m.a1[d];
        xi.at(-m.k)[d] = std::conj(xi.at(m.k)[d]);
    }
    const Trajectory tr = simulate(c, xi, StepMode::deterministic);
    ASSERT_EQ(tr.times.size(), 5u);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double f = std::exp(-4.0 * pi * pi * 5.0 * tr.times[i]);
        SpectralField exact = xi;
        exact *= f;
        EXPECT_LE(max_diff(tr.states[i], exact), 1e-8 * xi.max_abs());
    }
    EXPECT_FALSE(lifespan(tr, 2.0 * std::sqrt(enstrophy(xi))).has_value());
}

TEST(Dynamics, SecondOrderInTime)
{
    SolverConfig c = small_config();
    c.T = 0.1;
    const SpectralField xi = two_mode_field(c.M, 2.0);
    auto run = [&](double dt) {
        c.dt = dt;
        return simulate(c, xi, StepMode::deterministic).states.back();
    };
    const SpectralField ref = run(c.T / 2048);
    const double e1 = max_diff(run(c.T / 32), ref);
    const double e2 = max_diff(run(c.T / 64), ref);
    EXPECT_GT(std::log2(e1 / e2), 1.9);
}

TEST(Dynamics, StateInvariantsAndNeutrality)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 2);
    const SpectralField xi = random_initial_field(c.M, 1.0, 5);
    const Trajectory tr = simulate(c, xi, StepMode::wong_zakai, &e);
    ASSERT_FALSE(tr.blowup_time.has_value());
    const SpectralField& last = tr.states.back();
    EXPECT_LE(reality_defect(last), 1e-10 * last.max_abs());
    EXPECT_LE(divergence_defect(last), 1e-10 * last.max_abs());
    for (const auto& d : tr.diagnostics) EXPECT_LE(std::abs(d.noise_budget), 1e-10 * (1.0 + d.enstrophy));
}

TEST(Dynamics, EnstrophyBudgetCloses)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 4);
    const SpectralField xi = random_initial_field(c.M, 1.0, 6);
    auto mismatch = [&](double dt) {
        c.dt = dt;
        const Trajectory tr = simulate(c, xi, StepMode::wong_zakai, &e);
        const auto& d = tr.diagnostics;
        double predicted = d.front().enstrophy;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            const double h = d[i + 1].t - d[i].t;
            const double r0 = -2.0 * d[i].dissipation + 2.0 * d[i].nonlinear_production;
            const double r1 = -2.0 * d[i + 1].dissipation + 2.0 * d[i + 1].nonlinear_production;
            predicted += 0.5 * h * (r0 + r1);
        }
        return std::abs(predicted - d.back().enstrophy);
    };
    const double a = mismatch(c.T / 512);
    const double b = mismatch(c.T / 1024);
    EXPECT_LT(a, 5e-3);
    EXPECT_LT(b, a / 3.0);
}

TEST(Dynamics, WongZakaiRhsUsesTransportField)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 7);
    const auto pl = piecewise_linear(e, c.n);
    const SpectralField xi = random_initial_field(c.M, 1.0, 8);
    const double t = 0.3 * c.T;
    const std::size_t seg = pl.segment_of(t);
    std::vector<double> w(nm.transport().size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const auto& lab = nm.transport().labels()[j];
        for (std::size_t q = 0; q < pl.components(); ++q) {
            if (pl.labels()[q] == lab) w[j] = pl.slope(q, seg);
        }
    }
    const SpectralField v = nm.transport().field(w);
    SpectralField expect = laplacian(xi) - lie_derivative(biot_savart(xi), xi);
    expect += engine_for(c.M).transport(v, xi);
    EXPECT_LE(max_diff(rhs_wong_zakai(xi, t, c, pl, nm), expect), 1e-10 * expect.max_abs());
    EXPECT_WZNS_ERROR(rhs_wong_zakai(xi, 2.0 * c.T, c, pl, nm), ErrorCode::time_range);
}

TEST(Dynamics, ConstantSlopesMatchFixedTransport)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const SpectralField xi = random_initial_field(c.M, 1.0, 9);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 3);
    const auto pl = piecewise_linear(e, 1);
    const double dt = c.T / 16;
    const SpectralField a = step(xi, 0.0, dt, c, StepMode::wong_zakai, &nm, &pl);

    std::vector<double> w(nm.transport().size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const auto p = e.path(nm.transport().labels()[j]);
        w[j] = (p.back() - p.front()) / c.T * dt;
    }
    const SpectralField inc = nm.transport().field(w);
    Stepper st(c);
    EXPECT_LE(max_diff(a, st.step(xi, dt, &inc)), 1e-14 * xi.max_abs());
}

TEST(Dynamics, ReplayIsBitIdentical)
{
    SolverConfig c = small_config();
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 12);
    const SpectralField xi = random_initial_field(c.M, 1.0, 13);
    const Trajectory a = simulate(c, xi, StepMode::wong_zakai, &e);
    const Trajectory b = simulate(c, xi, StepMode::wong_zakai, &e);
    ASSERT_EQ(a.diagnostics.size(), b.diagnostics.size());
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i) EXPECT_EQ(a.diagnostics[i].enstrophy, b.diagnostics[i].enstrophy);
    EXPECT_EQ(max_diff(a.states.back(), b.states.back()), 0.0);
}

TEST(Dynamics, StratonovichAndFineWongZakaiAgree)
{
    SolverConfig c = small_config();
    c.dt = c.T / 256;
    const Lattice lat(c.M);
    const NoiseModel nm(c, lat);
    const auto e = sample_ensemble(nm.modes(), c.T, 6, 21);
    const SpectralField xi = random_initial_field(c.M, 1.0, 22);
    c.n = 64;
    const Trajectory wz = simulate(c, xi, StepMode::wong_zakai, &e);
    const Trajectory st = simulate(c, xi, StepMode::stratonovich, &e);
    // both follow the same piecewise-linear path on the finest grid
    EXPECT_LE(max_diff(wz.states.back(), st.states.back()), 1e-12);
}

TEST(Dynamics, LifespanAndBlowup)
{
    Trajectory tr;
    StepDiagnostics d;
    d.t = 0.0;
    d.enstrophy = 1.0;
    tr.diagnostics.push_back(d);
    d.t = 0.1;
    d.enstrophy = 5.0;
    tr.diagnostics.push_back(d);
    EXPECT_EQ(*lifespan(tr, 2.0), 0.1);
    EXPECT_FALSE(lifespan(tr, 3.0).has_value());
    tr.blowup_time = 0.2;
    EXPECT_EQ(*lifespan(tr, 3.0), 0.2);
    EXPECT_WZNS_ERROR(lifespan(tr, 0.0), ErrorCode::invalid_argument);
}

TEST(Dynamics, DriftIntegralAtSavedTimes)
{
    SolverConfig c = small_config();
    c.record_drift = true;
    c.save_points = 4;
    const SpectralField xi = random_initial_field(c.M, 1.0, 30);
    // without noise the state increment equals the drift integral up to
    // the second-order quadrature error
    auto mismatch = [&](double dt) {
        c.dt = dt;
        const Trajectory tr = simulate(c, xi, StepMode::deterministic);
        EXPECT_EQ(tr.drift_integral.size(), 5u);
        EXPECT_EQ(tr.drift_integral.front().max_abs(), 0.0);
        double m = 0.0;
        for (std::size_t i = 0; i < tr.states.size(); ++i) m = std::max(m, max_diff(tr.states[i] - xi, tr.drift_integral[i]));
        return m;
    };
    const double a = mismatch(c.T / 256);
    const double b = mismatch(c.T / 512);
    EXPECT_LT(a, 1e-3 * xi.max_abs());
    EXPECT_LT(b, a / 3.0);
}

TEST(Dynamics, InitialFields)
{
    const SpectralField r = random_initial_field(6, 1.5, 3);
    EXPECT_NEAR(std::sqrt(enstrophy(r)), 1.5, 1e-12);
    EXPECT_LE(divergence_defect(r), 1e-14);
    EXPECT_LE(reality_defect(r), 1e-15);
    const SpectralField tg = taylor_green_field(4, 2.0);
    EXPECT_NEAR(std::sqrt(enstrophy(tg)), 2.0, 1e-12);
    EXPECT_LE(divergence_defect(tg), 1e-13);
    for (std::size_t i = 0; i < tg.size(); ++i) {
        if (max_norm(tg.cube().wave_vector(i)) > 1) EXPECT_LE(norm2(tg[i]), 1e-24);
    }
    const SpectralField tm = two_mode_field(4, 1.0);
    EXPECT_GT(lie_derivative(biot_savart(tm), tm).max_abs(), 1e-3);
}
