#include "wzns/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "wzns/dynamics.hpp"
#include "wzns/experiments.hpp"
#include "wzns/lattice.hpp"
#include "wzns/noise.hpp"
#include "wzns/rough.hpp"
#include "wzns/spectral.hpp"

namespace wzns {

namespace {

// (a.grad) b by a direct double sum over cube modes, truncated to the cube.
SpectralField brute_advect(const SpectralField& a, const SpectralField& b)
{
    const ModeCube& cube = a.cube();
    SpectralField out(a.M());
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

double max_diff(const SpectralField& a, const SpectralField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int d = 0; d < 3; ++d) m = std::max(m, std::abs(a[i][d] - b[i][d]));
    }
    return m;
}

std::string sci(double x)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

template <class Fn>
CheckResult timed(const char* name, Fn&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

CheckResult verdict(double value, double tolerance, std::string detail)
{
    CheckResult r;
    r.value = value;
    r.tolerance = tolerance;
    r.passed = std::isfinite(value) && value <= tolerance;
    r.detail = std::move(detail);
    return r;
}

std::vector<double> uniform_grid(std::size_t points)
{
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = double(i) / double(points - 1);
    return g;
}

}  // namespace

CheckResult check_enstrophy_neutrality(std::size_t fields)
{
    return timed("enstrophy neutrality", [&] {
        SolverConfig c;  // M = 8, N = 2, gamma = 1
        const Lattice lattice(c.M);
        const NoiseModel noise(c, lattice);
        PseudoSpectral& eng = engine_for(c.M);
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> normal;
        std::vector<double> w(noise.transport().size());
        double worst = 0.0;
        for (std::size_t i = 0; i < fields; ++i) {
            for (auto& x : w) x = normal(rng);
            const SpectralField v = noise.transport().field(w);
            const SpectralField xi = random_initial_field(c.M, 1.0 + double(i % 7), 100 + i, 1.0);
            const double b = std::abs(inner(eng.transport(v, xi), xi));
            worst = std::max(worst, b / (enstrophy(xi) * std::sqrt(enstrophy(v))));
        }
        return verdict(worst, 1e-11, std::to_string(fields) + " fields, max |<Pi(v.grad xi),xi>|/(|xi|^2 |v|)");
    });
}

CheckResult check_basis()
{
    return timed("basis", [] {
        const int M = 4;
        const Lattice lattice(M);
        double frame = 0.0;
        for (const auto& m : lattice.modes()) {
            const Vec3 k = to_real(m.k);
            const double nk = norm(k);
            frame = std::max({frame, std::abs(dot(m.a1, k)) / nk, std::abs(dot(m.a2, k)) / nk,
                              std::abs(dot(m.a1, m.a1) - 1.0), std::abs(dot(m.a2, m.a2) - 1.0),
                              std::abs(dot(m.a1, m.a2))});
            if (m.sign == SignClass::plus) {
                const Vec3 c = cross(m.a1, m.a2);
                for (int d = 0; d < 3; ++d) frame = std::max(frame, std::abs(c[d] - k[d] / nk));
            }
        }

        // sigma_{k,a} sampled on a grid finer than 2M; Gram entries are
        // grid averages of sigma_{k,a} . conj(sigma_{l,b})
        const int G = 2 * M + 1;
        const std::size_t npts = std::size_t(G) * G * G;
        const auto& modes = lattice.modes();
        std::vector<std::vector<Complex>> samples;
        for (const auto& m : modes) {
            for (int a = 1; a <= 2; ++a) {
                SpectralField f(M);
                const Vec3& e = a == 1 ? m.a1 : m.a2;
                f.at(m.k) = {Complex(e[0]), Complex(e[1]), Complex(e[2])};
                std::vector<Complex> s;
                s.reserve(3 * npts);
                for (int d = 0; d < 3; ++d) {
                    const auto c = synthesize_complex(f, d, G);
                    s.insert(s.end(), c.begin(), c.end());
                }
                samples.push_back(std::move(s));
            }
        }
        auto gram = [&](std::size_t i, std::size_t j) {
            Complex s = 0.0;
            const auto& x = samples[i];
            const auto& y = samples[j];
            for (std::size_t p = 0; p < x.size(); ++p) s += x[p] * std::conj(y[p]);
            return s / double(npts);
        };
        double gram_err = 0.0;
        std::size_t pairs = 0;
        auto visit = [&](std::size_t i, std::size_t j) {
            gram_err = std::max(gram_err, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
            ++pairs;
        };
        for (std::size_t m = 0; m < modes.size(); ++m) {
            visit(2 * m, 2 * m);
            visit(2 * m + 1, 2 * m + 1);
            visit(2 * m, 2 * m + 1);
            const std::size_t n = std::size_t(lattice.find(-modes[m].k) - modes.data());
            visit(2 * m, 2 * n);
            visit(2 * m + 1, 2 * n + 1);
        }
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
        for (int r = 0; r < 20000; ++r) visit(pick(rng), pick(rng));

        // reality round trip: conjugate-symmetric coefficients synthesize to
        // real samples, a broken pair does not
        const SpectralField f = random_initial_field(3, 1.0, 12, 1.0);
        double im = 0.0;
        for (int d = 0; d < 3; ++d) {
            for (const Complex& z : synthesize_complex(f, d, 8)) im = std::max(im, std::abs(z.imag()));
        }
        const double real_err = im / f.max_abs();
        SpectralField g = f;
        g.at({1, 0, 0})[1] += Complex(0.0, 0.5);
        double im2 = 0.0;
        for (const Complex& z : synthesize_complex(g, 1, 8)) im2 = std::max(im2, std::abs(z.imag()));

        const double worst = std::max({frame, gram_err, real_err});
        CheckResult r = verdict(worst, 1e-12,
                                "frames " + sci(frame) + ", Gram " + sci(gram_err) + " over " + std::to_string(pairs) +
                                    " pairs, reality " + sci(real_err) + ", broken pair imag " + sci(im2));
        r.passed = r.passed && im2 > 0.1;
        return r;
    });
}

CheckResult check_covariation(std::size_t samples)
{
    return timed("covariation", [&] {
        // realized covariation on 16 steps up to t = 1; E = 2t for the
        // conjugate pair, 0 otherwise
        const double t = 1.0;
        const std::vector<Vec3i> modes{{1, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, -1, -1}};
        const std::size_t K = 4;  // complex paths: (mode, alpha) for the two plus modes and their conjugates
        std::vector<double> sum(K * K * 2, 0.0), sum2(K * K * 2, 0.0);
        for (std::size_t s = 0; s < samples; ++s) {
            const auto e = sample_ensemble(modes, t, 4, derive_seed(77, 0, s));
            const auto w = complex_from_real(e);
            std::vector<std::span<const Complex>> p;
            for (const Vec3i& k : {Vec3i{1, 0, 0}, Vec3i{0, 1, 1}}) {
                const std::size_t m = *e.find_mode(k);
                p.push_back(w.path(m, 1));
            }
            for (const Vec3i& k : {Vec3i{-1, 0, 0}, Vec3i{0, -1, -1}}) {
                const std::size_t m = *e.find_mode(k);
                p.push_back(w.path(m, 1));
            }
            for (std::size_t a = 0; a < K; ++a) {
                for (std::size_t b = 0; b < K; ++b) {
                    Complex q = 0.0;
                    for (std::size_t j = 1; j < p[a].size(); ++j) q += (p[a][j] - p[a][j - 1]) * (p[b][j] - p[b][j - 1]);
                    const std::size_t idx = 2 * (a * K + b);
                    sum[idx] += q.real();
                    sum2[idx] += q.real() * q.real();
                    sum[idx + 1] += q.imag();
                    sum2[idx + 1] += q.imag() * q.imag();
                }
            }
        }
        double worst = 0.0;  // in standard errors
        const double n = double(samples);
        for (std::size_t a = 0; a < K; ++a) {
            for (std::size_t b = 0; b < K; ++b) {
                const bool pair = (a + 2 == b) || (b + 2 == a);
                for (int part = 0; part < 2; ++part) {
                    const std::size_t idx = 2 * (a * K + b) + std::size_t(part);
                    const double mean = sum[idx] / n;
                    const double se = std::sqrt(std::max(sum2[idx] / n - mean * mean, 1e-300) / n);
                    const double expect = (pair && part == 0) ? 2.0 * t : 0.0;
                    worst = std::max(worst, std::abs(mean - expect) / se);
                }
            }
        }
        return verdict(worst, 5.0, std::to_string(samples) + " samples, worst deviation in standard errors");
    });
}

CheckResult check_rough_algebra()
{
    return timed("rough path algebra", [] {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> normal;
        const std::size_t m = 8, pts = 513;
        std::vector<double> v(m * pts, 0.0);
        double scale = 1.0;
        for (std::size_t i = 1; i < pts; ++i) {
            for (std::size_t c = 0; c < m; ++c) {
                v[i * m + c] = v[(i - 1) * m + c] + normal(rng) / std::sqrt(512.0);
                scale = std::max(scale, v[i * m + c] * v[i * m + c]);
            }
        }
        const auto lift = lift_linear_samples(uniform_grid(pts), m, v);
        const double chen = chen_defect(lift) / scale;
        const double sym = symmetric_part_defect(lift);
        CheckResult r = verdict(chen, 1e-10, "Chen " + sci(chen) + " (relative), symmetric part " + sci(sym));
        r.passed = r.passed && sym <= 1e-12;
        return r;
    });
}

CheckResult check_spectral_oracles()
{
    return timed("spectral oracles", [] {
        const SpectralField w = random_initial_field(6, 1.0, 11, 1.0);
        const double curl_err = max_diff(curl(biot_savart(w)), w) / w.max_abs();

        double conv = 0.0;
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const SpectralField xi = random_initial_field(2, 1.0, seed, 1.0);
            const SpectralField u = biot_savart(xi);
            conv = std::max(conv, max_diff(lie_derivative(u, xi), brute_advect(u, xi) - brute_advect(xi, u)));
        }
        const Lattice lat(2);
        const SpectralField phi = random_initial_field(2, 1.0, 8, 1.0);
        for (const auto& m : lat.modes()) {
            for (int a = 1; a <= 2; ++a) {
                const SigmaAction act = sigma_action_offsets(lat, m.k, a);
                SpectralField sigma(2);
                sigma.at(act.shift) = {Complex(act.amplitude[0]), Complex(act.amplitude[1]), Complex(act.amplitude[2])};
                SpectralField slow = brute_advect(sigma, phi);
                leray_project_in_place(slow);
                conv = std::max(conv, max_diff(transport_apply(lat, m.k, a, phi), slow));
            }
        }

        double tri = 0.0;
        for (std::uint64_t s = 0; s < 5; ++s) {
            const SpectralField u = random_initial_field(4, 1.0, 3 * s + 1, 1.0);
            const SpectralField v = random_initial_field(4, 1.0, 3 * s + 2, 1.0);
            const SpectralField x = random_initial_field(4, 1.0, 3 * s + 3, 1.0);
            const double scale = 1.0 + std::abs(trilinear_b(u, v, x));
            tri = std::max({tri, std::abs(trilinear_b(u, v, v)) / scale,
                            std::abs(trilinear_b(u, v, x) + trilinear_b(u, x, v)) / scale});
        }
        CheckResult r;
        r.value = std::max(curl_err, tri);
        r.tolerance = 1e-12;
        r.passed = curl_err <= 1e-12 && conv <= 1e-10 && tri <= 1e-12;
        r.detail = "curl round trip " + sci(curl_err) + ", convolution " + sci(conv) + " (tol 1e-10), trilinear " + sci(tri);
        return r;
    });
}

CheckResult check_integrator()
{
    return timed("integrator", [] {
        SolverConfig c;
        c.M = 4;
        c.N = 1;
        c.noise = false;
        c.T = 0.25;
        const SpectralField xi = two_mode_field(c.M, 2.0);
        auto run = [&](double dt) {
            c.dt = dt;
            return simulate(c, xi, StepMode::deterministic).states.back();
        };
        const SpectralField ref = run(c.T / 32768.0);
        std::vector<double> err;
        for (int p = 8; p <= 11; ++p) err.push_back(std::sqrt(enstrophy(run(c.T / double(1 << p)) - ref)));
        double min_order = 1e300;
        std::string orders;
        for (std::size_t i = 1; i < err.size(); ++i) {
            const double o = std::log2(err[i - 1] / err[i]);
            min_order = std::min(min_order, o);
            orders += (i > 1 ? ", " : "") + sci(o);
        }

        SolverConfig h = c;
        h.nonlinear = false;
        h.dt = h.T / 256.0;
        h.save_points = 8;
        SpectralField mode(h.M);
        const LatticeMode m = make_mode({1, 2, 0});
        for (int d = 0; d < 3; ++d) {
            mode.at(m.k)[d] = Complex(0.3, -0.2) * m.a1[d];
            mode.at(-m.k)[d] = std::conj(mode.at(m.k)[d]);
        }
        const Trajectory tr = simulate(h, mode, StepMode::deterministic);
        double heat = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            SpectralField exact = mode;
            exact *= std::exp(-4.0 * pi * pi * 5.0 * tr.times[i]);
            heat = std::max(heat, max_diff(tr.states[i], exact) / mode.max_abs());
        }
        CheckResult r;
        r.value = min_order;
        r.tolerance = 1.9;
        r.passed = min_order >= 1.9 && heat <= 1e-8;
        r.detail = "orders " + orders + " (need >= 1.9), heat decay " + sci(heat) + " (tol 1e-8)";
        return r;
    });
}

CheckResult check_energy_bound(int M, std::size_t samples)
{
    return timed("energy bound", [&] {
        ExperimentConfig e;
        SolverConfig& s = e.solver;
        s.M = M;
        s.N = 2;
        s.n = 32;
        s.T = 0.25;
        s.K = 1.0;
        const Lattice lattice(s.M);
        const NoiseModel noise(s, lattice);
        const SpectralField xi0 = make_initial_field(e, derive_seed(s.seed, 1, 0));
        SolverConfig lim = s;
        lim.viscosity = 1.0 + 0.6 * s.nu;
        lim.noise = false;
        double CK = 0.0;
        for (const auto& d : simulate(lim, xi0, StepMode::deterministic).diagnostics) CK = std::max(CK, std::sqrt(d.enstrophy));
        s.R = CK + 2.0;

        std::vector<double> energy(samples);
        run_jobs(samples, [&](std::size_t i) {
            const auto ens = sample_ensemble(noise.modes(), s.T, 5, derive_seed(s.seed, 2, i));
            const Trajectory tr = simulate(s, xi0, StepMode::wong_zakai, &ens);
            energy[i] = tr.blowup_time ? std::numeric_limits<double>::infinity() : tr.energy_functional();
        });
        const double med = quantile(energy, 0.5);
        const double worst = *std::max_element(energy.begin(), energy.end());
        return verdict(worst / med, 10.0,
                       std::to_string(samples) + " samples at M=" + std::to_string(M) + ", R=" + sci(s.R) +
                           ", median " + sci(med) + ", max " + sci(worst) + "; value is max/median");
    });
}

CheckResult check_wong_zakai_trend(int M, std::size_t samples)
{
    return timed("Wong-Zakai trend", [&] {
        ExperimentConfig e;
        e.solver.M = M;
        e.samples = samples;
        const ExperimentReport rep = wong_zakai_convergence(e);
        std::string meds;
        for (int n : e.n_list) meds += (meds.empty() ? "" : ", ") + sci(rep.summary["distance"][std::to_string(n)]["median"].get<double>());
        const bool mono = rep.summary["median_nonincreasing"].get<bool>();
        const double ratio = rep.summary["median_ratio_last_first"].is_null()
                                 ? std::numeric_limits<double>::infinity()
                                 : rep.summary["median_ratio_last_first"].get<double>();
        CheckResult r = verdict(ratio, 0.5,
                                std::to_string(samples) + " samples at M=" + std::to_string(M) + ", medians " + meds +
                                    (mono ? " (non-increasing)" : " (NOT non-increasing)") +
                                    ", value is median(n=64)/median(n=8)");
        r.passed = r.passed && mono;
        return r;
    });
}

CheckResult check_remainder_scaling(int M, std::size_t samples)
{
    return timed("remainder scaling", [&] {
        ExperimentConfig e;
        e.solver.M = M;
        e.samples = samples;
        e.n_list = {16};
        const ExperimentReport rep = rough_diagnostics(e);
        const auto ratios = rep.column("coarse_fine_n16");
        const double worst = *std::max_element(ratios.begin(), ratios.end());
        return verdict(worst, 10.0,
                       std::to_string(samples) + " trajectories at M=" + std::to_string(M) +
                           ", n=16, value is the largest coarsest/finest scale ratio");
    });
}

CheckResult check_determinism(int M, std::size_t samples)
{
    return timed("determinism", [&] {
        ExperimentConfig e;
        e.solver.M = M;
        e.solver.T = 0.0625;
        e.solver.N = 1;
        e.samples = samples;
        e.n_list = {4, 8};
        e.n_ref = 16;
        e.N_list = {1, 2};
        e.data_samples = 2;
        e.save_points = 8;
        using Runner = ExperimentReport (*)(const ExperimentConfig&);
        const std::pair<const char*, Runner> runs[] = {{"wz-convergence", wong_zakai_convergence},
                                                       {"scaling-limit", scaling_limit},
                                                       {"lifespan", lifespan_measure},
                                                       {"rough-diagnostics", rough_diagnostics}};
        const char* old = std::getenv("WZNS_WORKERS");
        const std::string saved = old ? old : "";
        std::size_t mismatches = 0;
        std::string which;
        for (const auto& [name, fn] : runs) {
            ExperimentConfig c = e;
            if (std::string(name) == "rough-diagnostics") c.n_list = {8};
            setenv("WZNS_WORKERS", "1", 1);
            const std::string a = fn(c).records_csv();
            const std::string b = fn(c).records_csv();
            setenv("WZNS_WORKERS", "3", 1);
            const std::string d = fn(c).records_csv();
            if (a != b || a != d) {
                ++mismatches;
                which += std::string(" ") + name;
            }
        }
        if (old) {
            setenv("WZNS_WORKERS", saved.c_str(), 1);
        } else {
            unsetenv("WZNS_WORKERS");
        }
        return verdict(double(mismatches), 0.0,
                       "4 experiments, each run twice serially and once on 3 workers" +
                           (mismatches ? "; differing:" + which : std::string("; records byte-identical")));
    });
}

std::vector<CheckResult> invariant_suite()
{
    return {check_enstrophy_neutrality(), check_basis(),          check_covariation(),
            check_rough_algebra(),        check_spectral_oracles(), check_integrator(),
            check_determinism(4, 2)};
}

}  // namespace wzns
