#include "wzns/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wzns/error.hpp"

namespace wzns {

const char* step_mode_name(StepMode mode)
{
    switch (mode) {
    case StepMode::deterministic: return "deterministic";
    case StepMode::wong_zakai: return "wong_zakai";
    case StepMode::stratonovich: return "stratonovich";
    }
    return "unknown";
}

double SolverConfig::C_nu() const { return std::sqrt(1.5 * nu); }

double cutoff_factor(double value, double R)
{
    if (!(R > 0.0)) throw Error(ErrorCode::invalid_argument, "cut-off level R must be > 0");
    if (value <= R) return 1.0;
    if (value >= R + 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (value - R)));
}

double Trajectory::energy_functional() const
{
    double sup = 0.0, integral = 0.0;
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        sup = std::max(sup, diagnostics[i].enstrophy);
        if (i > 0) {
            const double h = diagnostics[i].t - diagnostics[i - 1].t;
            integral += 0.5 * h * (diagnostics[i].dissipation + diagnostics[i - 1].dissipation);
        }
    }
    return sup + integral;
}

double Trajectory::sup_negative_norm() const
{
    double sup = 0.0;
    for (const auto& d : diagnostics) sup = std::max(sup, d.negative_norm);
    return sup;
}

NoiseModel::NoiseModel(const SolverConfig& config, const Lattice& lattice)
    : theta_(theta_coefficients(config.N, config.gamma, lattice.modes())),
      transport_(lattice, theta_, config.C_nu(), shell_labels(theta_))
{
}

Stepper::Stepper(const SolverConfig& config) : config_(config), engine_(engine_for(config.M)) {}

const std::vector<double>& Stepper::decay(double dt)
{
    if (dt != decay_dt_) {
        const ModeCube cube(config_.M);
        decay_.resize(cube.size());
        for (std::size_t i = 0; i < cube.size(); ++i) {
            decay_[i] = std::exp(-config_.viscosity * 4.0 * pi * pi * double(norm2(cube.wave_vector(i))) * dt);
        }
        decay_dt_ = dt;
    }
    return decay_;
}

void Stepper::bind_transport(const SpectralField& v)
{
    if (bound_ && token_ == engine_.transport_token()) {
        bool same = true;
        for (std::size_t i = 0; i < v.size() && same; ++i) same = v[i] == (*bound_)[i];
        if (same) return;
    }
    token_ = engine_.prepare_transport_field(v);
    bound_ = v;
}

double Stepper::nonlinear_term(const SpectralField& xi, SpectralField& out, const SpectralField* v,
                               SpectralField* noise_out)
{
    double f = 1.0;
    if (config_.R > 0.0) f = cutoff_factor(sobolev_norm(xi, -config_.delta), config_.R);
    if (v != nullptr && noise_out != nullptr) {
        bind_transport(*v);
        engine_.lie_and_transport_cached(xi, out, *noise_out);
        out *= config_.nonlinear ? -f : 0.0;
    } else if (config_.nonlinear && f > 0.0) {
        engine_.lie_and_transport(xi, v, out, noise_out);
        out *= -f;
    } else {
        out.set_zero();
        if (v != nullptr && noise_out != nullptr) *noise_out = engine_.transport(*v, xi);
    }
    return f;
}

SpectralField Stepper::step(const SpectralField& xi, double dt, const SpectralField* increment, StageInfo* info)
{
    const int M = config_.M;
    const auto& E = decay(dt);
    SpectralField n1(M), t1(M), n2(M);
    const bool noisy = increment != nullptr;

    const double f1 = nonlinear_term(xi, n1, increment, noisy ? &t1 : nullptr);
    if (info != nullptr) {
        info->cutoff = f1;
        info->nonlinear = n1;
        info->nonlinear_production = inner(n1, xi);
        info->noise_budget = noisy ? inner(t1, xi) / dt : 0.0;
    }
    // F1 = dt N(a) + T(a); predictor b = E (a + F1)
    SpectralField F1 = n1;
    F1 *= dt;
    if (noisy) F1 += t1;
    SpectralField b = xi;
    b += F1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (auto& c : b[i]) c *= E[i];
    }
    SpectralField F2(M);
    if (noisy) {
        double f2 = 1.0;
        if (config_.R > 0.0) f2 = cutoff_factor(sobolev_norm(b, -config_.delta), config_.R);
        bind_transport(*increment);
        engine_.combined_cached(b, config_.nonlinear ? f2 * dt : 0.0, F2);
    } else {
        nonlinear_term(b, n2, nullptr, nullptr);
        F2 = n2;
        F2 *= dt;
    }

    SpectralField out = xi;
    out.axpy(0.5, F1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (int d = 0; d < 3; ++d) out[i][d] = E[i] * out[i][d] + 0.5 * F2[i][d];
    }
    leray_project_in_place(out);
    return out;
}

namespace {

// Position of every noise label among the components of a path family.
std::vector<std::size_t> component_map(const TransportNoise& noise, const std::vector<RealIndex>& labels)
{
    std::vector<std::size_t> map;
    for (const auto& lab : noise.labels()) {
        auto it = std::find(labels.begin(), labels.end(), lab);
        if (it == labels.end()) {
            throw Error(ErrorCode::incomplete_ensemble, "ensemble does not contain every noise mode");
        }
        map.push_back(std::size_t(it - labels.begin()));
    }
    return map;
}

std::vector<RealIndex> ensemble_labels(const BrownianEnsemble& e)
{
    std::vector<RealIndex> out;
    for (std::size_t p = 0; p < e.path_count(); ++p) out.push_back(e.label(p));
    return out;
}

bool finite_field(const SpectralField& f)
{
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (const auto& c : f[i]) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        }
    }
    return true;
}

}  // namespace

SpectralField rhs_wong_zakai(const SpectralField& xi, double t, const SolverConfig& config,
                             const PiecewiseLinearFamily& slopes, const NoiseModel& noise)
{
    if (t < 0.0 || t > slopes.horizon()) throw Error(ErrorCode::time_range, "time outside [0, T]");
    const std::size_t seg = slopes.segment_of(t);
    const auto map = component_map(noise.transport(), slopes.labels());
    std::vector<double> w(map.size());
    for (std::size_t j = 0; j < map.size(); ++j) w[j] = slopes.slope(map[j], seg);
    const SpectralField v = noise.transport().field(w);

    Stepper stepper(config);
    SpectralField nl(config.M), tr(config.M);
    stepper.nonlinear_term(xi, nl, &v, &tr);
    SpectralField out = laplacian(xi);
    out *= config.viscosity;
    out += nl;
    out += tr;
    return out;
}

SpectralField step(const SpectralField& state, double t, double dt, const SolverConfig& config, StepMode mode,
                   const NoiseModel* noise, const PiecewiseLinearFamily* slopes, const BrownianEnsemble* ensemble)
{
    Stepper stepper(config);
    if (mode == StepMode::deterministic || noise == nullptr || !config.noise) return stepper.step(state, dt, nullptr);
    const auto& tn = noise->transport();
    std::vector<double> w(tn.size());
    if (mode == StepMode::wong_zakai) {
        if (slopes == nullptr) throw Error(ErrorCode::invalid_argument, "Wong-Zakai step needs slopes");
        const std::size_t seg = slopes->segment_of(t);
        const auto map = component_map(tn, slopes->labels());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] = slopes->slope(map[j], seg) * dt;
    } else {
        if (ensemble == nullptr) throw Error(ErrorCode::invalid_argument, "Stratonovich step needs an ensemble");
        const double a = t / ensemble->step();
        const double b = (t + dt) / ensemble->step();
        const double ra = std::round(a), rb = std::round(b);
        if (std::abs(a - ra) > 1e-9 || std::abs(b - rb) > 1e-9 || rb > double(ensemble->intervals()) || ra < 0) {
            throw Error(ErrorCode::time_range, "Stratonovich step must lie on the ensemble grid");
        }
        const auto map = component_map(tn, ensemble_labels(*ensemble));
        for (std::size_t j = 0; j < w.size(); ++j) {
            const auto p = ensemble->path(map[j] / 2, int(map[j] % 2) + 1);
            w[j] = p[std::size_t(rb)] - p[std::size_t(ra)];
        }
    }
    const SpectralField inc = tn.field(w);
    return stepper.step(state, dt, &inc);
}

Trajectory simulate(const SolverConfig& config, const SpectralField& xi0, StepMode mode,
                    const BrownianEnsemble* ensemble)
{
    if (xi0.M() != config.M) throw Error(ErrorCode::configuration, "initial field truncation differs from M");
    if (!(config.T > 0.0) || !(config.dt > 0.0)) throw Error(ErrorCode::configuration, "T and dt must be > 0");
    if (!(config.cfl > 0.0)) throw Error(ErrorCode::configuration, "cfl must be > 0");

    const Lattice lattice(config.M);
    const bool noisy = mode != StepMode::deterministic && config.noise;
    std::optional<NoiseModel> noise;
    std::optional<PiecewiseLinearFamily> pl;
    std::vector<std::size_t> map;
    std::vector<double> nodes{0.0, config.T};

    if (noisy) {
        if (ensemble == nullptr) throw Error(ErrorCode::invalid_argument, "noisy modes need a Brownian ensemble");
        if (std::abs(ensemble->horizon() - config.T) > 1e-12 * config.T) {
            throw Error(ErrorCode::configuration, "ensemble horizon differs from T");
        }
        noise.emplace(config, lattice);
        if (mode == StepMode::wong_zakai) {
            pl.emplace(piecewise_linear(*ensemble, config.n));
            map = component_map(noise->transport(), pl->labels());
            nodes = pl->partition();
        } else {
            map = component_map(noise->transport(), ensemble_labels(*ensemble));
            nodes.resize(ensemble->points());
            for (std::size_t j = 0; j < nodes.size(); ++j) nodes[j] = ensemble->time(j);
        }
    }
    // Saved times become step boundaries.
    std::vector<double> saves{0.0};
    for (std::size_t j = 1; j < config.save_points; ++j) saves.push_back(config.T * double(j) / double(config.save_points));
    saves.push_back(config.T);
    std::vector<double> cuts = nodes;
    for (double t : saves) {
        const bool near = std::any_of(nodes.begin(), nodes.end(), [&](double x) { return std::abs(x - t) <= 1e-12 * config.T; });
        if (!near) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());

    Trajectory traj;
    traj.mode = mode;
    Stepper stepper(config);
    PseudoSpectral& engine = engine_for(config.M);
    const double kmax = double(config.M) * std::sqrt(3.0);
    SpectralField xi = xi0;
    SpectralField cum(config.M);
    Stepper::StageInfo info(config.M);
    std::vector<double> w(noisy ? noise->transport().size() : 0);
    SpectralField rate(config.M);  // transport field per unit time on the current slot
    std::size_t slot = std::numeric_limits<std::size_t>::max();
    double rate_sup = 0.0;
    std::size_t next_save = 1;
    double pending = 0.0;  // trapezoid weight still owed to the drift at the current state

    auto diag_of = [&](double t, const SpectralField& x) {
        StepDiagnostics d;
        d.t = t;
        d.enstrophy = enstrophy(x);
        d.dissipation = gradient_energy(x);
        d.negative_norm = sobolev_norm(x, -config.delta);
        return d;
    };
    auto drift_of = [&](const SpectralField& x, const SpectralField& nonlinear) {
        SpectralField d = laplacian(x);
        d *= config.viscosity;
        d += nonlinear;
        return d;
    };
    auto save = [&](double t) {
        if (config.record_drift && pending > 0.0) {
            SpectralField nl(config.M);
            stepper.nonlinear_term(xi, nl, nullptr, nullptr);
            cum.axpy(pending, drift_of(xi, nl));
            pending = 0.0;
        }
        traj.times.push_back(t);
        traj.states.push_back(xi);
        if (config.record_drift) traj.drift_integral.push_back(cum);
    };
    save(0.0);

    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double len = cuts[c + 1] - a;
        if (len <= 0.0) continue;
        if (noisy) {
            const auto seg = std::size_t(std::upper_bound(nodes.begin(), nodes.end(), a + 0.5 * len) - nodes.begin()) - 1;
            if (seg != slot) {
                const double seg_len = nodes[seg + 1] - nodes[seg];
                for (std::size_t j = 0; j < w.size(); ++j) {
                    if (mode == StepMode::wong_zakai) {
                        w[j] = pl->slope(map[j], seg);
                    } else {
                        const auto p = ensemble->path(map[j] / 2, int(map[j] % 2) + 1);
                        w[j] = (p[seg + 1] - p[seg]) / seg_len;
                    }
                }
                rate = noise->transport().field(w);
                rate_sup = engine.grid_sup(rate);
                slot = seg;
            }
        }
        auto sub = std::max<std::size_t>(1, std::size_t(std::ceil(len / config.dt - 1e-9)));
        if (noisy) {
            const double need = std::ceil(two_pi * kmax * rate_sup * len / config.cfl - 1e-9);
            sub = std::max(sub, std::size_t(std::max(1.0, need)));
        }
        const double h = len / double(sub);
        SpectralField inc(config.M);
        if (noisy) {
            inc = rate;
            inc *= h;
        }
        for (std::size_t q = 0; q < sub; ++q) {
            const double t = a + h * double(q);
            SpectralField next = stepper.step(xi, h, noisy ? &inc : nullptr, &info);
            StepDiagnostics d = diag_of(t, xi);
            d.cutoff = info.cutoff;
            d.noise_budget = info.noise_budget;
            d.nonlinear_production = info.nonlinear_production;
            traj.diagnostics.push_back(d);
            if (config.record_drift) {
                cum.axpy(pending + 0.5 * h, drift_of(xi, info.nonlinear));
                pending = 0.5 * h;
            }
            if (!finite_field(next) || !(enstrophy(next) < 1e300)) {
                traj.blowup_time = t + h;
                return traj;
            }
            xi = std::move(next);
        }
        const double end = cuts[c + 1];
        while (next_save < saves.size() && saves[next_save] <= end + 1e-12 * config.T) {
            if (std::abs(saves[next_save] - end) <= 1e-12 * config.T) save(next_save + 1 == saves.size() ? config.T : end);
            ++next_save;
        }
    }
    SpectralField nl(config.M);
    const double f = stepper.nonlinear_term(xi, nl, nullptr, nullptr);
    StepDiagnostics dl = diag_of(config.T, xi);
    dl.cutoff = f;
    dl.nonlinear_production = inner(nl, xi);
    traj.diagnostics.push_back(dl);
    return traj;
}

std::optional<double> lifespan(const Trajectory& trajectory, double threshold)
{
    if (!(threshold > 0.0)) throw Error(ErrorCode::invalid_argument, "lifespan threshold must be > 0");
    const double t2 = threshold * threshold;
    for (const auto& d : trajectory.diagnostics) {
        if (d.enstrophy > t2) return d.t;
    }
    if (trajectory.blowup_time) return trajectory.blowup_time;
    return std::nullopt;
}

void rescale_to(SpectralField& xi, double K)
{
    const double n = std::sqrt(enstrophy(xi));
    if (n > 0.0) xi *= K / n;
}

SpectralField random_initial_field(int M, double K, std::uint64_t seed, double slope, int max_mode)
{
    SpectralField xi(M);
    const int reach = max_mode > 0 ? std::min(M, max_mode) : M;
    const ModeCube& cube = xi.cube();
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const Vec3i k = cube.wave_vector(i);
        if (!is_plus(k) || max_norm(k) > reach) continue;
        const double amp = std::pow(std::sqrt(double(norm2(k))), -slope);
        Vec3c c;
        for (int d = 0; d < 3; ++d) {
            c[d] = amp * Complex(keyed_normal(seed, k, 10 + d, 0, 0), keyed_normal(seed, k, 20 + d, 0, 0));
        }
        xi[i] = c;
        Vec3c& m = xi.at(-k);
        for (int d = 0; d < 3; ++d) m[d] = std::conj(c[d]);
    }
    leray_project_in_place(xi);
    rescale_to(xi, K);
    return xi;
}

SpectralField taylor_green_field(int M, double K)
{
    PseudoSpectral& eng = engine_for(M);
    const int G = eng.grid_size();
    std::vector<double> u1(eng.grid_points()), u2(eng.grid_points()), u3(eng.grid_points(), 0.0);
    for (int a = 0; a < G; ++a) {
        for (int b = 0; b < G; ++b) {
            for (int c = 0; c < G; ++c) {
                const double x = two_pi * a / G, y = two_pi * b / G, z = two_pi * c / G;
                const std::size_t p = (std::size_t(a) * G + std::size_t(b)) * G + std::size_t(c);
                u1[p] = std::sin(x) * std::cos(y) * std::cos(z);
                u2[p] = -std::cos(x) * std::sin(y) * std::cos(z);
            }
        }
    }
    SpectralField u(M);
    eng.to_spectral(u1, u, 0);
    eng.to_spectral(u2, u, 1);
    eng.to_spectral(u3, u, 2);
    SpectralField xi = curl(u);
    leray_project_in_place(xi);
    rescale_to(xi, K);
    return xi;
}

SpectralField two_mode_field(int M, double amplitude)
{
    SpectralField xi(M);
    const LatticeMode a = make_mode({1, 0, 0});
    const LatticeMode b = make_mode({0, 1, 1});
    Vec3c ca, cb;
    for (int d = 0; d < 3; ++d) {
        ca[d] = amplitude * a.a1[d];
        cb[d] = Complex(0.0, amplitude) * b.a2[d] + 0.5 * amplitude * b.a1[d];
    }
    xi.at(a.k) = ca;
    xi.at(b.k) = cb;
    for (int d = 0; d < 3; ++d) {
        xi.at(-a.k)[d] = std::conj(ca[d]);
        xi.at(-b.k)[d] = std::conj(cb[d]);
    }
    return xi;
}

}  // namespace wzns
