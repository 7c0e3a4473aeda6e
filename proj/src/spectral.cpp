#include "wzns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "wzns/error.hpp"

namespace wzns {

SpectralField::SpectralField(int M) : cube_(M), c_(cube_.size(), Vec3c{}) {}

void SpectralField::set_zero() { std::fill(c_.begin(), c_.end(), Vec3c{}); }

SpectralField& SpectralField::operator+=(const SpectralField& other)
{
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (int d = 0; d < 3; ++d) c_[i][d] += other.c_[i][d];
    }
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other)
{
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (int d = 0; d < 3; ++d) c_[i][d] -= other.c_[i][d];
    }
    return *this;
}

SpectralField& SpectralField::operator*=(double s)
{
    for (auto& v : c_) {
        for (auto& x : v) x *= s;
    }
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& x)
{
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (int d = 0; d < 3; ++d) c_[i][d] += s * x.c_[i][d];
    }
    return *this;
}

double SpectralField::max_abs() const
{
    double m = 0.0;
    for (const auto& v : c_) {
        for (const auto& x : v) m = std::max(m, std::abs(x));
    }
    return m;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

int physical_grid_size(int M)
{
    int G = 1;
    while (G < 3 * M) G *= 2;
    return G;
}

double reality_defect(const SpectralField& f)
{
    const ModeCube& cube = f.cube();
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3i k = cube.wave_vector(i);
        const Vec3c& a = f[i];
        const Vec3c& b = f.at(-k);
        for (int d = 0; d < 3; ++d) worst = std::max(worst, std::abs(b[d] - std::conj(a[d])));
    }
    return worst;
}

double divergence_defect(const SpectralField& f)
{
    const ModeCube& cube = f.cube();
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        worst = std::max(worst, std::abs(dot(to_real(cube.wave_vector(i)), f[i])));
    }
    return worst;
}

void leray_project_in_place(SpectralField& f)
{
    const ModeCube& cube = f.cube();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3i k = cube.wave_vector(i);
        const int k2 = norm2(k);
        if (k2 == 0) {
            f[i] = Vec3c{};
            continue;
        }
        const Vec3 kr = to_real(k);
        const Complex s = dot(kr, f[i]) / double(k2);
        for (int d = 0; d < 3; ++d) f[i][d] -= kr[d] * s;
    }
}

SpectralField leray_project(const SpectralField& f)
{
    const double scale = std::max(1.0, f.max_abs());
    if (reality_defect(f) > 1e-12 * scale) {
        throw Error(ErrorCode::symmetry, "coefficients violate the reality symmetry f_{-k} = conj(f_k)");
    }
    SpectralField out = f;
    leray_project_in_place(out);
    return out;
}

SpectralField biot_savart(const SpectralField& xi)
{
    SpectralField u(xi.M());
    const ModeCube& cube = xi.cube();
    const Complex i_unit(0.0, 1.0);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const Vec3i k = cube.wave_vector(i);
        const int k2 = norm2(k);
        if (k2 == 0) continue;
        const Vec3c c = cross(to_real(k), xi[i]);
        const Complex s = i_unit / (two_pi * double(k2));
        for (int d = 0; d < 3; ++d) u[i][d] = s * c[d];
    }
    return u;
}

SpectralField curl(const SpectralField& f)
{
    SpectralField out(f.M());
    const ModeCube& cube = f.cube();
    const Complex s(0.0, two_pi);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3c c = cross(to_real(cube.wave_vector(i)), f[i]);
        for (int d = 0; d < 3; ++d) out[i][d] = s * c[d];
    }
    return out;
}

SpectralField laplacian(const SpectralField& f)
{
    SpectralField out(f.M());
    const ModeCube& cube = f.cube();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = -4.0 * pi * pi * double(norm2(cube.wave_vector(i)));
        for (int d = 0; d < 3; ++d) out[i][d] = w * f[i][d];
    }
    return out;
}

double inner(const SpectralField& f, const SpectralField& g)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += hdot(f[i], g[i]).real();
    return s;
}

double sobolev_norm(const SpectralField& f, double m)
{
    const ModeCube& cube = f.cube();
    std::vector<double> weight(std::size_t(3 * f.M() * f.M() + 1));
    for (std::size_t q = 0; q < weight.size(); ++q) weight[q] = std::pow(1.0 + 4.0 * pi * pi * double(q), m);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = norm2(f[i]);
        if (a == 0.0) continue;
        s += weight[std::size_t(norm2(cube.wave_vector(i)))] * a;
    }
    return std::sqrt(s);
}

double enstrophy(const SpectralField& xi)
{
    double s = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) s += norm2(xi[i]);
    return s;
}

double gradient_energy(const SpectralField& xi)
{
    const ModeCube& cube = xi.cube();
    double s = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        s += 4.0 * pi * pi * double(norm2(cube.wave_vector(i))) * norm2(xi[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// FFTW plumbing

namespace {

struct Plans {
    fftw_plan c2r = nullptr;
    fftw_plan r2c = nullptr;
};

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

// Plans are created once per grid size and never destroyed.
const Plans& plans_for(int G)
{
    static std::map<int, Plans> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(G);
    if (it != cache.end()) return it->second;
    const std::size_t npts = std::size_t(G) * G * G;
    const std::size_t nhalf = std::size_t(G) * G * (G / 2 + 1);
    double* r = fftw_alloc_real(npts);
    fftw_complex* c = fftw_alloc_complex(nhalf);
    Plans p;
    p.c2r = fftw_plan_dft_c2r_3d(G, G, G, c, r, FFTW_ESTIMATE);
    p.r2c = fftw_plan_dft_r2c_3d(G, G, G, r, c, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    if (p.c2r == nullptr || p.r2c == nullptr) throw Error(ErrorCode::internal, "FFTW plan creation failed");
    return cache.emplace(G, p).first->second;
}

int wrap(int k, int G) { return k < 0 ? k + G : k; }

}  // namespace

PseudoSpectral::PseudoSpectral(int M)
    : M_(M),
      G_(physical_grid_size(M)),
      npts_(std::size_t(G_) * G_ * G_),
      nhalf_(std::size_t(G_) * G_ * (G_ / 2 + 1)),
      cube_(M)
{
    plans_for(G_);
    half_ = reinterpret_cast<double*>(fftw_alloc_complex(nhalf_));
    // u (3), xi (3), v (3), product scratch (1)
    phys_.resize(10);
    for (auto& p : phys_) p = fftw_alloc_real(npts_);
}

PseudoSpectral::~PseudoSpectral()
{
    fftw_free(half_);
    for (auto* p : phys_) fftw_free(p);
    for (auto* p : grad_) fftw_free(p);
    for (auto* p : vphys_) fftw_free(p);
}

void PseudoSpectral::prepare_gradient(const SpectralField& xi)
{
    if (grad_.empty()) {
        grad_.resize(9);
        for (auto& p : grad_) p = fftw_alloc_real(npts_);
    }
    SpectralField g(M_);
    const ModeCube& cube = cube_;
    for (int j = 0; j < 3; ++j) {
        for (std::size_t idx = 0; idx < xi.size(); ++idx) {
            const Complex s(0.0, two_pi * cube.wave_vector(idx)[j]);
            for (int i = 0; i < 3; ++i) g[idx][i] = s * xi[idx][i];
        }
        for (int i = 0; i < 3; ++i) to_physical(g, i, {grad_[3 * i + j], npts_});
    }
}

SpectralField PseudoSpectral::transport_prepared(const SpectralField& v)
{
    if (grad_.empty()) throw Error(ErrorCode::internal, "transport_prepared called before prepare_gradient");
    double* const* ph = phys_.data();
    for (int d = 0; d < 3; ++d) to_physical(v, d, {ph[6 + d], npts_});
    SpectralField out(M_);
    double* scratch = ph[9];
    for (int i = 0; i < 3; ++i) {
        const double* g0 = grad_[3 * i];
        const double* g1 = grad_[3 * i + 1];
        const double* g2 = grad_[3 * i + 2];
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[6][p] * g0[p] + ph[7][p] * g1[p] + ph[8][p] * g2[p];
        to_spectral({scratch, npts_}, out, i);
    }
    leray_project_in_place(out);
    return out;
}

void PseudoSpectral::to_physical(const SpectralField& f, int component, std::span<double> out)
{
    const int hz = G_ / 2 + 1;
    std::fill(half_, half_ + 2 * nhalf_, 0.0);
    for (int k1 = -M_; k1 <= M_; ++k1) {
        for (int k2 = -M_; k2 <= M_; ++k2) {
            const std::size_t row = (std::size_t(wrap(k1, G_)) * G_ + std::size_t(wrap(k2, G_))) * hz;
            for (int k3 = 0; k3 <= M_; ++k3) {
                const Complex v = f.at({k1, k2, k3})[component];
                half_[2 * (row + k3)] = v.real();
                half_[2 * (row + k3) + 1] = v.imag();
            }
        }
    }
    fftw_execute_dft_c2r(plans_for(G_).c2r, reinterpret_cast<fftw_complex*>(half_), out.data());
}

void PseudoSpectral::forward(std::span<const double> in)
{
    // r2c does not modify its input for out-of-place plans.
    fftw_execute_dft_r2c(plans_for(G_).r2c, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(half_));
}

Complex PseudoSpectral::half_value(const Vec3i& k) const
{
    const int hz = G_ / 2 + 1;
    const std::size_t pos = (std::size_t(wrap(k[0], G_)) * G_ + std::size_t(wrap(k[1], G_))) * hz + std::size_t(k[2]);
    return {half_[2 * pos], half_[2 * pos + 1]};
}

template <class Fn>
void PseudoSpectral::for_each_transformed(Fn&& fn) const
{
    const double scale = 1.0 / double(npts_);
    for (int k1 = -M_; k1 <= M_; ++k1) {
        for (int k2 = -M_; k2 <= M_; ++k2) {
            for (int k3 = 0; k3 <= M_; ++k3) {
                const Vec3i k{k1, k2, k3};
                if (k3 == 0 && !is_plus(k)) continue;
                const Complex v = half_value(k) * scale;
                fn(k, cube_.index(k), v);
                const Vec3i mk = -k;
                fn(mk, cube_.index(mk), std::conj(v));
            }
        }
    }
}

void PseudoSpectral::to_spectral(std::span<const double> in, SpectralField& f, int component)
{
    forward(in);
    f[cube_.origin()][component] = 0.0;
    for_each_transformed([&](const Vec3i&, std::size_t idx, Complex v) { f[idx][component] = v; });
}

SpectralField PseudoSpectral::lie_derivative(const SpectralField& u, const SpectralField& xi)
{
    double* const* ph = phys_.data();
    for (int d = 0; d < 3; ++d) {
        to_physical(u, d, {ph[d], npts_});
        to_physical(xi, d, {ph[3 + d], npts_});
    }
    // L_u xi = -curl(u x xi) for divergence-free u and xi.
    SpectralField w(M_);
    double* scratch = ph[9];
    for (int d = 0; d < 3; ++d) {
        const int a = (d + 1) % 3;
        const int b = (d + 2) % 3;
        const double* ua = ph[a];
        const double* ub = ph[b];
        const double* xa = ph[3 + a];
        const double* xb = ph[3 + b];
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ua[p] * xb[p] - ub[p] * xa[p];
        to_spectral({scratch, npts_}, w, d);
    }
    SpectralField out = curl(w);
    out *= -1.0;
    return out;
}

SpectralField PseudoSpectral::advect(const SpectralField& u, const SpectralField& w)
{
    double* const* ph = phys_.data();
    for (int d = 0; d < 3; ++d) {
        to_physical(u, d, {ph[d], npts_});
        to_physical(w, d, {ph[3 + d], npts_});
    }
    // (u.grad) w_i = d_j (u_j w_i) for divergence-free u.
    SpectralField out(M_);
    double* scratch = ph[9];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double* uj = ph[j];
            const double* wi = ph[3 + i];
            for (std::size_t p = 0; p < npts_; ++p) scratch[p] = uj[p] * wi[p];
            forward({scratch, npts_});
            for_each_transformed([&](const Vec3i& k, std::size_t idx, Complex v) {
                out[idx][i] += Complex(0.0, two_pi * k[j]) * v;
            });
        }
    }
    return out;
}

SpectralField PseudoSpectral::transport(const SpectralField& v, const SpectralField& xi)
{
    SpectralField out = advect(v, xi);
    leray_project_in_place(out);
    return out;
}

void PseudoSpectral::lie_and_transport(const SpectralField& xi, const SpectralField* v, SpectralField& lie,
                                       SpectralField* noise)
{
    double* const* ph = phys_.data();
    const SpectralField u = biot_savart(xi);
    for (int d = 0; d < 3; ++d) {
        to_physical(u, d, {ph[d], npts_});
        to_physical(xi, d, {ph[3 + d], npts_});
    }
    double* scratch = ph[9];
    SpectralField w(M_);
    for (int d = 0; d < 3; ++d) {
        const int a = (d + 1) % 3;
        const int b = (d + 2) % 3;
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[a][p] * ph[3 + b][p] - ph[b][p] * ph[3 + a][p];
        to_spectral({scratch, npts_}, w, d);
    }
    const ModeCube& cube = cube_;
    const Complex s(0.0, -two_pi);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec3c c = cross(to_real(cube.wave_vector(i)), w[i]);
        for (int d = 0; d < 3; ++d) lie[i][d] = s * c[d];
    }

    if (v == nullptr || noise == nullptr) return;
    for (int d = 0; d < 3; ++d) to_physical(*v, d, {ph[6 + d], npts_});
    noise->set_zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double* vj = ph[6 + j];
            const double* xi_i = ph[3 + i];
            for (std::size_t p = 0; p < npts_; ++p) scratch[p] = vj[p] * xi_i[p];
            forward({scratch, npts_});
            for_each_transformed([&](const Vec3i& k, std::size_t idx, Complex val) {
                (*noise)[idx][i] += Complex(0.0, two_pi * k[j]) * val;
            });
        }
    }
    leray_project_in_place(*noise);
}

std::uint64_t PseudoSpectral::prepare_transport_field(const SpectralField& v)
{
    if (vphys_.empty()) {
        vphys_.resize(12);
        for (auto& p : vphys_) p = fftw_alloc_real(npts_);
    }
    for (int d = 0; d < 3; ++d) to_physical(v, d, {vphys_[d], npts_});
    SpectralField g(M_);
    for (int j = 0; j < 3; ++j) {
        for (std::size_t idx = 0; idx < v.size(); ++idx) {
            const Complex s(0.0, two_pi * cube_.wave_vector(idx)[j]);
            for (int i = 0; i < 3; ++i) g[idx][i] = s * v[idx][i];
        }
        for (int i = 0; i < 3; ++i) to_physical(g, i, {vphys_[3 + 3 * i + j], npts_});
    }
    vtoken_ = ++vcounter_;
    return vtoken_;
}

void PseudoSpectral::lie_and_transport_cached(const SpectralField& xi, SpectralField& lie, SpectralField& noise)
{
    if (vtoken_ == 0) throw Error(ErrorCode::internal, "no transport field prepared");
    double* const* ph = phys_.data();
    const SpectralField u = biot_savart(xi);
    for (int d = 0; d < 3; ++d) {
        to_physical(u, d, {ph[d], npts_});
        to_physical(xi, d, {ph[3 + d], npts_});
    }
    double* scratch = ph[9];
    SpectralField w(M_);
    SpectralField wv(M_);
    for (int d = 0; d < 3; ++d) {
        const int a = (d + 1) % 3;
        const int b = (d + 2) % 3;
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[a][p] * ph[3 + b][p] - ph[b][p] * ph[3 + a][p];
        to_spectral({scratch, npts_}, w, d);
        const double* va = vphys_[a];
        const double* vb = vphys_[b];
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = va[p] * ph[3 + b][p] - vb[p] * ph[3 + a][p];
        to_spectral({scratch, npts_}, wv, d);
    }
    for (int i = 0; i < 3; ++i) {
        const double* g0 = vphys_[3 + 3 * i];
        const double* g1 = vphys_[3 + 3 * i + 1];
        const double* g2 = vphys_[3 + 3 * i + 2];
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[3][p] * g0[p] + ph[4][p] * g1[p] + ph[5][p] * g2[p];
        to_spectral({scratch, npts_}, noise, i);
    }
    const Complex s(0.0, -two_pi);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec3 k = to_real(cube_.wave_vector(i));
        const Vec3c c = cross(k, w[i]);
        const Vec3c cv = cross(k, wv[i]);
        for (int d = 0; d < 3; ++d) {
            lie[i][d] = s * c[d];
            noise[i][d] += s * cv[d];
        }
    }
    leray_project_in_place(noise);
}

double PseudoSpectral::grid_sup(const SpectralField& f)
{
    double* const* ph = phys_.data();
    for (int d = 0; d < 3; ++d) to_physical(f, d, {ph[d], npts_});
    double m = 0.0;
    for (std::size_t p = 0; p < npts_; ++p) {
        m = std::max(m, ph[0][p] * ph[0][p] + ph[1][p] * ph[1][p] + ph[2][p] * ph[2][p]);
    }
    return std::sqrt(m);
}

void PseudoSpectral::combined_cached(const SpectralField& xi, double c, SpectralField& out)
{
    if (vtoken_ == 0) throw Error(ErrorCode::internal, "no transport field prepared");
    double* const* ph = phys_.data();
    const SpectralField u = biot_savart(xi);
    for (int d = 0; d < 3; ++d) {
        to_physical(u, d, {ph[d], npts_});
        to_physical(xi, d, {ph[3 + d], npts_});
    }
    // w = c u - v, then c curl(u x xi) - curl(v x xi) = curl(w x xi)
    for (int d = 0; d < 3; ++d) {
        double* ud = ph[d];
        const double* vd = vphys_[d];
        for (std::size_t p = 0; p < npts_; ++p) ud[p] = c * ud[p] - vd[p];
    }
    double* scratch = ph[9];
    SpectralField w(M_);
    for (int d = 0; d < 3; ++d) {
        const int a = (d + 1) % 3;
        const int b = (d + 2) % 3;
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[a][p] * ph[3 + b][p] - ph[b][p] * ph[3 + a][p];
        to_spectral({scratch, npts_}, w, d);
    }
    for (int i = 0; i < 3; ++i) {
        const double* g0 = vphys_[3 + 3 * i];
        const double* g1 = vphys_[3 + 3 * i + 1];
        const double* g2 = vphys_[3 + 3 * i + 2];
        for (std::size_t p = 0; p < npts_; ++p) scratch[p] = ph[3][p] * g0[p] + ph[4][p] * g1[p] + ph[5][p] * g2[p];
        to_spectral({scratch, npts_}, out, i);
    }
    const Complex s(0.0, two_pi);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec3c cw = cross(to_real(cube_.wave_vector(i)), w[i]);
        for (int d = 0; d < 3; ++d) out[i][d] += s * cw[d];
    }
    leray_project_in_place(out);
}

PseudoSpectral& engine_for(int M)
{
    thread_local std::unordered_map<int, std::unique_ptr<PseudoSpectral>> engines;
    auto& slot = engines[M];
    if (!slot) slot = std::make_unique<PseudoSpectral>(M);
    return *slot;
}

SpectralField lie_derivative(const SpectralField& u, const SpectralField& xi)
{
    if (u.M() != xi.M()) throw Error(ErrorCode::configuration, "lie_derivative: truncation mismatch");
    return engine_for(xi.M()).lie_derivative(u, xi);
}

SpectralField sparse_transport(std::span<const SparseMode> g, const SpectralField& xi)
{
    const ModeCube& cube = xi.cube();
    SpectralField out(xi.M());
    for (const auto& mode : g) {
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const Vec3i l = cube.wave_vector(i);
            const Vec3i target = l + mode.k;
            if (!cube.contains(target)) continue;
            const Vec3 lr = to_real(l);
            Complex s = 0.0;
            for (int d = 0; d < 3; ++d) s += mode.amplitude[d] * lr[d];
            s *= Complex(0.0, two_pi);
            Vec3c& o = out.at(target);
            for (int d = 0; d < 3; ++d) o[d] += s * xi[i][d];
        }
    }
    leray_project_in_place(out);
    return out;
}

SpectralField transport_apply(const Lattice& lattice, const Vec3i& k, int alpha, const SpectralField& xi)
{
    const SigmaAction act = sigma_action_offsets(lattice, k, alpha);
    const SparseMode g{act.shift, {act.amplitude[0], act.amplitude[1], act.amplitude[2]}};
    return sparse_transport({&g, 1}, xi);
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w)
{
    if (u.M() != v.M() || u.M() != w.M()) throw Error(ErrorCode::configuration, "trilinear_b: truncation mismatch");
    return inner(engine_for(u.M()).advect(u, v), w);
}

std::vector<Complex> synthesize_complex(const SpectralField& f, int component, int G)
{
    if (G <= 2 * f.M()) throw Error(ErrorCode::configuration, "synthesis grid must exceed 2M");
    const std::size_t npts = std::size_t(G) * G * G;
    fftw_complex* buf = fftw_alloc_complex(npts);
    std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * npts, 0.0);
    const ModeCube& cube = f.cube();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3i k = cube.wave_vector(i);
        const std::size_t pos = (std::size_t(wrap(k[0], G)) * G + std::size_t(wrap(k[1], G))) * G + std::size_t(wrap(k[2], G));
        buf[pos][0] = f[i][component].real();
        buf[pos][1] = f[i][component].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_3d(G, G, G, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<Complex> out(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = {buf[p][0], buf[p][1]};
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return out;
}

}  // namespace wzns
