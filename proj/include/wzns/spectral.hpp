#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wzns/lattice.hpp"
#include "wzns/vec.hpp"

namespace wzns {

// Truncated Fourier coefficients of a vector field on the unit torus,
//   f(x) = sum_k f_k exp(2 pi i k.x),  |k|_inf <= M.
// Stored densely over the cube; the origin slot is kept at zero. A field
// produced by leray_project or by the library's operators satisfies the
// reality (f_{-k} = conj f_k) and divergence-free (k.f_k = 0) invariants;
// raw intermediate coefficients use the same type.
class SpectralField {
public:
    explicit SpectralField(int M);

    int M() const { return cube_.M(); }
    const ModeCube& cube() const { return cube_; }
    std::size_t size() const { return c_.size(); }

    Vec3c& operator[](std::size_t idx) { return c_[idx]; }
    const Vec3c& operator[](std::size_t idx) const { return c_[idx]; }
    Vec3c& at(const Vec3i& k) { return c_[cube_.index(k)]; }
    const Vec3c& at(const Vec3i& k) const { return c_[cube_.index(k)]; }

    std::span<Vec3c> coeffs() { return c_; }
    std::span<const Vec3c> coeffs() const { return c_; }

    void set_zero();
    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    // this += s * x
    SpectralField& axpy(double s, const SpectralField& x);

    double max_abs() const;

private:
    ModeCube cube_;
    std::vector<Vec3c> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Physical grid side: smallest power of two >= 3M, which makes every
// quadratic product of cube-truncated fields alias-free on the cube.
int physical_grid_size(int M);

// max_k |f_{-k} - conj f_k|
double reality_defect(const SpectralField& f);
// max_k |k . f_k|
double divergence_defect(const SpectralField& f);

// Orthogonal projection onto divergence-free fields. Throws symmetry if the
// input is not the transform of a real field.
SpectralField leray_project(const SpectralField& f);
void leray_project_in_place(SpectralField& f);

// u_k = i (k x xi_k) / (2 pi |k|^2), the divergence-free velocity with curl u = xi.
SpectralField biot_savart(const SpectralField& xi);
SpectralField curl(const SpectralField& f);
// Unit-viscosity Laplacian: -4 pi^2 |k|^2 f_k.
SpectralField laplacian(const SpectralField& f);

// L^2 inner product of two real fields (Parseval).
double inner(const SpectralField& f, const SpectralField& g);
// ||f||^2_{H^m} = sum (1 + 4 pi^2 |k|^2)^m |f_k|^2, returned as the norm.
double sobolev_norm(const SpectralField& f, double m);
double enstrophy(const SpectralField& xi);         // ||xi||_H^2
double gradient_energy(const SpectralField& xi);   // ||grad xi||_H^2

// FFT engine on the dealiasing grid. Holds aligned work buffers; one
// instance per thread. Plans are shared and created with FFTW_ESTIMATE so
// results are reproducible run to run.
class PseudoSpectral {
public:
    explicit PseudoSpectral(int M);
    ~PseudoSpectral();
    PseudoSpectral(const PseudoSpectral&) = delete;
    PseudoSpectral& operator=(const PseudoSpectral&) = delete;

    int M() const { return M_; }
    int grid_size() const { return G_; }
    std::size_t grid_points() const { return npts_; }

    // One component to the physical grid (length grid_points()).
    void to_physical(const SpectralField& f, int component, std::span<double> out);
    // Physical scalar to one component of the cube coefficients (overwrites).
    void to_spectral(std::span<const double> in, SpectralField& f, int component);

    // u.grad xi - xi.grad u (both inputs divergence-free), exact on the cube.
    SpectralField lie_derivative(const SpectralField& u, const SpectralField& xi);
    // Leray projection of v.grad xi for divergence-free v.
    SpectralField transport(const SpectralField& v, const SpectralField& xi);
    // (u.grad) w without projection, for divergence-free u.
    SpectralField advect(const SpectralField& u, const SpectralField& w);

    // Fused evaluation used by the time stepper: lie = L_u xi with
    // u = biot_savart(xi), and noise = Pi(v.grad xi) when v is given.
    void lie_and_transport(const SpectralField& xi, const SpectralField* v, SpectralField& lie,
                           SpectralField* noise);

    // Batched transports of one field: prepare_gradient caches grad xi on
    // the grid, transport_prepared(v) then returns Pi(v.grad xi).
    void prepare_gradient(const SpectralField& xi);
    SpectralField transport_prepared(const SpectralField& v);

    // Caches a divergence-free transport field v and grad v on the grid.
    // lie_and_transport_cached then evaluates Pi(v.grad xi) as
    // Pi(xi.grad v - curl(v x xi)) with six forward transforms.
    // Returns a token identifying the cached field.
    std::uint64_t prepare_transport_field(const SpectralField& v);
    std::uint64_t transport_token() const { return vtoken_; }
    void lie_and_transport_cached(const SpectralField& xi, SpectralField& lie, SpectralField& noise);
    // c * curl(u x xi) + Pi(v.grad xi) with u = biot_savart(xi) and the
    // cached v, in three forward transforms.
    // max over grid points of |f(x)|.
    double grid_sup(const SpectralField& f);
    void combined_cached(const SpectralField& xi, double c, SpectralField& out);

private:
    void forward(std::span<const double> in);
    Complex half_value(const Vec3i& k) const;
    // Calls fn(k, cube index, value) for every cube k except the origin,
    // using the last forward transform.
    template <class Fn>
    void for_each_transformed(Fn&& fn) const;

    int M_;
    int G_;
    std::size_t npts_;
    std::size_t nhalf_;
    ModeCube cube_;
    double* half_ = nullptr;  // fftw_complex storage, 2 * nhalf_ doubles
    std::vector<double*> phys_;
    std::vector<double*> grad_;  // 9 components, d_j xi_i at 3*i + j
    std::vector<double*> vphys_; // v then d_j v_i at 3 + 3*i + j
    std::uint64_t vtoken_ = 0;
    std::uint64_t vcounter_ = 0;
};

// Thread-local engine for the given truncation.
PseudoSpectral& engine_for(int M);

SpectralField lie_derivative(const SpectralField& u, const SpectralField& xi);

// Exact single-mode convolution Pi(sigma_{k,alpha} . grad xi), with output
// outside the truncation dropped.
SpectralField transport_apply(const Lattice& lattice, const Vec3i& k, int alpha, const SpectralField& xi);

// Pi(g . grad xi) for a field g that is sparse in Fourier space (g given by
// its nonzero coefficients). Exact convolution without transforms.
struct SparseMode {
    Vec3i k;
    Vec3c amplitude;
};
SpectralField sparse_transport(std::span<const SparseMode> g, const SpectralField& xi);

// b(u,v,w) = int ((u.grad) v) . w dx
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w);

// Complex synthesis of one component on a grid of side G (any G > 2M gives
// exact quadrature for products). Used to check the reality criterion.
std::vector<Complex> synthesize_complex(const SpectralField& f, int component, int G);

// Binary field format: "WZNSFLD\0", u32 version, i32 M, u64 mode count,
// u64 config hash, u64 seed, then mode-count * 3 complex float64 pairs
// (little-endian) in enumeration order.
inline constexpr std::uint32_t field_format_version = 1;
void write_field(std::ostream& os, const SpectralField& f, std::uint64_t config_hash, std::uint64_t seed);
struct LoadedField {
    SpectralField field;
    std::uint64_t config_hash;
    std::uint64_t seed;
};
LoadedField read_field(std::istream& is);
void save_field(const std::string& path, const SpectralField& f, std::uint64_t config_hash, std::uint64_t seed);
LoadedField load_field(const std::string& path);

}  // namespace wzns
