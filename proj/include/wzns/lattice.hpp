#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wzns/vec.hpp"

namespace wzns {

enum class SignClass { plus, minus };

// Nonzero wave vector with its half-lattice class and the orthonormal frame
// (a1, a2) spanning k-perp. Frames are shared between k and -k.
struct LatticeMode {
    Vec3i k{};
    SignClass sign = SignClass::plus;
    Vec3 a1{};
    Vec3 a2{};

    const Vec3& frame(int alpha) const { return alpha == 1 ? a1 : a2; }
};

// Lexicographically positive: first nonzero component > 0.
bool is_plus(const Vec3i& k);

// All k with 0 < |k|_inf <= M in lexicographic order. Throws invalid_truncation
// for M < 1.
std::vector<LatticeMode> enumerate_modes(int M);

// Frame for a single wave vector; for a minus-class vector this is the frame
// of its negation.
LatticeMode make_mode(const Vec3i& k);

// Dense indexing of the cube |k|_inf <= M (origin included) in the same
// lexicographic order as enumerate_modes.
class ModeCube {
public:
    explicit ModeCube(int M);

    int M() const { return M_; }
    int side() const { return side_; }
    std::size_t size() const { return std::size_t(side_) * side_ * side_; }
    bool contains(const Vec3i& k) const { return max_norm(k) <= M_; }
    std::size_t index(const Vec3i& k) const
    {
        return (std::size_t(k[0] + M_) * side_ + std::size_t(k[1] + M_)) * side_ + std::size_t(k[2] + M_);
    }
    Vec3i wave_vector(std::size_t idx) const
    {
        const int k3 = int(idx % side_) - M_;
        idx /= side_;
        const int k2 = int(idx % side_) - M_;
        idx /= side_;
        return {int(idx) - M_, k2, k3};
    }
    std::size_t origin() const { return index({0, 0, 0}); }

private:
    int M_;
    int side_;
};

// Immutable enumerated lattice with frame lookup.
class Lattice {
public:
    explicit Lattice(int M);

    int M() const { return cube_.M(); }
    const ModeCube& cube() const { return cube_; }
    const std::vector<LatticeMode>& modes() const { return modes_; }
    // nullptr if k is zero or outside the truncation.
    const LatticeMode* find(const Vec3i& k) const;

private:
    ModeCube cube_;
    std::vector<LatticeMode> modes_;
    std::vector<int> slot_;  // cube index -> position in modes_, -1 for origin
};

// theta^N_k = |k|^-gamma on the shell N <= |k| <= 2N (Euclidean), zero elsewhere.
class NoiseCoefficients {
public:
    struct Entry {
        Vec3i k;
        double theta;
    };

    NoiseCoefficients(int N, double gamma, std::vector<Entry> support);

    int N() const { return N_; }
    double gamma() const { return gamma_; }
    // Shell support in enumeration order.
    const std::vector<Entry>& support() const { return support_; }
    double at(const Vec3i& k) const;
    double l2_norm() const { return l2_norm_; }

private:
    int N_;
    double gamma_;
    std::vector<Entry> support_;
    double l2_norm_;
};

// Throws shell_truncated when the modes do not reach |k|_inf = 2N.
NoiseCoefficients theta_coefficients(int N, double gamma, const std::vector<LatticeMode>& modes);

// Multiplying a field by sigma_{k,alpha} = a_{k,alpha} e^{2 pi i k.x} shifts
// Fourier index l -> l + k with amplitude a_{k,alpha}.
struct SigmaAction {
    Vec3i shift;
    Vec3 amplitude;
};

SigmaAction sigma_action_offsets(const Lattice& lattice, const Vec3i& k, int alpha);

}  // namespace wzns
