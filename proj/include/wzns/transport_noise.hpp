#pragma once

#include <span>
#include <vector>

#include "wzns/lattice.hpp"
#include "wzns/noise.hpp"
#include "wzns/spectral.hpp"

namespace wzns {

// The transport perturbation written over real Brownian indices:
//   sum_{k,a} theta_k sigma_{k,a} dW^{k,a} = sum_j theta_j G_j dB^j,
// with G_{(k,a)} = sigma_{k,a} + sigma_{-k,a} and
// G_{(-k,a)} = i sigma_{k,a} - i sigma_{-k,a} for k plus. Each generator
// is real and divergence-free with two Fourier modes.
class TransportNoise {
public:
    // One generator per label; theta is looked up per wave vector (zero off
    // the shell). scale is C_nu / ||theta||.
    TransportNoise(const Lattice& lattice, const NoiseCoefficients& theta, double C_nu,
                   std::vector<RealIndex> labels);

    int M() const { return M_; }
    double scale() const { return scale_; }
    const std::vector<RealIndex>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    double theta(std::size_t j) const { return theta_[j]; }
    std::span<const SparseMode> generator(std::size_t j) const { return {generators_[j].data(), 2}; }

    // v = scale * sum_j theta_j w_j G_j
    SpectralField field(std::span<const double> weights) const;

    // A^1 phi = Pi(field(Z) . grad phi)
    SpectralField first_order(std::span<const double> increments, const SpectralField& phi) const;

    // A^2 phi = scale^2 sum_{i,j} theta_i theta_j Pi(G_i . grad Pi(G_j . grad phi)) WW[j][i],
    // with WW row-major (WW[j * size + i] = int dB^j dB^i).
    SpectralField second_order(std::span<const double> second_level, const SpectralField& phi) const;

private:
    int M_;
    double scale_;
    std::vector<RealIndex> labels_;
    std::vector<double> theta_;
    std::vector<std::array<SparseMode, 2>> generators_;
};

// Shell support of theta with both signs, alpha = 1, 2, in enumeration order.
std::vector<RealIndex> shell_labels(const NoiseCoefficients& theta);
std::vector<Vec3i> shell_modes(const NoiseCoefficients& theta);

}  // namespace wzns
