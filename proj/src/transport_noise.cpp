#include "wzns/transport_noise.hpp"

#include "wzns/error.hpp"

namespace wzns {

TransportNoise::TransportNoise(const Lattice& lattice, const NoiseCoefficients& theta, double C_nu,
                               std::vector<RealIndex> labels)
    : M_(lattice.M()), scale_(C_nu / theta.l2_norm()), labels_(std::move(labels))
{
    const Complex i_unit(0.0, 1.0);
    for (const auto& lab : labels_) {
        const LatticeMode* mode = lattice.find(lab.k);
        if (mode == nullptr || (lab.alpha != 1 && lab.alpha != 2)) {
            throw Error(ErrorCode::unknown_mode, "noise label outside the enumerated lattice");
        }
        const Vec3& a = mode->frame(lab.alpha);
        const Vec3c ac{a[0], a[1], a[2]};
        std::array<SparseMode, 2> g;
        if (mode->sign == SignClass::plus) {
            g = {SparseMode{lab.k, ac}, SparseMode{-lab.k, ac}};
        } else {
            const Vec3i p = -lab.k;
            Vec3c ai{}, ami{};
            for (int d = 0; d < 3; ++d) {
                ai[d] = i_unit * a[d];
                ami[d] = -i_unit * a[d];
            }
            g = {SparseMode{p, ai}, SparseMode{lab.k, ami}};
        }
        generators_.push_back(g);
        theta_.push_back(theta.at(lab.k));
    }
}

SpectralField TransportNoise::field(std::span<const double> weights) const
{
    if (weights.size() != labels_.size()) throw Error(ErrorCode::configuration, "noise weight count mismatch");
    SpectralField v(M_);
    for (std::size_t j = 0; j < labels_.size(); ++j) {
        const double w = scale_ * theta_[j] * weights[j];
        if (w == 0.0) continue;
        for (const auto& g : generators_[j]) {
            Vec3c& c = v.at(g.k);
            for (int d = 0; d < 3; ++d) c[d] += w * g.amplitude[d];
        }
    }
    return v;
}

SpectralField TransportNoise::first_order(std::span<const double> increments, const SpectralField& phi) const
{
    return engine_for(M_).transport(field(increments), phi);
}

SpectralField TransportNoise::second_order(std::span<const double> ww, const SpectralField& phi) const
{
    const std::size_t m = labels_.size();
    if (ww.size() != m * m) throw Error(ErrorCode::configuration, "second-level size mismatch");
    PseudoSpectral& eng = engine_for(M_);
    eng.prepare_gradient(phi);
    SpectralField out(M_);
    std::vector<double> column(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (theta_[i] == 0.0) continue;
        bool any = false;
        for (std::size_t j = 0; j < m; ++j) {
            column[j] = ww[j * m + i];
            any = any || column[j] != 0.0;
        }
        if (!any) continue;
        const SpectralField inner_term = eng.transport_prepared(field(column));
        SpectralField outer = sparse_transport(generator(i), inner_term);
        out.axpy(scale_ * theta_[i], outer);
    }
    return out;
}

std::vector<Vec3i> shell_modes(const NoiseCoefficients& theta)
{
    std::vector<Vec3i> out;
    for (const auto& e : theta.support()) out.push_back(e.k);
    return out;
}

std::vector<RealIndex> shell_labels(const NoiseCoefficients& theta)
{
    std::vector<RealIndex> out;
    for (const auto& e : theta.support()) {
        out.push_back({e.k, 1});
        out.push_back({e.k, 2});
    }
    return out;
}

}  // namespace wzns
