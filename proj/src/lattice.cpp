#include "wzns/lattice.hpp"

#include <string>

#include "wzns/error.hpp"

namespace wzns {

bool is_plus(const Vec3i& k)
{
    for (int c : k) {
        if (c != 0) return c > 0;
    }
    return false;
}

LatticeMode make_mode(const Vec3i& k)
{
    if (k == Vec3i{0, 0, 0}) throw Error(ErrorCode::invalid_argument, "zero wave vector has no frame");

    LatticeMode mode;
    mode.k = k;
    mode.sign = is_plus(k) ? SignClass::plus : SignClass::minus;

    // The frame is built from the plus representative so a_{-k} = a_k.
    const Vec3i rep = mode.sign == SignClass::plus ? k : -k;
    const Vec3 kr = to_real(rep);
    const double kn = norm(kr);
    const Vec3 khat{kr[0] / kn, kr[1] / kn, kr[2] / kn};

    // Gram-Schmidt on the first standard basis vector not parallel to k.
    for (int i = 0; i < 3; ++i) {
        Vec3 e{0.0, 0.0, 0.0};
        e[i] = 1.0;
        if (norm(cross(e, kr)) == 0.0) continue;
        const double proj = dot(e, khat);
        Vec3 a{e[0] - proj * khat[0], e[1] - proj * khat[1], e[2] - proj * khat[2]};
        const double an = norm(a);
        mode.a1 = {a[0] / an, a[1] / an, a[2] / an};
        break;
    }
    mode.a2 = cross(khat, mode.a1);
    return mode;
}

std::vector<LatticeMode> enumerate_modes(int M)
{
    if (M < 1) throw Error(ErrorCode::invalid_truncation, "truncation radius M must be >= 1, got " + std::to_string(M));
    std::vector<LatticeMode> modes;
    const int side = 2 * M + 1;
    modes.reserve(std::size_t(side) * side * side - 1);
    for (int k1 = -M; k1 <= M; ++k1) {
        for (int k2 = -M; k2 <= M; ++k2) {
            for (int k3 = -M; k3 <= M; ++k3) {
                if (k1 == 0 && k2 == 0 && k3 == 0) continue;
                modes.push_back(make_mode({k1, k2, k3}));
            }
        }
    }
    return modes;
}

ModeCube::ModeCube(int M) : M_(M), side_(2 * M + 1)
{
    if (M < 1) throw Error(ErrorCode::invalid_truncation, "truncation radius M must be >= 1, got " + std::to_string(M));
}

Lattice::Lattice(int M) : cube_(M), modes_(enumerate_modes(M)), slot_(cube_.size(), -1)
{
    for (std::size_t i = 0; i < modes_.size(); ++i) slot_[cube_.index(modes_[i].k)] = int(i);
}

const LatticeMode* Lattice::find(const Vec3i& k) const
{
    if (!cube_.contains(k)) return nullptr;
    const int s = slot_[cube_.index(k)];
    return s < 0 ? nullptr : &modes_[std::size_t(s)];
}

NoiseCoefficients::NoiseCoefficients(int N, double gamma, std::vector<Entry> support)
    : N_(N), gamma_(gamma), support_(std::move(support)), l2_norm_(0.0)
{
    double sum = 0.0;
    for (const auto& e : support_) sum += e.theta * e.theta;
    l2_norm_ = std::sqrt(sum);
}

double NoiseCoefficients::at(const Vec3i& k) const
{
    const int r2 = norm2(k);
    if (r2 < N_ * N_ || r2 > 4 * N_ * N_) return 0.0;
    return std::pow(double(r2), -0.5 * gamma_);
}

NoiseCoefficients theta_coefficients(int N, double gamma, const std::vector<LatticeMode>& modes)
{
    if (N < 1) throw Error(ErrorCode::invalid_argument, "shell index N must be >= 1");
    if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "gamma must be > 0");
    int reach = 0;
    for (const auto& m : modes) reach = std::max(reach, max_norm(m.k));
    if (reach < 2 * N) {
        throw Error(ErrorCode::shell_truncated,
                    "mode truncation " + std::to_string(reach) + " does not cover the shell |k| <= 2N = " +
                        std::to_string(2 * N));
    }
    std::vector<NoiseCoefficients::Entry> support;
    for (const auto& m : modes) {
        const int r2 = norm2(m.k);
        if (r2 < N * N || r2 > 4 * N * N) continue;
        support.push_back({m.k, std::pow(double(r2), -0.5 * gamma)});
    }
    return NoiseCoefficients(N, gamma, std::move(support));
}

SigmaAction sigma_action_offsets(const Lattice& lattice, const Vec3i& k, int alpha)
{
    if (alpha != 1 && alpha != 2) throw Error(ErrorCode::invalid_argument, "frame index alpha must be 1 or 2");
    const LatticeMode* mode = lattice.find(k);
    if (mode == nullptr) {
        throw Error(ErrorCode::unknown_mode, "wave vector (" + std::to_string(k[0]) + "," + std::to_string(k[1]) +
                                                 "," + std::to_string(k[2]) + ") is not enumerated");
    }
    return {k, mode->frame(alpha)};
}

}  // namespace wzns
