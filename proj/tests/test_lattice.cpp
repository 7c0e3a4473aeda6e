#include <cmath>
#include <map>

#include "test_util.hpp"
#include "wzns/lattice.hpp"

using namespace wzns;

TEST(Lattice, CountsAndOrder)
{
    EXPECT_EQ(enumerate_modes(1).size(), 26u);
    const auto modes = enumerate_modes(3);
    EXPECT_EQ(modes.size(), 7u * 7u * 7u - 1u);
    for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LT(modes[i - 1].k, modes[i].k);
    EXPECT_WZNS_ERROR(enumerate_modes(0), ErrorCode::invalid_truncation);
}

TEST(Lattice, HandFrames)
{
    const LatticeMode a = make_mode({1, 0, 0});
    EXPECT_EQ(a.a1, (Vec3{0, 1, 0}));
    EXPECT_EQ(a.a2, (Vec3{0, 0, 1}));
    const LatticeMode b = make_mode({0, 1, 0});
    const Vec3 c = cross(b.a1, b.a2);
    EXPECT_NEAR(c[0], 0.0, 1e-15);
    EXPECT_NEAR(c[1], 1.0, 1e-15);
    EXPECT_NEAR(c[2], 0.0, 1e-15);
}

TEST(Lattice, FrameInvariantsAndPartition)
{
    const Lattice lat(4);
    for (const auto& m : lat.modes()) {
        const Vec3 k = to_real(m.k);
        EXPECT_NEAR(dot(m.a1, k), 0.0, 1e-12);
        EXPECT_NEAR(dot(m.a2, k), 0.0, 1e-12);
        EXPECT_NEAR(dot(m.a1, m.a1), 1.0, 1e-12);
        EXPECT_NEAR(dot(m.a2, m.a2), 1.0, 1e-12);
        EXPECT_NEAR(dot(m.a1, m.a2), 0.0, 1e-12);
        EXPECT_NE(is_plus(m.k), is_plus(-m.k));
        EXPECT_EQ(m.sign == SignClass::plus, is_plus(m.k));
        const LatticeMode* neg = lat.find(-m.k);
        ASSERT_NE(neg, nullptr);
        EXPECT_EQ(neg->a1, m.a1);
        EXPECT_EQ(neg->a2, m.a2);
        if (m.sign == SignClass::plus) {
            const Vec3 c = cross(m.a1, m.a2);
            const double n = norm(k);
            for (int d = 0; d < 3; ++d) EXPECT_NEAR(c[d], k[d] / n, 1e-12);
        }
    }
    EXPECT_EQ(lat.find({0, 0, 0}), nullptr);
    EXPECT_EQ(lat.find({5, 0, 0}), nullptr);
}

TEST(Lattice, ShellCoefficients)
{
    const auto theta = theta_coefficients(1, 1.0, enumerate_modes(2));
    EXPECT_EQ(theta.support().size(), 32u);
    std::map<int, int> counts;
    for (const auto& e : theta.support()) counts[norm2(e.k)]++;
    EXPECT_EQ(counts[1], 6);
    EXPECT_EQ(counts[2], 12);
    EXPECT_EQ(counts[3], 8);
    EXPECT_EQ(counts[4], 6);
    EXPECT_NEAR(theta.l2_norm() * theta.l2_norm(), 97.0 / 6.0, 1e-13);
    EXPECT_EQ(theta.at({3, 0, 0}), 0.0);
    EXPECT_EQ(theta.at({1, 0, 0}), 1.0);
    EXPECT_NEAR(theta.at({1, 1, 0}), 1.0 / std::sqrt(2.0), 1e-15);

    const auto steep = theta_coefficients(1, 40.0, enumerate_modes(2));
    EXPECT_EQ(steep.at({0, 0, 1}), 1.0);
    EXPECT_LT(steep.at({2, 0, 0}), 1e-11);

    EXPECT_WZNS_ERROR(theta_coefficients(1, 1.0, enumerate_modes(1)), ErrorCode::shell_truncated);
    EXPECT_WZNS_ERROR(theta_coefficients(2, 1.0, enumerate_modes(3)), ErrorCode::shell_truncated);
}

TEST(Lattice, SigmaAction)
{
    const Lattice lat(2);
    const SigmaAction a = sigma_action_offsets(lat, {1, 0, 0}, 1);
    EXPECT_EQ(a.shift, (Vec3i{1, 0, 0}));
    EXPECT_EQ(a.amplitude, (Vec3{0, 1, 0}));
    for (const auto& m : lat.modes()) {
        for (int alpha = 1; alpha <= 2; ++alpha) {
            const SigmaAction s = sigma_action_offsets(lat, m.k, alpha);
            const SigmaAction t = sigma_action_offsets(lat, -m.k, alpha);
            EXPECT_NEAR(dot(s.amplitude, to_real(m.k)), 0.0, 1e-12);
            EXPECT_EQ(s.amplitude, t.amplitude);
        }
    }
    EXPECT_WZNS_ERROR(sigma_action_offsets(lat, {3, 0, 0}, 1), ErrorCode::unknown_mode);
    EXPECT_WZNS_ERROR(sigma_action_offsets(lat, {1, 0, 0}, 3), ErrorCode::invalid_argument);
}
