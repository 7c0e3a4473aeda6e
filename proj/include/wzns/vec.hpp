#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace wzns {

using Vec3i = std::array<int, 3>;
using Vec3 = std::array<double, 3>;
using Complex = std::complex<double>;
using Vec3c = std::array<Complex, 3>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

constexpr Vec3i operator-(const Vec3i& k) { return {-k[0], -k[1], -k[2]}; }
constexpr Vec3i operator+(const Vec3i& a, const Vec3i& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

constexpr int norm2(const Vec3i& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

constexpr int max_norm(const Vec3i& k)
{
    int m = 0;
    for (int c : k) m = std::max(m, c < 0 ? -c : c);
    return m;
}

inline Vec3 to_real(const Vec3i& k)
{
    return {double(k[0]), double(k[1]), double(k[2])};
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// k . v for a real wave vector and a complex amplitude.
inline Complex dot(const Vec3& k, const Vec3c& v) { return k[0] * v[0] + k[1] * v[1] + k[2] * v[2]; }

inline Vec3c cross(const Vec3& k, const Vec3c& v)
{
    return {k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]};
}

// Hermitian inner product, conjugate-linear in the second slot.
inline Complex hdot(const Vec3c& a, const Vec3c& b)
{
    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

inline double norm2(const Vec3c& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }

}  // namespace wzns
