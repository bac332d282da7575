#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "quasibell/errors.hpp"

namespace quasibell {

inline constexpr double pi = 3.14159265358979323846;

/// Real 3-vector. Used both for unit measurement axes and for general-norm
/// vectors such as Bloch vectors and symmetrized product vectors.
struct Direction {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Direction() = default;
  constexpr Direction(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }

  bool is_unit(double tol = 1e-9) const { return std::abs(norm() - 1.0) <= tol; }

  Direction normalized() const {
    const double n = norm();
    if (n == 0.0) return {};
    return {x / n, y / n, z / n};
  }

  Direction operator+(const Direction& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Direction operator-(const Direction& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Direction operator-() const { return {-x, -y, -z}; }
  Direction operator*(double s) const { return {x * s, y * s, z * s}; }
  Direction& operator+=(const Direction& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Direction operator*(double s, const Direction& d) { return d * s; }

inline double dot(const Direction& a, const Direction& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Direction cross(const Direction& a, const Direction& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double distance(const Direction& a, const Direction& b) { return (a - b).norm(); }

inline void require_unit(const Direction& d, const std::string& what, double tol = 1e-9) {
  if (!d.is_unit(tol))
    throw NonUnitDirection(what + ": |d| = " + std::to_string(d.norm()) + " is not 1");
}

inline void require_in_ball(const Direction& u, double tol = 1e-9) {
  if (u.norm() > 1.0 + tol)
    throw BlochOutOfBall("Bloch vector norm " + std::to_string(u.norm()) + " exceeds 1");
}

constexpr Direction x_axis() { return {1.0, 0.0, 0.0}; }
constexpr Direction y_axis() { return {0.0, 1.0, 0.0}; }
constexpr Direction z_axis() { return {0.0, 0.0, 1.0}; }

/// Real 3x3 matrix (correlation matrices, scatter matrices, rotations).
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 zero() { return {}; }
  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }
  static Mat3 scaled_identity(double s) {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = s;
    return r;
  }

  double& operator()(int r, int c) { return m[r][c]; }
  double operator()(int r, int c) const { return m[r][c]; }

  Direction apply(const Direction& d) const {
    return {m[0][0] * d.x + m[0][1] * d.y + m[0][2] * d.z,
            m[1][0] * d.x + m[1][1] * d.y + m[1][2] * d.z,
            m[2][0] * d.x + m[2][1] * d.y + m[2][2] * d.z};
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
};

// a^T R b
inline double bilinear(const Direction& a, const Mat3& r, const Direction& b) {
  return dot(a, r.apply(b));
}

/// Polar/azimuth pair; the induced direction is unit-norm by construction.
struct Spherical {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2*pi)
};

inline Direction direction_from_spherical(const Spherical& s) {
  const double st = std::sin(s.theta);
  return {st * std::cos(s.phi), st * std::sin(s.phi), std::cos(s.theta)};
}

inline Spherical spherical_from_direction(const Direction& d) {
  const Direction n = d.normalized();
  Spherical s;
  s.theta = std::acos(std::clamp(n.z, -1.0, 1.0));
  s.phi = std::atan2(n.y, n.x);
  if (s.phi < 0.0) s.phi += 2.0 * pi;
  return s;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// splitmix64 step; used to derive independent per-worker seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Uniform direction on the unit sphere (normalized Gaussian triple).
inline Direction random_unit_direction(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Direction d{g(rng), g(rng), g(rng)};
  while (d.norm() < 1e-12) d = Direction{g(rng), g(rng), g(rng)};
  return d.normalized();
}

/// Uniform point in the closed unit ball.
inline Direction random_ball_vector(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return random_unit_direction(rng) * std::cbrt(u(rng));
}

inline double random_in(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

}  // namespace quasibell
