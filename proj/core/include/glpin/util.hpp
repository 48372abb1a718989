#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace glpin {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return s * a; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline Vec3& operator+=(Vec3& a, Vec3 b) { a = a + b; return a; }
inline Vec3& operator-=(Vec3& a, Vec3 b) { a = a - b; return a; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(Vec3 a) { return dot(a, a); }
inline double norm(Vec3 a) { return std::sqrt(norm2(a)); }
inline Vec3 normalized(Vec3 a) { return a / norm(a); }

// Any unit vector orthogonal to t, chosen deterministically.
inline Vec3 any_orthogonal(Vec3 t) {
  Vec3 ref = std::abs(t.x) <= std::abs(t.y) && std::abs(t.x) <= std::abs(t.z)
                 ? Vec3{1, 0, 0}
                 : (std::abs(t.y) <= std::abs(t.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  return normalized(cross(t, ref));
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Single seeded generator shared by every randomized piece of a run.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed = 12345) : eng(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng);
  }
  int uniform_int(int a, int b) {  // inclusive
    return std::uniform_int_distribution<int>(a, b)(eng);
  }
  Vec3 unit_vector() {
    while (true) {
      Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      double n2 = norm2(v);
      if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
    }
  }
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}
inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline double clamp01(double v) { return v < 0 ? 0 : (v > 1 ? 1 : v); }

// Wrap an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  const double pi = 3.14159265358979323846;
  double w = std::remainder(a, 2 * pi);
  if (w <= -pi) w += 2 * pi;
  return w;
}

}  // namespace glpin
