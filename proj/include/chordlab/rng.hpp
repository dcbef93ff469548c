#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "chordlab/constants.hpp"
#include "chordlab/vec.hpp"

namespace chordlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a; stable stream tags across platforms.
inline std::uint64_t hashTag(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(a)) + b * 0xd1b54a32d192ed03ULL);
}

/// mt19937_64 with explicit transforms so streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// uniform on the open interval (0,1)
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double t = 2.0 * kPi * uniform();
    spare_ = r * std::sin(t);
    hasSpare_ = true;
    return r * std::cos(t);
  }

  Vec direction(int n) {
    Vec u(n);
    if (n == 1) {
      u[0] = (eng_() >> 63) ? 1.0 : -1.0;
    } else if (n == 2) {
      double t = 2.0 * kPi * uniform();
      u[0] = std::cos(t);
      u[1] = std::sin(t);
    } else if (n == 3) {
      double z = 2.0 * uniform() - 1.0;
      double t = 2.0 * kPi * uniform();
      double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      u[0] = s * std::cos(t);
      u[1] = s * std::sin(t);
      u[2] = z;
    } else {
      double r2 = 0.0;
      do {
        r2 = 0.0;
        for (int i = 0; i < n; ++i) {
          u[i] = normal();
          r2 += u[i] * u[i];
        }
      } while (r2 < 1e-300);
      u *= 1.0 / std::sqrt(r2);
    }
    return u;
  }

  /// uniform in the unit ball
  Vec inBall(int n) {
    Vec x(n);
    if (n <= 3) {
      for (;;) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
          x[i] = 2.0 * uniform() - 1.0;
          r2 += x[i] * x[i];
        }
        if (r2 <= 1.0) return x;
      }
    }
    x = direction(n);
    return x * std::pow(uniform(), 1.0 / n);
  }

private:
  std::mt19937_64 eng_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

struct AffineLine {
  Vec u;
  Vec base;  ///< base . u = 0
};

struct LineSample {
  AffineLine line;
  double weight = 0.0;
};

/// Haar line through the ball (center, R); weight is the dl-measure of all such lines.
inline LineSample sampleLine(double R, const Vec& center, Rng& rng) {
  int n = center.dim();
  Vec u = rng.direction(n);
  Vec base = along(center, -dot(center, u), u);
  if (n > 1) {
    Vec g(n);
    double gg = 0.0;
    do {
      for (int i = 0; i < n; ++i) g[i] = rng.normal();
      g = along(g, -dot(g, u), u);
      gg = dot(g, g);
    } while (gg < 1e-300);
    double rad = R * std::pow(rng.uniform(), 1.0 / (n - 1));
    base = along(base, rad / std::sqrt(gg), g);
    base = along(base, -dot(base, u), u);
  }
  double w = n == 1 ? 1.0 : omega(n - 1) * std::pow(R, n - 1);
  return {{u, base}, w};
}

}  // namespace chordlab
