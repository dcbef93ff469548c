#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace chordlab {

inline constexpr int kMaxDim = 8;

/// Small fixed-capacity vector; dimension chosen at runtime.
class Vec {
public:
  Vec() = default;
  explicit Vec(int n, double fill = 0.0) : n_(n) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("dimension out of range [1,8]");
    c_.fill(0.0);
    for (int i = 0; i < n; ++i) c_[i] = fill;
  }
  Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) c_[i++] = x;
  }
  static Vec from(const std::vector<double>& xs) {
    Vec v(static_cast<int>(xs.size()));
    for (int i = 0; i < v.n_; ++i) v.c_[i] = xs[i];
    return v;
  }
  static Vec unit(int n, int axis) {
    Vec v(n);
    v[axis] = 1.0;
    return v;
  }

  int dim() const { return n_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  std::vector<double> toStd() const { return {c_.begin(), c_.begin() + n_}; }

  Vec& operator+=(const Vec& o) { for (int i = 0; i < n_; ++i) c_[i] += o.c_[i]; return *this; }
  Vec& operator-=(const Vec& o) { for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i]; return *this; }
  Vec& operator*=(double s) { for (int i = 0; i < n_; ++i) c_[i] *= s; return *this; }

private:
  std::array<double, kMaxDim> c_{};
  int n_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// a + t*u without temporaries
inline Vec along(const Vec& a, double t, const Vec& u) {
  Vec r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] += t * u[i];
  return r;
}

inline void requireDim(const Vec& x, int n) {
  if (x.dim() != n) throw std::invalid_argument("dimension mismatch");
}

}  // namespace chordlab
