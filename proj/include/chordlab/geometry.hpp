#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "chordlab/constants.hpp"
#include "chordlab/estimate.hpp"
#include "chordlab/rng.hpp"
#include "chordlab/vec.hpp"

namespace chordlab {

inline constexpr double kBoundarySlack = 1e-12;

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Box {
  Vec center;
  Vec half;
};

/// Local coordinates y = Q (x - center); the body is sum (y_i/a_i)^2 <= 1.
struct Ellipsoid {
  Vec center;
  Vec semiaxes;
  std::vector<double> rotation;  ///< row-major n*n, empty = identity
};

struct Halfspace {
  Vec normal;  ///< unit after construction
  double offset = 0.0;
};

struct Polytope {
  std::vector<Halfspace> halfspaces;
  std::vector<Vec> vertices;
};

using Shape = std::variant<Ball, Box, Ellipsoid, Polytope>;

namespace detail {

inline Vec applyRows(const std::vector<double>& q, const Vec& x) {
  if (q.empty()) return x;
  int n = x.dim();
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += q[i * n + j] * x[j];
    y[i] = s;
  }
  return y;
}

inline Vec applyRowsT(const std::vector<double>& q, const Vec& y) {
  if (q.empty()) return y;
  int n = y.dim();
  Vec x(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += q[i * n + j] * y[i];
    x[j] = s;
  }
  return x;
}

/// int_a^{pi/2} cos^n
inline double cosPowerTail(int n, double a) {
  if (n == 0) return 0.5 * kPi - a;
  if (n == 1) return 1.0 - std::sin(a);
  return -std::pow(std::cos(a), n - 1) * std::sin(a) / n + (n - 1.0) / n * cosPowerTail(n - 2, a);
}

/// |B(0,r) ∩ (B(0,r)+z)| with |z| = d
inline double ballLens(int n, double r, double d) {
  if (d >= 2.0 * r) return 0.0;
  double a = std::asin(std::clamp(d / (2.0 * r), 0.0, 1.0));
  double w = n == 1 ? 1.0 : omega(n - 1);
  return 2.0 * w * std::pow(r, n) * cosPowerTail(n, a);
}

/// Solve a x = b for an n x n system; nullopt when near singular.
inline std::optional<Vec> solve(std::vector<double> a, Vec b) {
  int n = b.dim();
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (std::abs(a[p * n + c]) < 1e-11) return std::nullopt;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      std::swap(b[p], b[c]);
    }
    for (int r = c + 1; r < n; ++r) {
      double f = a[r * n + c] / a[c * n + c];
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a[r * n + j] * x[j];
    x[r] = s / a[r * n + r];
  }
  return x;
}

/// Vertices of {a_i . x <= b_i}: every feasible intersection of n hyperplanes.
inline std::vector<Vec> enumerateVertices(const std::vector<Halfspace>& hs, int n) {
  std::vector<Vec> out;
  int m = static_cast<int>(hs.size());
  if (m < n) return out;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<double> a(n * n);
    Vec b(n);
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) a[r * n + j] = hs[idx[r]].normal[j];
      b[r] = hs[idx[r]].offset;
    }
    if (auto x = solve(a, b)) {
      bool ok = true;
      for (const auto& h : hs)
        if (dot(h.normal, *x) > h.offset + 1e-9 * (1.0 + std::abs(h.offset))) {
          ok = false;
          break;
        }
      if (ok) {
        bool dup = false;
        for (const auto& v : out)
          if (norm(v - *x) < 1e-9 * (1.0 + norm(v))) {
            dup = true;
            break;
          }
        if (!dup) out.push_back(*x);
      }
    }
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Area of a planar convex polygon given by unordered points in 2-D coordinates.
inline std::pair<double, double> polygonAreaPerimeter(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 3) return {0.0, 0.0};
  double cx = 0.0, cy = 0.0;
  for (auto& [x, y] : pts) {
    cx += x;
    cy += y;
  }
  cx /= pts.size();
  cy /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](auto& p, auto& q) {
    return std::atan2(p.second - cy, p.first - cx) < std::atan2(q.second - cy, q.first - cx);
  });
  double area = 0.0, per = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& p = pts[i];
    auto& q = pts[(i + 1) % pts.size()];
    area += p.first * q.second - q.first * p.second;
    per += std::hypot(q.first - p.first, q.second - p.second);
  }
  return {0.5 * std::abs(area), per};
}

}  // namespace detail

/// Immutable catalog convex body with cached volume, surface area and bounding ball.
class ConvexBody {
public:
  static ConvexBody ball(const Vec& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    ConvexBody k(Ball{center, radius}, center.dim());
    k.center_ = center;
    k.R_ = radius;
    int n = k.n_;
    k.volume_ = omega(n) * std::pow(radius, n);
    k.surface_ = n * omega(n) * std::pow(radius, n - 1);
    return k;
  }

  static ConvexBody box(const Vec& center, const Vec& half) {
    requireDim(half, center.dim());
    int n = center.dim();
    for (int i = 0; i < n; ++i)
      if (!(half[i] > 0.0)) throw std::invalid_argument("box halfwidths must be positive");
    ConvexBody k(Box{center, half}, n);
    k.center_ = center;
    k.R_ = norm(half);
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= 2.0 * half[i];
    k.volume_ = v;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += 2.0 * v / (2.0 * half[i]);
    k.surface_ = n == 1 ? 2.0 : s;
    return k;
  }

  static ConvexBody ellipsoid(const Vec& center, const Vec& semiaxes, std::vector<double> rotation = {}) {
    int n = center.dim();
    requireDim(semiaxes, n);
    for (int i = 0; i < n; ++i)
      if (!(semiaxes[i] > 0.0)) throw std::invalid_argument("ellipsoid semiaxes must be positive");
    if (!rotation.empty()) {
      if (static_cast<int>(rotation.size()) != n * n) throw std::invalid_argument("rotation must be n*n");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += rotation[i * n + l] * rotation[j * n + l];
          if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-9) throw std::invalid_argument("rotation must be orthogonal");
        }
    }
    ConvexBody k(Ellipsoid{center, semiaxes, std::move(rotation)}, n);
    k.center_ = center;
    double amax = 0.0, prod = 1.0;
    for (int i = 0; i < n; ++i) {
      amax = std::max(amax, semiaxes[i]);
      prod *= semiaxes[i];
    }
    k.R_ = amax;
    k.volume_ = omega(n) * prod;
    k.initEllipsoidSurface();
    return k;
  }

  static ConvexBody polytope(std::vector<Halfspace> hs) {
    if (hs.empty()) throw std::invalid_argument("polytope needs halfspaces");
    int n = hs.front().normal.dim();
    for (auto& h : hs) {
      requireDim(h.normal, n);
      double l = norm(h.normal);
      if (!(l > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
      h.normal *= 1.0 / l;
      h.offset /= l;
    }
    auto verts = detail::enumerateVertices(hs, n);
    if (static_cast<int>(verts.size()) < n + 1) throw std::invalid_argument("polytope is unbounded or has empty interior");
    Vec c(n);
    for (const auto& v : verts) c += v;
    c *= 1.0 / static_cast<double>(verts.size());
    double R = 0.0;
    for (const auto& v : verts) R = std::max(R, norm(v - c));
    double inner = kInf;
    for (const auto& h : hs) inner = std::min(inner, h.offset - dot(h.normal, c));
    if (!(inner > 1e-9 * R)) throw std::invalid_argument("polytope has empty interior");
    ConvexBody k(Polytope{hs, verts}, n);
    k.center_ = c;
    k.R_ = R * (1.0 + 1e-12);
    k.checkBounded();
    k.initPolytopeMeasures();
    return k;
  }

  int dim() const { return n_; }
  const Shape& shape() const { return shape_; }
  const char* kind() const {
    static const char* names[] = {"ball", "box", "ellipsoid", "polytope"};
    return names[shape_.index()];
  }
  double volume() const { return volume_; }
  Estimate volumeEstimate() const { return {volume_, volumeSe_, 0, kInf}; }
  double surfaceArea() const { return surface_; }
  Estimate surfaceEstimate() const { return {surface_, surfaceSe_, 0, kInf}; }
  bool surfaceExact() const { return surfaceSe_ == 0.0; }
  double boundingRadius() const { return R_; }
  const Vec& boundingCenter() const { return center_; }
  bool isBall() const { return std::holds_alternative<Ball>(shape_); }

  /// Parameter interval of {p + t u} ∩ K.
  std::optional<std::pair<double, double>> clip(const Vec& p, const Vec& u) const {
    return std::visit([&](const auto& s) { return clipShape(s, p, u); }, shape_);
  }

  bool contains(const Vec& x) const {
    requireDim(x, n_);
    double tol = kBoundarySlack * std::max(1.0, R_);
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return norm(x - s.center) <= s.radius + tol;
          } else if constexpr (std::is_same_v<T, Box>) {
            for (int i = 0; i < n_; ++i)
              if (std::abs(x[i] - s.center[i]) > s.half[i] + tol) return false;
            return true;
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            Vec y = detail::applyRows(s.rotation, x - s.center);
            double q = 0.0;
            for (int i = 0; i < n_; ++i) q += (y[i] / s.semiaxes[i]) * (y[i] / s.semiaxes[i]);
            return q <= 1.0 + 2.0 * kBoundarySlack;
          } else {
            for (const auto& h : s.halfspaces)
              if (dot(h.normal, x) > h.offset + tol) return false;
            return true;
          }
        },
        shape_);
  }

  double chordLength(const AffineLine& l) const {
    auto iv = clip(l.base, l.u);
    return iv ? std::max(0.0, iv->second - iv->first) : 0.0;
  }

  /// rho_{K-x}(u)
  double radial(const Vec& x, const Vec& u) const {
    if (!contains(x)) throw std::invalid_argument("radial: point outside body");
    auto iv = clip(x, u);
    return iv ? std::max(0.0, iv->second) : 0.0;
  }

  Vec samplePoint(Rng& rng) const {
    for (long tries = 0; tries < 1000000; ++tries) {
      Vec x = along(center_, R_, rng.inBall(n_));
      if (contains(x)) return x;
    }
    throw std::runtime_error("samplePointIn: 10^6 consecutive rejections, bounding data degenerate");
  }

  /// {x : lambda x ∈ K} = K / lambda
  ConvexBody scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
    double s = 1.0 / lambda;
    return std::visit(
        [&](const auto& sh) -> ConvexBody {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, Ball>) return ball(sh.center * s, sh.radius * s);
          else if constexpr (std::is_same_v<T, Box>) return box(sh.center * s, sh.half * s);
          else if constexpr (std::is_same_v<T, Ellipsoid>) return ellipsoid(sh.center * s, sh.semiaxes * s, sh.rotation);
          else {
            auto hs = sh.halfspaces;
            for (auto& h : hs) h.offset *= s;
            return polytope(hs);
          }
        },
        shape_);
  }

  ConvexBody dilated(double lambda) const { return scaled(1.0 / lambda); }

  ConvexBody translated(const Vec& z) const {
    requireDim(z, n_);
    return std::visit(
        [&](const auto& sh) -> ConvexBody {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, Ball>) return ball(sh.center + z, sh.radius);
          else if constexpr (std::is_same_v<T, Box>) return box(sh.center + z, sh.half);
          else if constexpr (std::is_same_v<T, Ellipsoid>) return ellipsoid(sh.center + z, sh.semiaxes, sh.rotation);
          else {
            auto hs = sh.halfspaces;
            for (auto& h : hs) h.offset += dot(h.normal, z);
            return polytope(hs);
          }
        },
        shape_);
  }

  /// Exact |K ∩ (K+z)| where a closed form exists (Ball, Box, Ellipsoid by affine image of the ball).
  std::optional<double> covariogramExact(const Vec& z) const {
    requireDim(z, n_);
    return std::visit(
        [&](const auto& s) -> std::optional<double> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return detail::ballLens(n_, s.radius, norm(z));
          } else if constexpr (std::is_same_v<T, Box>) {
            double v = 1.0;
            for (int i = 0; i < n_; ++i) v *= std::max(0.0, 2.0 * s.half[i] - std::abs(z[i]));
            return v;
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            Vec y = detail::applyRows(s.rotation, z);
            double prod = 1.0;
            for (int i = 0; i < n_; ++i) {
              y[i] /= s.semiaxes[i];
              prod *= s.semiaxes[i];
            }
            return prod * detail::ballLens(n_, 1.0, norm(y));
          } else {
            return std::nullopt;
          }
        },
        shape_);
  }

  /// Monte Carlo |K ∩ (K+z)| over the bounding ball; any variant.
  Estimate covariogramMC(const Vec& z, const Budget& budget) const {
    double vb = omega(n_) * std::pow(R_, n_);
    return monteCarlo(
        budget,
        [&](Rng& rng) {
          Vec x = along(center_, R_, rng.inBall(n_));
          return (contains(x) && contains(x - z)) ? 1.0 : 0.0;
        },
        vb);
  }

  Estimate covariogram(const Vec& z, const Budget& budget) const {
    if (auto c = covariogramExact(z)) return Estimate::exact(*c);
    return covariogramMC(z, budget);
  }

  nlohmann::ordered_json toJson() const {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            j["type"] = "ball";
            j["center"] = s.center.toStd();
            j["radius"] = s.radius;
          } else if constexpr (std::is_same_v<T, Box>) {
            j["type"] = "box";
            j["center"] = s.center.toStd();
            j["halfwidths"] = s.half.toStd();
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            j["type"] = "ellipsoid";
            j["center"] = s.center.toStd();
            j["semiaxes"] = s.semiaxes.toStd();
            if (!s.rotation.empty()) j["rotation"] = s.rotation;
          } else {
            j["type"] = "polytope";
            auto arr = nlohmann::ordered_json::array();
            for (const auto& h : s.halfspaces) {
              nlohmann::ordered_json hj;
              hj["normal"] = h.normal.toStd();
              hj["offset"] = h.offset;
              arr.push_back(hj);
            }
            j["halfspaces"] = arr;
          }
        },
        shape_);
    return j;
  }

private:
  ConvexBody(Shape s, int n) : shape_(std::move(s)), n_(n), center_(n) {}

  std::optional<std::pair<double, double>> clipShape(const Ball& b, const Vec& p, const Vec& u) const {
    Vec w = p - b.center;
    double bu = dot(w, u);
    double disc = bu * bu - (dot(w, w) - b.radius * b.radius);
    if (disc < 0.0) return std::nullopt;
    double s = std::sqrt(disc);
    return std::make_pair(-bu - s, -bu + s);
  }

  std::optional<std::pair<double, double>> clipShape(const Box& b, const Vec& p, const Vec& u) const {
    double lo = -kInf, hi = kInf;
    for (int i = 0; i < n_; ++i) {
      double d = p[i] - b.center[i];
      if (u[i] == 0.0) {
        if (std::abs(d) > b.half[i]) return std::nullopt;
        continue;
      }
      double t1 = (-b.half[i] - d) / u[i], t2 = (b.half[i] - d) / u[i];
      lo = std::max(lo, std::min(t1, t2));
      hi = std::min(hi, std::max(t1, t2));
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  }

  std::optional<std::pair<double, double>> clipShape(const Ellipsoid& e, const Vec& p, const Vec& u) const {
    Vec q = detail::applyRows(e.rotation, p - e.center);
    Vec v = detail::applyRows(e.rotation, u);
    double A = 0.0, B = 0.0, C = -1.0;
    for (int i = 0; i < n_; ++i) {
      double ia2 = 1.0 / (e.semiaxes[i] * e.semiaxes[i]);
      A += v[i] * v[i] * ia2;
      B += q[i] * v[i] * ia2;
      C += q[i] * q[i] * ia2;
    }
    double disc = B * B - A * C;
    if (disc < 0.0) return std::nullopt;
    double s = std::sqrt(disc);
    double r = -B - std::copysign(s, B);
    double t1, t2;
    if (r == 0.0) {
      t1 = t2 = 0.0;
    } else {
      t1 = r / A;
      t2 = C / r;
    }
    return std::make_pair(std::min(t1, t2), std::max(t1, t2));
  }

  std::optional<std::pair<double, double>> clipShape(const Polytope& P, const Vec& p, const Vec& u) const {
    double lo = -kInf, hi = kInf;
    for (const auto& h : P.halfspaces) {
      double s = dot(h.normal, u);
      double d = h.offset - dot(h.normal, p);
      if (std::abs(s) < 1e-15) {
        if (d < 0.0) return std::nullopt;
        continue;
      }
      if (s > 0.0) hi = std::min(hi, d / s);
      else lo = std::max(lo, d / s);
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  }

  void initEllipsoidSurface() {
    const auto& e = std::get<Ellipsoid>(shape_);
    if (n_ == 1) {
      surface_ = 2.0;
    } else if (n_ == 2) {
      double a = e.semiaxes[0], b = e.semiaxes[1];
      double s = 0.0;
      constexpr int panels = 16;
      for (int p = 0; p < panels; ++p) {
        double lo = 2.0 * kPi * p / panels, hi = 2.0 * kPi * (p + 1) / panels;
        s += boost::math::quadrature::gauss<double, 30>::integrate(
            [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); }, lo, hi);
      }
      surface_ = s;
    } else if (n_ == 3) {
      double a = e.semiaxes[0], b = e.semiaxes[1], c = e.semiaxes[2];
      auto inner = [&](double th) {
        double st = std::sin(th), ct = std::cos(th);
        double s = 0.0;
        constexpr int panels = 16;
        for (int p = 0; p < panels; ++p) {
          double lo = 2.0 * kPi * p / panels, hi = 2.0 * kPi * (p + 1) / panels;
          s += boost::math::quadrature::gauss<double, 20>::integrate(
              [&](double ph) {
                double cp = std::cos(ph), sp = std::sin(ph);
                return st * std::sqrt(b * b * c * c * st * st * cp * cp + a * a * c * c * st * st * sp * sp +
                                      a * a * b * b * ct * ct);
              },
              lo, hi);
        }
        return s;
      };
      double s = 0.0;
      constexpr int panels = 16;
      for (int p = 0; p < panels; ++p)
        s += boost::math::quadrature::gauss<double, 20>::integrate(inner, kPi * p / panels, kPi * (p + 1) / panels);
      surface_ = s;
    } else {
      cauchySurface();
    }
  }

  void initPolytopeMeasures() {
    const auto& P = std::get<Polytope>(shape_);
    if (n_ == 1) {
      double lo = -kInf, hi = kInf;
      for (const auto& h : P.halfspaces) {
        if (h.normal[0] > 0) hi = std::min(hi, h.offset / h.normal[0]);
        else lo = std::max(lo, h.offset / h.normal[0]);
      }
      volume_ = hi - lo;
      surface_ = 2.0;
    } else if (n_ == 2) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& v : P.vertices) pts.emplace_back(v[0], v[1]);
      auto [a, per] = detail::polygonAreaPerimeter(pts);
      volume_ = a;
      surface_ = per;
    } else if (n_ == 3) {
      double vol = 0.0, area = 0.0;
      for (const auto& h : P.halfspaces) {
        std::vector<Vec> face;
        for (const auto& v : P.vertices)
          if (std::abs(dot(h.normal, v) - h.offset) < 1e-9 * (1.0 + std::abs(h.offset))) face.push_back(v);
        if (face.size() < 3) continue;
        // orthonormal basis of the facet plane
        Vec e1 = face[1] - face[0];
        e1 *= 1.0 / norm(e1);
        Vec e2(3);
        e2[0] = h.normal[1] * e1[2] - h.normal[2] * e1[1];
        e2[1] = h.normal[2] * e1[0] - h.normal[0] * e1[2];
        e2[2] = h.normal[0] * e1[1] - h.normal[1] * e1[0];
        std::vector<std::pair<double, double>> pts;
        for (const auto& v : face) pts.emplace_back(dot(v, e1), dot(v, e2));
        double a = detail::polygonAreaPerimeter(pts).first;
        area += a;
        vol += a * (h.offset - dot(h.normal, center_)) / 3.0;
      }
      volume_ = vol;
      surface_ = area;
    } else {
      constexpr std::uint64_t kSamples = 400000;
      Budget b{kSamples, 0x9017ULL, 1};
      double vb = omega(n_) * std::pow(R_, n_);
      Estimate v = monteCarlo(b, [&](Rng& rng) { return contains(along(center_, R_, rng.inBall(n_))) ? 1.0 : 0.0; }, vb);
      volume_ = v.value;
      volumeSe_ = v.stdError;
      cauchySurface();
    }
    if (!(volume_ > 0.0)) throw std::invalid_argument("polytope has empty interior");
  }

  /// S = n omega_n / omega_{n-1} * (measure of lines hitting K)
  void cauchySurface() {
    constexpr std::uint64_t kSamples = 400000;
    Budget b{kSamples, 0xca0c4ULL, 1};
    double w = omega(n_ - 1) * std::pow(R_, n_ - 1);
    Estimate hit = monteCarlo(
        b,
        [&](Rng& rng) {
          auto ls = sampleLine(R_, center_, rng);
          return chordLength(ls.line) > 0.0 ? 1.0 : 0.0;
        },
        w);
    double f = n_ * omega(n_) / omega(n_ - 1);
    surface_ = f * hit.value;
    surfaceSe_ = f * hit.stdError;
  }

  /// Ray escape plus membership sampling; throws for unbounded halfspace systems.
  void checkBounded() const {
    const auto& P = std::get<Polytope>(shape_);
    auto escapes = [&](const Vec& d) {
      for (const auto& h : P.halfspaces)
        if (dot(h.normal, d) > 1e-9) return false;
      return true;
    };
    for (int i = 0; i < n_; ++i) {
      if (escapes(Vec::unit(n_, i)) || escapes(-Vec::unit(n_, i))) throw std::invalid_argument("polytope is unbounded");
    }
    for (const auto& h : P.halfspaces)
      if (escapes(-h.normal)) throw std::invalid_argument("polytope is unbounded");
    Rng rng(0xb0dedULL);
    for (int k = 0; k < 4000; ++k) {
      Vec d = rng.direction(n_);
      if (escapes(d)) throw std::invalid_argument("polytope is unbounded");
      Vec x = along(center_, 4.0 * R_, rng.inBall(n_));
      if (norm(x - center_) > R_ * (1.0 + 1e-9) && contains(x)) throw std::invalid_argument("polytope is unbounded");
    }
  }

  Shape shape_;
  int n_;
  Vec center_;
  double R_ = 0.0;
  double volume_ = 0.0, volumeSe_ = 0.0;
  double surface_ = 0.0, surfaceSe_ = 0.0;
};

inline bool contains(const ConvexBody& K, const Vec& x) { return K.contains(x); }
inline double chordLength(const ConvexBody& K, const AffineLine& l) { return K.chordLength(l); }
inline double radial(const ConvexBody& K, const Vec& x, const Vec& u) { return K.radial(x, u); }
inline Vec samplePointIn(const ConvexBody& K, Rng& rng) { return K.samplePoint(rng); }

/// Unit vector; throws on zero input.
inline Vec makeDirection(const Vec& v) {
  double l = norm(v);
  if (!(l > 0.0)) throw std::invalid_argument("direction must be nonzero");
  return v * (1.0 / l);
}

inline Vec jsonVec(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw std::invalid_argument(std::string("shape spec: missing array '") + key + "'");
  auto xs = j.at(key).get<std::vector<double>>();
  if (xs.empty() || static_cast<int>(xs.size()) > kMaxDim) throw std::invalid_argument(std::string("shape spec: bad length for '") + key + "'");
  return Vec::from(xs);
}

inline ConvexBody parseShape(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("shape spec: missing 'type'");
  auto type = j.at("type").get<std::string>();
  if (type == "ball") {
    return ConvexBody::ball(jsonVec(j, "center"), j.at("radius").get<double>());
  } else if (type == "box") {
    return ConvexBody::box(jsonVec(j, "center"), jsonVec(j, "halfwidths"));
  } else if (type == "ellipsoid") {
    std::vector<double> rot;
    if (j.contains("rotation")) {
      const auto& r = j.at("rotation");
      for (const auto& row : r) {
        if (row.is_array()) for (const auto& x : row) rot.push_back(x.get<double>());
        else rot.push_back(row.get<double>());
      }
    }
    return ConvexBody::ellipsoid(jsonVec(j, "center"), jsonVec(j, "semiaxes"), rot);
  } else if (type == "polytope") {
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("halfspaces")) hs.push_back({jsonVec(h, "normal"), h.at("offset").get<double>()});
    return ConvexBody::polytope(std::move(hs));
  }
  throw std::invalid_argument("shape spec: unknown type '" + type + "'");
}

}  // namespace chordlab
