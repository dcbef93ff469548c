#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "chordlab/constants.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/rng.hpp"
#include "chordlab/vec.hpp"

namespace chordlab {

struct IndicatorFn {
  double c = 1.0;
  ConvexBody K;
};

/// c exp(-|x-mu|^2 / (2 s^2))
struct GaussianFn {
  double c = 1.0;
  Vec mu;
  double s = 1.0;
};

/// c exp(-a |x-mu|)
struct ExponentialFn {
  double c = 1.0;
  double a = 1.0;
  Vec mu;
};

/// Log-concave catalog function with analytic superlevel sets.
class LogConcaveFn {
public:
  using Variant = std::variant<IndicatorFn, GaussianFn, ExponentialFn>;

  static LogConcaveFn indicator(double c, ConvexBody K) {
    if (!(c > 0.0)) throw std::invalid_argument("indicator scale must be positive");
    int n = K.dim();
    return LogConcaveFn(IndicatorFn{c, std::move(K)}, n);
  }
  static LogConcaveFn gaussian(double c, const Vec& mu, double s) {
    if (!(c > 0.0) || !(s > 0.0)) throw std::invalid_argument("gaussian scale and width must be positive");
    return LogConcaveFn(GaussianFn{c, mu, s}, mu.dim());
  }
  static LogConcaveFn exponential(double c, double a, const Vec& mu) {
    if (!(c > 0.0) || !(a > 0.0)) throw std::invalid_argument("exponential scale and rate must be positive");
    return LogConcaveFn(ExponentialFn{c, a, mu}, mu.dim());
  }

  int dim() const { return n_; }
  const Variant& variant() const { return v_; }
  bool isIndicator() const { return std::holds_alternative<IndicatorFn>(v_); }
  /// every superlevel set is a ball
  bool hasBallLevels() const { return !isIndicator() || std::get<IndicatorFn>(v_).K.isBall(); }
  const char* kind() const {
    static const char* names[] = {"indicator", "gaussian", "exponential"};
    return names[v_.index()];
  }

  double scaleC() const {
    return std::visit([](const auto& g) { return g.c; }, v_);
  }
  double fMax() const { return scaleC(); }

  double eval(const Vec& x) const {
    requireDim(x, n_);
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return g.K.contains(x) ? g.c : 0.0;
          else if constexpr (std::is_same_v<T, GaussianFn>) {
            Vec d = x - g.mu;
            return g.c * std::exp(-dot(d, d) / (2.0 * g.s * g.s));
          } else return g.c * std::exp(-g.a * norm(x - g.mu));
        },
        v_);
  }

  /// int f^p for p > 0
  double powerIntegral(double p) const {
    if (!(p > 0.0)) throw std::invalid_argument("power must be positive");
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return std::pow(g.c, p) * g.K.volume();
          else if constexpr (std::is_same_v<T, GaussianFn>)
            return std::pow(g.c, p) * std::pow(2.0 * kPi * g.s * g.s / p, 0.5 * n_);
          else return std::pow(g.c, p) * n_ * omega(n_) * std::tgamma(n_) / std::pow(p * g.a, n_);
        },
        v_);
  }

  double l1() const { return powerIntegral(1.0); }

  double lpQuasiNorm(double p) const {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lpQuasiNorm: p must be positive and finite");
    return std::pow(powerIntegral(p), 1.0 / p);
  }

  /// int f log f
  double entropy() const {
    double m = l1();
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return m * std::log(g.c);
          else if constexpr (std::is_same_v<T, GaussianFn>) return m * (std::log(g.c) - 0.5 * n_);
          else return m * (std::log(g.c) - n_);
        },
        v_);
  }

  /// Radius of {f >= t} for ball-level variants.
  double levelRadius(double t) const {
    checkLevel(t);
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) {
            if (!g.K.isBall()) throw std::logic_error("levelRadius: indicator body is not a ball");
            return std::get<Ball>(g.K.shape()).radius;
          } else if constexpr (std::is_same_v<T, GaussianFn>) {
            return g.s * std::sqrt(2.0 * std::max(0.0, std::log(g.c / t)));
          } else {
            return std::max(0.0, std::log(g.c / t)) / g.a;
          }
        },
        v_);
  }

  /// {f >= t}; nullopt for the degenerate single point at t = fMax.
  std::optional<ConvexBody> supLevelBody(double t) const {
    checkLevel(t);
    if (const auto* ind = std::get_if<IndicatorFn>(&v_)) return ind->K;
    double r = levelRadius(t);
    if (!(r > 0.0)) return std::nullopt;
    return ConvexBody::ball(center(), r);
  }

  double levelVolume(double t) const {
    checkLevel(t);
    if (const auto* ind = std::get_if<IndicatorFn>(&v_)) return ind->K.volume();
    return omega(n_) * std::pow(levelRadius(t), n_);
  }

  Vec center() const {
    return std::visit(
        [](const auto& g) -> Vec {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return g.K.boundingCenter();
          else return g.mu;
        },
        v_);
  }

  /// Radial scale beyond which pair mass is negligible; proposals put a Pareto tail past it.
  double supportScale() const {
    return std::visit(
        [&](const auto& g) -> double {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return 2.0 * g.K.boundingRadius();
          else if constexpr (std::is_same_v<T, GaussianFn>) return 2.0 * g.s * (std::sqrt(static_cast<double>(n_)) + 4.0);
          else return 2.0 * (n_ + 8.0) / g.a;
        },
        v_);
  }
  bool boundedSupport() const { return isIndicator(); }

  /// x ~ f / ||f||_1
  Vec sample(Rng& rng) const {
    return std::visit(
        [&](const auto& g) -> Vec {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return g.K.samplePoint(rng);
          else if constexpr (std::is_same_v<T, GaussianFn>) {
            Vec x = g.mu;
            for (int i = 0; i < n_; ++i) x[i] += g.s * rng.normal();
            return x;
          } else {
            double lp = 0.0;
            for (int i = 0; i < n_; ++i) lp += std::log(rng.uniform());
            return along(g.mu, -lp / g.a, rng.direction(n_));
          }
        },
        v_);
  }

  /// x -> f(lambda x)
  LogConcaveFn scaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
    return std::visit(
        [&](const auto& g) -> LogConcaveFn {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return indicator(g.c, g.K.scaled(lambda));
          else if constexpr (std::is_same_v<T, GaussianFn>) return gaussian(g.c, g.mu * (1.0 / lambda), g.s / lambda);
          else return exponential(g.c, g.a * lambda, g.mu * (1.0 / lambda));
        },
        v_);
  }

  /// x -> f(x - z)
  LogConcaveFn translated(const Vec& z) const {
    return std::visit(
        [&](const auto& g) -> LogConcaveFn {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) return indicator(g.c, g.K.translated(z));
          else if constexpr (std::is_same_v<T, GaussianFn>) return gaussian(g.c, g.mu + z, g.s);
          else return exponential(g.c, g.a, g.mu + z);
        },
        v_);
  }

  /// c -> k c
  LogConcaveFn multiplied(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("multiplier must be positive");
    LogConcaveFn r = *this;
    std::visit([&](auto& g) { g.c *= k; }, r.v_);
    return r;
  }

  LogConcaveFn normalized() const { return multiplied(1.0 / l1()); }

  nlohmann::ordered_json toJson() const {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, IndicatorFn>) {
            j["type"] = "indicator";
            j["scale"] = g.c;
            j["body"] = g.K.toJson();
          } else if constexpr (std::is_same_v<T, GaussianFn>) {
            j["type"] = "gaussian";
            j["scale"] = g.c;
            j["center"] = g.mu.toStd();
            j["width"] = g.s;
          } else {
            j["type"] = "exponential";
            j["scale"] = g.c;
            j["center"] = g.mu.toStd();
            j["rate"] = g.a;
          }
        },
        v_);
    return j;
  }

private:
  LogConcaveFn(Variant v, int n) : v_(std::move(v)), n_(n) {}
  void checkLevel(double t) const {
    if (!(t > 0.0) || t > fMax()) throw std::out_of_range("level t outside (0, fMax]");
  }

  Variant v_;
  int n_;
};

/// Piecewise-constant function on a regular grid, n in {1,2,3}; cell i covers origin + h [i, i+1).
class GridFn {
public:
  GridFn(const Vec& origin, double h, std::vector<int> shape, std::vector<double> values)
      : origin_(origin), h_(h), shape_(std::move(shape)), values_(std::move(values)) {
    n_ = origin.dim();
    if (n_ < 1 || n_ > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (static_cast<int>(shape_.size()) != n_) throw std::invalid_argument("grid shape rank mismatch");
    std::size_t total = 1;
    for (int s : shape_) {
      if (s < 1) throw std::invalid_argument("grid shape entries must be positive");
      total *= static_cast<std::size_t>(s);
    }
    if (values_.size() != total) throw std::invalid_argument("grid value count does not match shape");
    double sum = 0.0;
    for (double v : values_) {
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("grid values must be finite and >= 0");
      sum += v;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("grid mass must be positive");
    cumulative_.resize(values_.size());
    std::partial_sum(values_.begin(), values_.end(), cumulative_.begin());
    fMax_ = *std::max_element(values_.begin(), values_.end());
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
  }

  int dim() const { return n_; }
  double spacing() const { return h_; }
  const Vec& origin() const { return origin_; }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& values() const { return values_; }
  double cellVolume() const { return std::pow(h_, n_); }
  double fMax() const { return fMax_; }
  const char* kind() const { return "grid"; }

  Vec cellCenter(std::size_t flat) const {
    Vec x(n_);
    for (int d = n_ - 1; d >= 0; --d) {
      int i = static_cast<int>(flat % static_cast<std::size_t>(shape_[d]));
      flat /= static_cast<std::size_t>(shape_[d]);
      x[d] = origin_[d] + (i + 0.5) * h_;
    }
    return x;
  }

  Vec center() const {
    Vec c = origin_;
    for (int d = 0; d < n_; ++d) c[d] += 0.5 * h_ * shape_[d];
    return c;
  }

  double eval(const Vec& x) const {
    requireDim(x, n_);
    std::size_t flat = 0;
    for (int d = 0; d < n_; ++d) {
      double q = std::floor((x[d] - origin_[d]) / h_);
      if (q < 0.0 || q >= shape_[d]) return 0.0;
      flat = flat * static_cast<std::size_t>(shape_[d]) + static_cast<std::size_t>(q);
    }
    return values_[flat];
  }

  /// Sums run over the sorted values, so any rearrangement gives bitwise equal results.
  double powerIntegral(double p) const {
    if (!(p > 0.0)) throw std::invalid_argument("power must be positive");
    double s = 0.0;
    for (double v : sorted_)
      if (v > 0.0) s += p == 1.0 ? v : std::pow(v, p);
    return cellVolume() * s;
  }
  double l1() const { return powerIntegral(1.0); }
  double lpQuasiNorm(double p) const {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lpQuasiNorm: p must be positive and finite");
    return std::pow(powerIntegral(p), 1.0 / p);
  }
  double entropy() const {
    double s = 0.0;
    for (double v : sorted_)
      if (v > 0.0) s += v * std::log(v);
    return cellVolume() * s;
  }

  /// |{f >= t}| for t > 0
  double levelVolume(double t) const {
    auto k = sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(), t);
    return cellVolume() * static_cast<double>(k);
  }

  /// Diameter of the support's bounding box.
  double supportScale() const {
    Vec lo(n_, kInf), hi(n_, -kInf);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] <= 0.0) continue;
      Vec c = cellCenter(i);
      for (int d = 0; d < n_; ++d) {
        lo[d] = std::min(lo[d], c[d] - 0.5 * h_);
        hi[d] = std::max(hi[d], c[d] + 0.5 * h_);
      }
    }
    return norm(hi - lo);
  }
  bool boundedSupport() const { return true; }

  Vec sample(Rng& rng) const {
    double target = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    std::size_t flat = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), static_cast<std::ptrdiff_t>(values_.size()) - 1));
    while (values_[flat] <= 0.0 && flat + 1 < values_.size()) ++flat;
    Vec x = cellCenter(flat);
    for (int d = 0; d < n_; ++d) x[d] += (rng.uniform() - 0.5) * h_;
    return x;
  }

  /// x -> k f(x)
  GridFn multiplied(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("multiplier must be positive");
    auto v = values_;
    for (double& x : v) x *= k;
    return GridFn(origin_, h_, shape_, std::move(v));
  }
  GridFn normalized() const { return multiplied(1.0 / l1()); }

  nlohmann::ordered_json toJson() const {
    nlohmann::ordered_json j;
    j["type"] = "grid";
    j["origin"] = origin_.toStd();
    j["spacing"] = h_;
    j["shape"] = shape_;
    j["cells"] = values_.size();
    j["mass"] = l1();
    return j;
  }

private:
  Vec origin_;
  double h_;
  std::vector<int> shape_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  std::vector<double> sorted_;
  double fMax_ = 0.0;
  int n_ = 0;
};

/// Radially decreasing rearrangement on the same grid: values sorted descending go to cells
/// ordered by distance from the grid center (ties broken by cell index).
inline GridFn schwarzSymmetral(const GridFn& f) {
  const auto& vals = f.values();
  std::vector<double> sorted = vals;
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());
  Vec c = f.center();
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) dist[i] = norm(f.cellCenter(i) - c);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  std::vector<double> out(vals.size(), 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted[k];
  return GridFn(f.origin(), f.spacing(), f.shape(), std::move(out));
}

inline std::vector<double> readFloat64File(const std::filesystem::path& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open grid values file: " + path.string());
  in.seekg(0, std::ios::end);
  auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != count * 8) throw std::invalid_argument("grid values file has wrong size: " + path.string());
  in.seekg(0);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int k = 7; k >= 0; --k) u = (u << 8) | b[k];
    double d;
    std::memcpy(&d, &u, 8);
    out[i] = d;
  }
  return out;
}

inline void writeFloat64File(const std::filesystem::path& path, const std::vector<double>& xs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (double d : xs) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

using AnyFn = std::variant<LogConcaveFn, GridFn>;

/// Function spec; relative grid paths resolve against baseDir.
inline AnyFn parseFunction(const nlohmann::json& j, const std::filesystem::path& baseDir = {}) {
  if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("function spec: missing 'type'");
  auto type = j.at("type").get<std::string>();
  double c = j.value("scale", 1.0);
  if (type == "indicator") return LogConcaveFn::indicator(c, parseShape(j.at("body")));
  if (type == "gaussian") return LogConcaveFn::gaussian(c, jsonVec(j, "center"), j.at("width").get<double>());
  if (type == "exponential") return LogConcaveFn::exponential(c, j.at("rate").get<double>(), jsonVec(j, "center"));
  if (type == "grid") {
    auto shape = j.at("shape").get<std::vector<int>>();
    std::size_t total = 1;
    for (int s : shape) {
      if (s < 1) throw std::invalid_argument("grid shape entries must be positive");
      total *= static_cast<std::size_t>(s);
    }
    const auto& jv = j.at("values");
    if (jv.is_array()) return GridFn(jsonVec(j, "origin"), j.at("spacing").get<double>(), shape, jv.get<std::vector<double>>());
    std::filesystem::path p = jv.get<std::string>();
    if (p.is_relative()) p = baseDir / p;
    return GridFn(jsonVec(j, "origin"), j.at("spacing").get<double>(), shape, readFloat64File(p, total));
  }
  throw std::invalid_argument("function spec: unknown type '" + type + "'");
}

}  // namespace chordlab
