#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "chordlab/constants.hpp"
#include "chordlab/estimate.hpp"
#include "chordlab/functions.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/rng.hpp"

namespace chordlab {

// ---------------------------------------------------------------- quadrature

/// Gauss-Legendre nodes/weights on [a,b], N points.
template <int N = 8>
void gaussPanel(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using Q = boost::math::quadrature::gauss<double, N>;
  const auto& ab = Q::abscissa();
  const auto& wt = Q::weights();
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      x.push_back(m);
      w.push_back(h * wt[i]);
      continue;
    }
    x.push_back(m - h * ab[i]);
    w.push_back(h * wt[i]);
    x.push_back(m + h * ab[i]);
    w.push_back(h * wt[i]);
  }
}

struct QuadratureRule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

/// Composite 8-point rule over consecutive breakpoints.
inline QuadratureRule compositeRule(const std::vector<double>& breaks) {
  QuadratureRule q;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) gaussPanel<8>(breaks[i], breaks[i + 1], q.x, q.w);
  return q;
}

/// Nodes for int_0^{fMax} g(t) dt under t = fMax (1 - e^{-s}): geometric s-panels on [1e-14, 1], uniform on [1, sMax].
inline QuadratureRule levelRule(double fMax, int geoPanels = 36, int uniPanels = 28, double sMax = 40.0) {
  if (geoPanels < 1 || uniPanels < 1) throw std::invalid_argument("level quadrature needs at least one panel of each kind");
  std::vector<double> br;
  for (int k = geoPanels; k >= 0; --k) br.push_back(std::pow(10.0, -14.0 * k / geoPanels));
  for (int k = 1; k <= uniPanels; ++k) br.push_back(1.0 + (sMax - 1.0) * k / uniPanels);
  QuadratureRule s = compositeRule(br);
  QuadratureRule t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double e = std::exp(-s.x[i]);
    t.x.push_back(-fMax * std::expm1(-s.x[i]));
    t.w.push_back(s.w[i] * fMax * e);
  }
  return t;
}

struct LevelPanels {
  int geo = 36;
  int uni = 28;
};

namespace detail {
inline double valueOf(double v) { return v; }
inline double valueOf(const Estimate& e) { return e.value; }
}  // namespace detail

/// int_0^{fMax} perLevel(t, {f >= t}) dt; Estimate-valued perLevel errors are propagated as independent.
template <class PerLevel>
Estimate levelQuadrature(const LogConcaveFn& f, PerLevel&& perLevel, LevelPanels panels = {}) {
  auto rule = levelRule(f.fMax(), panels.geo, panels.uni);
  Estimate total = Estimate::exact(0.0);
  double var = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double t = rule.x[i];
    if (!(t > 0.0) || t >= f.fMax()) continue;
    auto body = f.supLevelBody(t);
    if (!body) continue;
    try {
      auto v = perLevel(t, *body);
      using V = std::decay_t<decltype(v)>;
      total.value += rule.w[i] * detail::valueOf(v);
      if constexpr (std::is_same_v<V, Estimate>) {
        var += rule.w[i] * rule.w[i] * v.stdError * v.stdError;
        total.nSamples += v.nSamples;
        total.tailIndex = std::min(total.tailIndex, v.tailIndex);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("level quadrature failed at t=" + std::to_string(t) + ": " + e.what());
    }
  }
  total.stdError = std::sqrt(var);
  return total;
}

// ---------------------------------------------------------------- radial proposals

/// Mixture of power laws r^e on [lo,hi], tapered power laws r^e (1 - r/hi) on (0,hi) and Pareto tails on [lo,inf).
class RadialProposal {
public:
  enum class Kind { POWER, TAPER, PARETO };
  struct Component {
    Kind kind = Kind::POWER;
    double weight = 1.0;
    double exponent = 0.0;  ///< power-law exponent e, or Pareto index k
    double lo = 0.0, hi = 1.0;
  };

  RadialProposal& power(double weight, double e, double lo, double hi) {
    if (!(hi > lo) || lo < 0.0) throw std::invalid_argument("power component needs 0 <= lo < hi");
    if (lo == 0.0 && !(e > -1.0)) throw std::invalid_argument("power component on (0,hi] needs exponent > -1");
    comps_.push_back({Kind::POWER, weight, e, lo, hi});
    normalize();
    return *this;
  }
  /// Beta(e+1, 2) shape scaled to (0, hi)
  RadialProposal& taper(double weight, double e, double hi) {
    if (!(hi > 0.0) || !(e > -1.0)) throw std::invalid_argument("taper component needs hi > 0, exponent > -1");
    comps_.push_back({Kind::TAPER, weight, e, 0.0, hi});
    normalize();
    return *this;
  }
  RadialProposal& pareto(double weight, double k, double lo) {
    if (!(k > 0.0) || !(lo > 0.0)) throw std::invalid_argument("pareto component needs k > 0, lo > 0");
    comps_.push_back({Kind::PARETO, weight, k, lo, kInf});
    normalize();
    return *this;
  }

  double sample(Rng& rng) const {
    double u = rng.uniform(), acc = 0.0;
    const Component* c = &comps_.back();
    for (const auto& k : comps_) {
      acc += k.weight;
      if (u < acc) {
        c = &k;
        break;
      }
    }
    double v = rng.uniform();
    switch (c->kind) {
      case Kind::PARETO:
        return c->lo * std::pow(v, -1.0 / c->exponent);
      case Kind::TAPER: {
        // Beta(a,1) * Beta(a+1,1) ~ Beta(a,2)
        double a = c->exponent + 1.0;
        return floorDraw(c->hi * std::pow(v, 1.0 / a) * std::pow(rng.uniform(), 1.0 / (a + 1.0)));
      }
      case Kind::POWER:
        break;
    }
    if (c->exponent == -1.0) return c->lo * std::pow(c->hi / c->lo, v);
    double p = c->exponent + 1.0;
    double a = std::pow(c->lo, p), b = std::pow(c->hi, p);
    return floorDraw(std::pow(a + v * (b - a), 1.0 / p));
  }

  double pdf(double r) const {
    double s = 0.0;
    for (const auto& c : comps_) {
      if (r < c.lo || r > c.hi) continue;
      if (c.kind == Kind::PARETO) {
        s += c.weight * c.exponent * std::pow(c.lo, c.exponent) * std::pow(r, -c.exponent - 1.0);
      } else if (c.kind == Kind::TAPER) {
        double a = c.exponent + 1.0;
        s += c.weight * a * (a + 1.0) * std::pow(r, c.exponent) * (1.0 - r / c.hi) / std::pow(c.hi, a);
      } else if (c.exponent == -1.0) {
        s += c.weight / (r * std::log(c.hi / c.lo));
      } else {
        double p = c.exponent + 1.0;
        s += c.weight * p * std::pow(r, c.exponent) / (std::pow(c.hi, p) - std::pow(c.lo, p));
      }
    }
    return s;
  }

  const std::vector<Component>& components() const { return comps_; }

private:
  /// exponents near -1 underflow the draw to 0; k/pdf is flat there, so the smallest normal stands in
  static double floorDraw(double r) { return std::max(r, std::numeric_limits<double>::min()); }
  void normalize() {
    double t = 0.0;
    for (const auto& c : comps_) t += c.weight;
    for (auto& c : comps_) c.weight /= t;
  }
  std::vector<Component> comps_;
};

/// Near-singular exponent used next to r^alpha for the difference kernel.
inline double singularExponent(double alpha) { return -1.0 + 0.1 * (1.0 + alpha); }

/// Small-r exponent for the difference kernel: r^{alpha - 1/2} balances the r^{alpha-1} kernel
/// against the O(r) chance that a pair straddles a jump.
inline double differenceExponent(double alpha) { return std::max(alpha - 0.5, singularExponent(alpha)); }

/// Default proposal for k(r) r^{n-1} = r^{alpha-1} on (0, inf) with support scale S.
inline RadialProposal rieszProposal(double alpha, double S, bool boundedSupport) {
  RadialProposal p;
  if (alpha > 0.0) {
    if (boundedSupport) p.taper(0.7, alpha - 1.0, S).power(0.3, alpha - 1.0, 0.0, S);
    else p.power(0.9, alpha - 1.0, 0.0, S).pareto(0.1, 1.0, S);
  } else if (alpha > -1.0) {
    p.power(0.5, differenceExponent(alpha), 0.0, S).power(0.3, alpha, 0.0, S).pareto(0.2, -alpha, S);
  } else {
    throw std::invalid_argument("pair sampler: alpha must exceed -1");
  }
  return p;
}

// ---------------------------------------------------------------- pair sampling

/// k(r) r^{n-1} = r^power on [lo, hi); the polar form of a radial pair kernel.
struct PairKernel {
  double power = 0.0;
  double lo = 0.0;
  double hi = kInf;
  double operator()(double r) const { return (r >= lo && r < hi) ? std::pow(r, power) : 0.0; }
  static PairKernel riesz(double alpha) { return {alpha - 1.0, 0.0, kInf}; }
};

enum class PairWeight { MIN, DIFF };

struct PairSample {
  Vec x, y;
  double weight = 0.0;
};

/// x uniform in the ball (center, R), direction uniform, r from the proposal;
/// weight * W(x,y) is unbiased for int int W(x,y) k(|x-y|) dx dy over x in the ball.
class RieszPairSampler {
public:
  RieszPairSampler(double R, Vec center, double alpha)
      : R_(R), center_(std::move(center)), kernel_(PairKernel::riesz(alpha)) {
    if (!(alpha > -1.0)) throw std::invalid_argument("pair sampler: alpha must exceed -1");
    if (alpha == 0.0) throw std::invalid_argument("pair sampler: alpha = 0 has no Riesz kernel");
    int n = center_.dim();
    proposal_ = rieszProposal(alpha, 2.0 * R, alpha > 0.0);
    scale_ = omega(n) * std::pow(R, n) * n * omega(n);
  }
  RieszPairSampler(double R, Vec center, PairKernel k, RadialProposal p)
      : R_(R), center_(std::move(center)), kernel_(k), proposal_(std::move(p)) {
    int n = center_.dim();
    scale_ = omega(n) * std::pow(R, n) * n * omega(n);
  }

  PairSample operator()(Rng& rng) const {
    int n = center_.dim();
    Vec x = along(center_, R_, rng.inBall(n));
    Vec u = rng.direction(n);
    double r = proposal_.sample(rng);
    double k = kernel_(r);
    double w = k == 0.0 ? 0.0 : scale_ * k / proposal_.pdf(r);
    return {x, along(x, r, u), w};
  }

private:
  double R_;
  Vec center_;
  PairKernel kernel_;
  RadialProposal proposal_;
  double scale_ = 0.0;
};

/// int int W(x,y) |x-y|^{alpha-n} for W = chi chi (alpha > 0) or |chi - chi| (alpha < 0).
inline Estimate pairIntegralBody(const ConvexBody& K, double alpha, const Budget& budget) {
  RieszPairSampler sampler(K.boundingRadius(), K.boundingCenter(), alpha);
  bool diff = alpha < 0.0;
  return monteCarlo(
      budget,
      [&](Rng& rng) {
        auto s = sampler(rng);
        if (s.weight == 0.0 || !K.contains(s.x)) return 0.0;
        bool iny = K.contains(s.y);
        if (diff) return iny ? 0.0 : 2.0 * s.weight;
        return iny ? s.weight : 0.0;
      },
      1.0, true);
}

/// int int W(f(x), f(y)) k(|x-y|) dx dy with x ~ f/||f||_1:
/// MIN uses min{f(x),f(y)}, DIFF uses |f(x) - f(y)| (counted via 2 (f(x)-f(y))_+).
template <class F>
Estimate pairIntegralFn(const F& f, PairWeight weight, const PairKernel& kernel, const RadialProposal& proposal,
                        const Budget& budget) {
  int n = f.dim();
  double scale = f.l1() * n * omega(n);
  return monteCarlo(
      budget,
      [&](Rng& rng) {
        Vec x = f.sample(rng);
        Vec u = rng.direction(n);
        double r = proposal.sample(rng);
        double k = kernel(r);
        if (k == 0.0) return 0.0;
        double fx = f.eval(x);
        if (!(fx > 0.0)) return 0.0;
        double ratio = f.eval(along(x, r, u)) / fx;
        double wv = weight == PairWeight::MIN ? std::min(1.0, ratio) : 2.0 * std::max(0.0, 1.0 - ratio);
        if (wv == 0.0) return 0.0;
        return wv * k / proposal.pdf(r);
      },
      scale, true);
}

/// Riesz-kernel pair integral of a function with the default proposal.
template <class F>
Estimate rieszPairIntegralFn(const F& f, double alpha, const Budget& budget) {
  if (alpha == 0.0) throw std::invalid_argument("pair route: alpha = 0 has no Riesz kernel");
  auto prop = rieszProposal(alpha, f.supportScale(), f.boundedSupport() && alpha > 0.0);
  return pairIntegralFn(f, alpha > 0.0 ? PairWeight::MIN : PairWeight::DIFF, PairKernel::riesz(alpha), prop, budget);
}

}  // namespace chordlab
