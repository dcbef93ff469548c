#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chordlab/constants.hpp"
#include "chordlab/estimate.hpp"
#include "chordlab/functions.hpp"
#include "chordlab/geometry.hpp"
#include "chordlab/mc.hpp"

namespace chordlab {

enum class Route { LINES, PAIRS, LEVELSET, RADIALMEAN };

inline const char* routeName(Route r) {
  switch (r) {
    case Route::LINES: return "LINES";
    case Route::PAIRS: return "PAIRS";
    case Route::LEVELSET: return "LEVELSET";
    case Route::RADIALMEAN: return "RADIALMEAN";
  }
  return "?";
}

inline Route parseRoute(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "LINES") return Route::LINES;
  if (u == "PAIRS") return Route::PAIRS;
  if (u == "LEVELSET") return Route::LEVELSET;
  if (u == "RADIALMEAN") return Route::RADIALMEAN;
  throw std::invalid_argument("unknown route '" + s + "'");
}

// ---------------------------------------------------------------- spherical rules

struct SphereRule {
  std::vector<Vec> dirs;
  std::vector<double> w;  ///< sums to n omega_n
};

/// n=1: both points; n=2: Gauss panels on multiples of pi/4; n=3: product rule split at coordinate planes.
inline SphereRule sphereRule(int n) {
  SphereRule s;
  if (n == 1) {
    s.dirs = {Vec{1.0}, Vec{-1.0}};
    s.w = {1.0, 1.0};
  } else if (n == 2) {
    std::vector<double> br;
    for (int k = 0; k <= 8; ++k) br.push_back(0.25 * kPi * k);
    auto q = compositeRule(br);
    for (std::size_t i = 0; i < q.size(); ++i) {
      s.dirs.push_back(Vec{std::cos(q.x[i]), std::sin(q.x[i])});
      s.w.push_back(q.w[i]);
    }
  } else if (n == 3) {
    std::vector<double> zx, zw, px, pw;
    gaussPanel<6>(-1.0, 0.0, zx, zw);
    gaussPanel<6>(0.0, 1.0, zx, zw);
    for (int k = 0; k < 8; ++k) gaussPanel<4>(0.25 * kPi * k, 0.25 * kPi * (k + 1), px, pw);
    for (std::size_t i = 0; i < zx.size(); ++i) {
      double st = std::sqrt(std::max(0.0, 1.0 - zx[i] * zx[i]));
      for (std::size_t j = 0; j < px.size(); ++j) {
        s.dirs.push_back(Vec{st * std::cos(px[j]), st * std::sin(px[j]), zx[i]});
        s.w.push_back(zw[i] * pw[j]);
      }
    }
  } else {
    throw std::invalid_argument("deterministic sphere rule only for n <= 3");
  }
  return s;
}

// ---------------------------------------------------------------- lines

/// int g(|K ∩ l|) dl over lines meeting K; g(0) never evaluated.
template <class G>
Estimate linesIntegral(const ConvexBody& K, G g, const Budget& budget) {
  const double R = K.boundingRadius();
  const Vec& c = K.boundingCenter();
  return monteCarlo(budget, [&](Rng& rng) {
    auto ls = sampleLine(R, c, rng);
    double len = K.chordLength(ls.line);
    return len > 0.0 ? ls.weight * g(len) : 0.0;
  });
}

// ---------------------------------------------------------------- radial mean bodies

namespace detail {
/// rho_{K-x}(u) for x uniform in K, never exactly zero
inline double sampleRadial(const ConvexBody& K, const Vec& u, Rng& rng) {
  for (;;) {
    Vec x = K.samplePoint(rng);
    auto iv = K.clip(x, u);
    double r = iv ? iv->second : 0.0;
    if (r > 0.0) return r;
  }
}

inline double rhoPow(double rho, double alpha) { return alpha == 0.0 ? std::log(rho) : std::pow(rho, alpha); }
}  // namespace detail

/// E_x[rho_{K-x}(u)^alpha] (alpha != 0) or E_x[log rho_{K-x}(u)] (alpha = 0), x uniform in K.
inline Estimate radialMoment(const ConvexBody& K, double alpha, const Vec& u, const Budget& budget) {
  if (!(alpha > -1.0)) throw std::invalid_argument("radial mean: alpha must exceed -1");
  return monteCarlo(
      budget, [&](Rng& rng) { return detail::rhoPow(detail::sampleRadial(K, u, rng), alpha); }, 1.0, alpha < 0.0);
}

/// moment -> rho with first-order error propagation
inline Estimate rhoFromMoment(const Estimate& m, double alpha) {
  if (alpha == 0.0) {
    double r = std::exp(m.value);
    return mapEstimate(m, r, r);
  }
  double r = std::pow(m.value, 1.0 / alpha);
  return mapEstimate(m, r, r / (alpha * m.value));
}

namespace detail {
/// Support end of r -> covariogram(r u), by bisection on the exact covariogram.
inline double covariogramReach(const ConvexBody& K, const Vec& u) {
  double lo = 0.0, hi = 2.0 * K.boundingRadius() * (1.0 + 1e-12);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    double m = 0.5 * (lo + hi);
    if (*K.covariogramExact(u * m) > 0.0) lo = m;
    else hi = m;
  }
  return hi;
}
}  // namespace detail

/// rho_{R_alpha K}(u)^alpha from the covariogram representation; deterministic when the covariogram is exact.
inline Estimate radialMomentCovariogram(const ConvexBody& K, double alpha, const Vec& u, const Budget& budget,
                                        int panels = 32) {
  if (alpha == 0.0 || !(alpha > -1.0)) throw std::invalid_argument("covariogram route needs alpha in (-1,0) or (0,inf)");
  bool exact = K.covariogramExact(u).has_value();
  double D = exact ? detail::covariogramReach(K, u) : 2.0 * K.boundingRadius();
  double vol = K.volume();
  std::vector<double> br;
  for (int k = 0; k <= panels; ++k) br.push_back(static_cast<double>(k) / panels);
  auto q = compositeRule(br);
  Budget nb = budget.withSamples(budget.nSamples / q.size());
  auto g = [&](double r, std::size_t i) -> Estimate {
    return K.covariogram(u * r, nb.derive("covariogram-node", i));
  };
  Estimate acc = Estimate::exact(0.0);
  double var = 0.0;
  if (alpha > 0.0) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      Estimate c = g(D * std::pow(q.x[i], 1.0 / alpha), i);
      acc.value += q.w[i] * c.value;
      var += q.w[i] * q.w[i] * c.stdError * c.stdError;
      acc.nSamples += c.nSamples;
    }
    double f = std::pow(D, alpha) / vol;
    acc.value *= f;
    acc.stdError = f * std::sqrt(var);
  } else {
    double k = 1.0 / (1.0 + alpha);
    for (std::size_t i = 0; i < q.size(); ++i) {
      double s = q.x[i];
      Estimate c = g(D * std::pow(s, k), i);
      double wt = q.w[i] * std::pow(s, k * alpha - 1.0);
      acc.value += wt * (vol - c.value);
      var += wt * wt * c.stdError * c.stdError;
      acc.nSamples += c.nSamples;
    }
    double f = -alpha * std::pow(D, alpha) * k / vol;
    acc.value = f * acc.value + std::pow(D, alpha);
    acc.stdError = f * std::sqrt(var);
  }
  return acc;
}

enum class RadialMethod { MC, COVARIOGRAM };

/// rho_{R_alpha K}(u)
inline Estimate radialMeanBodyRho(const ConvexBody& K, double alpha, const Vec& u, const Budget& budget,
                                  RadialMethod method = RadialMethod::MC) {
  Vec d = makeDirection(u);
  requireDim(d, K.dim());
  if (method == RadialMethod::COVARIOGRAM && alpha != 0.0)
    return rhoFromMoment(radialMomentCovariogram(K, alpha, d, budget), alpha);
  return rhoFromMoment(radialMoment(K, alpha, d, budget), alpha);
}

struct RadialProfile {
  std::vector<Vec> directions;
  std::vector<Estimate> values;
};

inline RadialProfile radialProfile(const ConvexBody& K, double alpha, const std::vector<Vec>& dirs, const Budget& budget) {
  RadialProfile p;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    p.directions.push_back(makeDirection(dirs[i]));
    p.values.push_back(radialMeanBodyRho(K, alpha, dirs[i], budget.derive("profile", i)));
  }
  return p;
}

// ---------------------------------------------------------------- chord power integrals

namespace detail {
inline void checkRouteAlpha(Route route, double alpha) {
  if (route == Route::LINES) {
    if (!(alpha >= -1.0)) throw std::invalid_argument("LINES route needs alpha >= -1");
  } else if (route == Route::PAIRS) {
    if (!(alpha > -1.0) || alpha == 0.0) throw std::invalid_argument("PAIRS route needs alpha in (-1,0) or (0,inf)");
  } else if (!(alpha > -1.0)) {
    throw std::invalid_argument(std::string(routeName(route)) + " route needs alpha > -1");
  }
}

/// factor turning the Riesz double integral into I_{alpha+1}
inline double pairFactor(int n, double alpha) {
  double f = std::abs(alpha) * (alpha + 1.0) / (n * omega(n));
  return alpha < 0.0 ? 0.5 * f : f;
}
}  // namespace detail

/// ((alpha+1)/(n omega_n)) int_S int_K rho_{K-x}(u)^alpha dx du
inline Estimate chordPowerRadialMean(const ConvexBody& K, double alpha, const Budget& budget) {
  int n = K.dim();
  if (alpha == 0.0) return K.volumeEstimate();
  Estimate vol = K.volumeEstimate();
  double f = (alpha + 1.0) / (n * omega(n));
  if (K.isBall()) {
    Vec u = Vec::unit(n, 0);
    Estimate m = radialMoment(K, alpha, u, budget.derive("radialmean"));
    return product(vol, m) * (f * n * omega(n));
  }
  if (n >= 4) {
    Estimate m = monteCarlo(
        budget.derive("radialmean"),
        [&](Rng& rng) {
          Vec u = rng.direction(n);
          return detail::rhoPow(detail::sampleRadial(K, u, rng), alpha);
        },
        1.0, alpha < 0.0);
    return product(vol, m) * (f * n * omega(n));
  }
  auto rule = sphereRule(n);
  Budget nb = budget.withSamples(budget.nSamples / rule.dirs.size());
  Estimate acc = Estimate::exact(0.0);
  double var = 0.0;
  for (std::size_t i = 0; i < rule.dirs.size(); ++i) {
    Estimate m = radialMoment(K, alpha, rule.dirs[i], nb.derive("radialmean", i));
    acc.value += rule.w[i] * m.value;
    var += rule.w[i] * rule.w[i] * m.stdError * m.stdError;
    acc.nSamples += m.nSamples;
    acc.tailIndex = std::min(acc.tailIndex, m.tailIndex);
  }
  acc.stdError = std::sqrt(var);
  return product(vol, acc) * f;
}

inline Estimate chordPowerBody(const ConvexBody& K, double alpha, Route route, const Budget& budget) {
  detail::checkRouteAlpha(route, alpha);
  int n = K.dim();
  switch (route) {
    case Route::LINES:
      return linesIntegral(
          K, [alpha](double c) { return alpha == -1.0 ? 1.0 : std::pow(c, alpha + 1.0); }, budget.derive("lines"));
    case Route::PAIRS:
      return pairIntegralBody(K, alpha, budget.derive("pairs")) * detail::pairFactor(n, alpha);
    case Route::RADIALMEAN:
      return chordPowerRadialMean(K, alpha, budget);
    case Route::LEVELSET:
      throw std::invalid_argument("LEVELSET route applies to functions, not bodies");
  }
  throw std::logic_error("unreachable");
}

namespace detail {
inline const IndicatorFn* asIndicator(const AnyFn& f) {
  if (const auto* g = std::get_if<LogConcaveFn>(&f)) return std::get_if<IndicatorFn>(&g->variant());
  return nullptr;
}
inline int dimOf(const AnyFn& f) {
  return std::visit([](const auto& g) { return g.dim(); }, f);
}
inline double l1Of(const AnyFn& f) {
  return std::visit([](const auto& g) { return g.l1(); }, f);
}
}  // namespace detail

/// I_{alpha+1}(f) = int_0^{fMax} I_{alpha+1}({f >= t}) dt
inline Estimate chordPowerFn(const AnyFn& f, double alpha, Route route, const Budget& budget) {
  detail::checkRouteAlpha(route, alpha);
  int n = detail::dimOf(f);
  const IndicatorFn* ind = detail::asIndicator(f);
  if (route == Route::PAIRS) {
    Estimate di = std::visit([&](const auto& g) { return rieszPairIntegralFn(g, alpha, budget.derive("pairs-fn")); }, f);
    return di * detail::pairFactor(n, alpha);
  }
  if (ind) {
    if (route == Route::LEVELSET && ind->K.isBall()) {
      double r = std::get<Ball>(ind->K.shape()).radius;
      return Estimate::exact(ind->c * ballChordPower(n, alpha) * std::pow(r, n + alpha));
    }
    Route r = route == Route::LEVELSET ? Route::LINES : route;
    return chordPowerBody(ind->K, alpha, r, budget) * ind->c;
  }
  if (route != Route::LEVELSET)
    throw std::invalid_argument(std::string(routeName(route)) + " route needs a body or an indicator function");
  const auto* g = std::get_if<LogConcaveFn>(&f);
  if (!g) throw std::invalid_argument("LEVELSET route needs a catalog function");
  double bcp = ballChordPower(n, alpha);
  return levelQuadrature(*g, [&](double t, const ConvexBody&) { return bcp * std::pow(g->levelRadius(t), n + alpha); });
}

/// int int W/|x-y|^{n-alpha}: min kernel for alpha > 0, |f(x)-f(y)| for alpha in (-1,0).
inline Estimate rieszDoubleIntegral(const AnyFn& f, double alpha, Route route, const Budget& budget) {
  if (alpha == 0.0 || !(alpha > -1.0)) throw std::invalid_argument("Riesz double integral needs alpha in (-1,0) or (0,inf)");
  int n = detail::dimOf(f);
  if (route == Route::PAIRS)
    return std::visit([&](const auto& g) { return rieszPairIntegralFn(g, alpha, budget.derive("pairs-fn")); }, f);
  return chordPowerFn(f, alpha, route, budget) * (1.0 / detail::pairFactor(n, alpha));
}

inline Estimate rieszDoubleIntegralBody(const ConvexBody& K, double alpha, Route route, const Budget& budget) {
  if (alpha == 0.0 || !(alpha > -1.0)) throw std::invalid_argument("Riesz double integral needs alpha in (-1,0) or (0,inf)");
  if (route == Route::PAIRS) return pairIntegralBody(K, alpha, budget.derive("pairs"));
  return chordPowerBody(K, alpha, route, budget) * (1.0 / detail::pairFactor(K.dim(), alpha));
}

// ---------------------------------------------------------------- direct radial route for functions

namespace detail {
/// h(r) = (1/||f||) int min{f(x), f(x+ru)} dx; u = nullopt averages over uniform directions.
template <class F>
Estimate minMass(const F& f, double r, const std::optional<Vec>& u, const Budget& budget) {
  int n = f.dim();
  return monteCarlo(budget, [&](Rng& rng) {
    Vec x = f.sample(rng);
    Vec d = u ? *u : rng.direction(n);
    double fx = f.eval(x);
    if (!(fx > 0.0)) return 0.0;
    return std::min(1.0, f.eval(along(x, r, d)) / fx);
  });
}

struct WeightedNodes {
  std::vector<double> r, w;  ///< contribution = sum w_i * phi(h(r_i)), phi chosen by caller
};

inline std::vector<double> uniformBreaks(double a, double b, int panels) {
  std::vector<double> br;
  for (int k = 0; k <= panels; ++k) br.push_back(a + (b - a) * k / panels);
  return br;
}

/// Quadrature in r of log rho_{R_0 f}(u) = int_0^1 (h-1)/r dr + int_1^inf h/r dr, or of
/// rho^alpha = alpha int r^{alpha-1} h (alpha > 0), |alpha| int r^{alpha-1} (1-h) (alpha < 0).
template <class F>
Estimate directRadial(const F& f, double alpha, const std::optional<Vec>& u, const Budget& budget, int panels = 24) {
  double S = f.supportScale();
  bool bounded = f.boundedSupport();
  double Send = bounded ? S : 4.0 * S;
  struct Node {
    double r, w;
    bool oneMinus;  ///< integrand uses (h - 1) instead of h
  };
  std::vector<Node> nodes;
  double constant = 0.0;
  if (alpha > 0.0) {
    auto q = compositeRule(uniformBreaks(0.0, 1.0, panels));
    double sa = std::pow(S, alpha);
    for (std::size_t i = 0; i < q.size(); ++i) nodes.push_back({S * std::pow(q.x[i], 1.0 / alpha), q.w[i] * sa, false});
    if (!bounded) {
      auto t = compositeRule(uniformBreaks(S, Send, panels / 3 + 1));
      for (std::size_t i = 0; i < t.size(); ++i) nodes.push_back({t.x[i], alpha * t.w[i] * std::pow(t.x[i], alpha - 1.0), false});
    }
  } else if (alpha < 0.0) {
    double k = 1.0 / (1.0 + alpha);
    auto q = compositeRule(uniformBreaks(0.0, 1.0, panels));
    double sa = std::pow(S, alpha);
    // |alpha| S^alpha k int s^{k alpha - 1} (1 - h) ds, written as -(...)(h - 1)
    for (std::size_t i = 0; i < q.size(); ++i)
      nodes.push_back({S * std::pow(q.x[i], k), alpha * sa * k * q.w[i] * std::pow(q.x[i], k * alpha - 1.0), true});
    constant = sa;
    if (!bounded) {
      auto t = compositeRule(uniformBreaks(S, Send, panels / 3 + 1));
      for (std::size_t i = 0; i < t.size(); ++i) nodes.push_back({t.x[i], alpha * t.w[i] * std::pow(t.x[i], alpha - 1.0), false});
    }
  } else {
    auto q = compositeRule(uniformBreaks(0.0, 1.0, panels / 2));
    for (std::size_t i = 0; i < q.size(); ++i) nodes.push_back({q.x[i], q.w[i] / q.x[i], true});
    if (Send > 1.0) {
      // log-spaced panels in r over [1, Send]
      auto t = compositeRule(uniformBreaks(0.0, std::log(Send), panels));
      for (std::size_t i = 0; i < t.size(); ++i) nodes.push_back({std::exp(t.x[i]), t.w[i], false});
    }
  }
  Budget nb = budget.withSamples(std::max<std::uint64_t>(budget.nSamples / nodes.size(), 16));
  Estimate acc = Estimate::exact(constant);
  double var = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Estimate h = minMass(f, nodes[i].r, u, nb.derive("minmass", i));
    double v = nodes[i].oneMinus ? h.value - 1.0 : h.value;
    acc.value += nodes[i].w * v;
    var += nodes[i].w * nodes[i].w * h.stdError * h.stdError;
    acc.nSamples += h.nSamples;
  }
  acc.stdError = std::sqrt(var);
  return acc;
}
}  // namespace detail

enum class RadialFnRoute { LEVELWISE, DIRECT };

/// rho_{R_alpha f}(u)
inline Estimate radialMeanFnRho(const AnyFn& f, double alpha, const Vec& u, const Budget& budget,
                                RadialFnRoute route = RadialFnRoute::LEVELWISE) {
  if (!(alpha > -1.0)) throw std::invalid_argument("radial mean: alpha must exceed -1");
  Vec d = makeDirection(u);
  int n = detail::dimOf(f);
  requireDim(d, n);
  const auto* g = std::get_if<LogConcaveFn>(&f);
  if (route == RadialFnRoute::LEVELWISE && g) {
    if (const auto* ind = std::get_if<IndicatorFn>(&g->variant())) return radialMeanBodyRho(ind->K, alpha, d, budget);
    // ball levels: rho_{R_alpha(rB)} = r rho_{R_alpha B}
    ConvexBody unit = ConvexBody::ball(Vec(n), 1.0);
    Estimate mb = radialMoment(unit, alpha, Vec::unit(n, 0), budget.derive("levelwise-ball"));
    double m = g->l1();
    Estimate lv = levelQuadrature(*g, [&](double t, const ConvexBody&) {
      double r = g->levelRadius(t);
      double mu = g->levelVolume(t) / m;
      return mu * (alpha == 0.0 ? std::log(r) : std::pow(r, alpha));
    });
    if (alpha == 0.0) return rhoFromMoment(mb + lv.value, 0.0);
    return rhoFromMoment(mb * lv.value, alpha);
  }
  Estimate mom = std::visit([&](const auto& h) { return detail::directRadial(h, alpha, d, budget.derive("direct-radial")); }, f);
  return rhoFromMoment(mom, alpha);
}

/// (1/(n omega_n)) int_S log rho_{R_0 f}(u) du
inline Estimate dualLogVolume(const AnyFn& f, const Budget& budget) {
  int n = detail::dimOf(f);
  bool radial = false;
  if (const auto* g = std::get_if<LogConcaveFn>(&f)) radial = g->hasBallLevels();
  return std::visit(
      [&](const auto& h) {
        std::optional<Vec> u;
        if (radial) u = Vec::unit(n, 0);
        return detail::directRadial(h, 0.0, u, budget.derive("dual-log-volume"));
      },
      f);
}

/// (1/(n omega_n)) int_S log rho_{R_0 K}(u) du = E_{x in K, u} log rho_{K-x}(u)
inline Estimate dualLogVolumeBody(const ConvexBody& K, const Budget& budget) {
  int n = K.dim();
  if (K.isBall()) return radialMoment(K, 0.0, Vec::unit(n, 0), budget.derive("dual-log-volume-body"));
  return monteCarlo(budget.derive("dual-log-volume-body"), [&](Rng& rng) {
    Vec u = rng.direction(n);
    return std::log(detail::sampleRadial(K, u, rng));
  });
}

// ---------------------------------------------------------------- entropies

inline void checkOrder(int n, int order) {
  if (order != 1 && order != n + 1) throw std::invalid_argument("entropy order must be 1 or n+1");
}

/// E_1(K) = -(1/|K|) int c log c dl ; E_{n+1}(K) = -(omega_n/|K|^2) int c^{n+1} log c dl
inline Estimate entropyBody(const ConvexBody& K, int order, const Budget& budget) {
  int n = K.dim();
  checkOrder(n, order);
  Estimate j = linesIntegral(
      K, [order](double c) { return std::pow(c, order) * std::log(c); }, budget.derive("entropy-lines"));
  Estimate vol = K.volumeEstimate();
  if (order == 1) return quotient(j, vol) * -1.0;
  return quotient(j, product(vol, vol)) * (-omega(n));
}

/// E_1(f) = int E_1({f>=t}) dmu_f - (1/(n ||f||)) int f log f ; E_{n+1}(f) = int E_{n+1}({f>=t}) dnu_f
inline Estimate entropyFn(const LogConcaveFn& f, int order, const Budget& budget, LevelPanels levelPanels = {10, 14}) {
  int n = f.dim();
  checkOrder(n, order);
  double m = f.l1();
  if (const auto* ind = std::get_if<IndicatorFn>(&f.variant())) {
    Estimate e = entropyBody(ind->K, order, budget);
    return order == 1 ? e + (-std::log(ind->c) / n) : e;
  }
  auto rule = levelRule(f.fMax(), levelPanels.geo, levelPanels.uni);
  Budget nb = budget.withSamples(std::max<std::uint64_t>(budget.nSamples / rule.size(), 16));
  std::size_t node = 0;
  if (order == 1) {
    Estimate e = levelQuadrature(
        f,
        [&](double t, const ConvexBody& level) {
          return entropyBody(level, 1, nb.derive("entropy-level", node++)) * (f.levelVolume(t) / m);
        },
        levelPanels);
    return e + (-f.entropy() / (n * m));
  }
  double z = levelQuadrature(f, [&](double t, const ConvexBody&) { double v = f.levelVolume(t); return v * v; }).value;
  return levelQuadrature(
      f,
      [&](double t, const ConvexBody& level) {
        double v = f.levelVolume(t);
        return entropyBody(level, order, nb.derive("entropy-level", node++)) * (v * v / z);
      },
      levelPanels);
}

// ---------------------------------------------------------------- Theorem C right-hand side

struct TheoremCParts {
  Estimate nearDiff;  ///< int int |f(x)-f(y)| chi_[0,1](|x-y|) / |x-y|^n
  Estimate farMin;    ///< int int min{f(x),f(y)} chi_[1,inf)(|x-y|) / |x-y|^n
  Estimate rhs;       ///< -near/2 + far + n omega_n gamma
};

template <class F>
TheoremCParts theoremCPartsOf(const F& fn, const Budget& budget) {
  int n = fn.dim();
  RadialProposal pn;
  pn.power(0.5, -0.5, 0.0, 1.0).power(0.5, 0.0, 0.0, 1.0);
  Estimate nearD = pairIntegralFn(fn, PairWeight::DIFF, PairKernel{-1.0, 0.0, 1.0}, pn, budget.derive("thm-c-near"));
  Estimate farM = Estimate::exact(0.0);
  double S = fn.supportScale();
  if (!fn.boundedSupport() || S > 1.0) {
    double top = std::max(S, 2.0);
    RadialProposal pf;
    pf.power(fn.boundedSupport() ? 1.0 : 0.8, 0.0, 1.0, top);
    if (!fn.boundedSupport()) pf.pareto(0.2, 1.0, top);
    farM = pairIntegralFn(fn, PairWeight::MIN, PairKernel{-1.0, 1.0, kInf}, pf, budget.derive("thm-c-far"));
  }
  Estimate rhs = affine({{-0.5, nearD}, {1.0, farM}}, n * omega(n) * kEulerGamma);
  return {nearD, farM, rhs};
}

inline TheoremCParts theoremCParts(const AnyFn& f, const Budget& budget) {
  return std::visit([&](const auto& g) { return theoremCPartsOf(g.normalized(), budget); }, f);
}

/// int int (min{f(x),f(y)} - e^{-|x-y|}) / |x-y|^n for f normalized to unit mass.
inline Estimate theoremCRightSide(const AnyFn& f, const Budget& budget) { return theoremCParts(f, budget).rhs; }

}  // namespace chordlab
