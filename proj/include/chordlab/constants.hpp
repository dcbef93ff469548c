#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>

namespace chordlab {

inline constexpr double kPi = boost::math::constants::pi<double>();
inline constexpr double kEulerGamma = boost::math::constants::euler<double>();

enum class Regime { NEG, ZERO, SUB, EQN, SUPER };

inline const char* regimeName(Regime r) {
  switch (r) {
    case Regime::NEG: return "NEG";
    case Regime::ZERO: return "ZERO";
    case Regime::SUB: return "SUB";
    case Regime::EQN: return "EQN";
    case Regime::SUPER: return "SUPER";
  }
  return "?";
}

/// Exponent alpha in (-1, inf) tagged with its regime for a given n.
/// ZERO and EQN are exact tags: only alpha == 0.0 and alpha == n hit them.
struct AlphaParam {
  double alpha = 0.0;
  Regime regime = Regime::ZERO;

  static AlphaParam make(int n, double a) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(a > -1.0) || !std::isfinite(a)) throw std::invalid_argument("alpha must lie in (-1, inf)");
    AlphaParam p{a, Regime::SUPER};
    if (a < 0.0) p.regime = Regime::NEG;
    else if (a == 0.0) p.regime = Regime::ZERO;
    else if (a < n) p.regime = Regime::SUB;
    else if (a == static_cast<double>(n)) p.regime = Regime::EQN;
    return p;
  }
};

/// Volume of the unit ball, real index s >= 0.
inline double omega(double s) {
  if (s < 0.0) throw std::invalid_argument("omega: negative index");
  return std::exp(0.5 * s * std::log(kPi) - std::lgamma(0.5 * s + 1.0));
}

inline double logOmega(double s) { return 0.5 * s * std::log(kPi) - std::lgamma(0.5 * s + 1.0); }

/// |alpha| * sigma(n, alpha): analytic in alpha > -1, equals n*omega_n at 0.
inline double absAlphaSigma(int n, double a) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(a > -1.0)) throw std::invalid_argument("alpha must exceed -1");
  double lg = std::log(static_cast<double>(n)) + a * std::log(2.0) + 0.5 * (n - a - 1.0) * std::log(kPi) +
              std::lgamma(0.5 * (a + 1.0)) + (a / n) * std::lgamma(0.5 * n + 1.0) -
              std::lgamma(0.5 * (n + a) + 1.0);
  return std::exp(lg);
}

inline double sigma(int n, double a) {
  if (a == 0.0) throw std::invalid_argument("sigma: alpha = 0 has no finite constant (use sigmaBar0)");
  if (!(a > -1.0)) throw std::invalid_argument("sigma: alpha must exceed -1");
  return absAlphaSigma(n, a) / std::abs(a);
}

/// I_{alpha+1}(B^n) = 2^{alpha+1} omega_{n+alpha} / omega_{alpha+1}, alpha >= -1.
inline double ballChordPower(int n, double a) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(a >= -1.0)) throw std::invalid_argument("ballChordPower: alpha must be >= -1");
  return std::exp((a + 1.0) * std::log(2.0) + logOmega(n + a) - logOmega(a + 1.0));
}

inline double sigmaTilde(int n, double a) {
  return ballChordPower(n, a) * std::exp(-((n + a) / n) * logOmega(n));
}

/// (1/(n omega_n)) d/dalpha (alpha sigma) at 0, via digamma.
inline double sigmaBar0(int n) {
  using boost::math::digamma;
  return std::log(2.0) - 0.5 * std::log(kPi) + 0.5 * digamma(0.5) + std::lgamma(0.5 * n + 1.0) / n -
         0.5 * digamma(0.5 * n + 1.0);
}

/// Same quantity by central difference of |alpha| sigma.
inline double sigmaBar0FiniteDifference(int n, double h = 1e-5) {
  double d = (absAlphaSigma(n, h) - absAlphaSigma(n, -h)) / (2.0 * h);
  return d / (n * omega(n));
}

/// Constant of the logarithmic inequality: d/dalpha(alpha sigma)|0 - n omega_n Gamma'(1).
inline double sigmaZero(int n) { return n * omega(n) * (sigmaBar0(n) + kEulerGamma); }

namespace detail {
inline double tanhSinh(auto f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b, std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-3);
}
inline double expSinh(auto f, double a) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity(),
                     std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-3);
}
}  // namespace detail

/// C = int_0^1 (1-e^-r)/r dr + int_1^inf e^-r/r dr
inline double thetaConstantC() {
  double near = detail::tanhSinh([](double r) { return r == 0.0 ? 1.0 : -std::expm1(-r) / r; }, 0.0, 1.0);
  double far = detail::expSinh([](double r) { return std::exp(-r) / r; }, 1.0);
  return near + far;
}

/// int over lines meeting B^n of g(chord); reduces to a 1-D integral over the (n-1)-ball of offsets.
template <class G>
double ballLineIntegral(int n, G g) {
  if (n == 1) return g(2.0);
  double s = detail::tanhSinh(
      [&](double phi) {
        double c = std::cos(phi);
        if (c <= 0.0) return 0.0;
        return std::pow(std::sin(phi), n - 2) * c * g(2.0 * c);
      },
      0.0, 0.5 * kPi);
  return (n - 1) * omega(n - 1) * s;
}

/// E_1(B^n) or E_{n+1}(B^n), deterministic.
inline double ballEntropy(int n, int order) {
  if (order != 1 && order != n + 1) throw std::invalid_argument("entropy order must be 1 or n+1");
  double j = ballLineIntegral(n, [&](double c) { return c > 0.0 ? std::pow(c, order) * std::log(c) : 0.0; });
  return -j / omega(n);
}

struct SharpConstants {
  int n = 0;
  double alpha = 0.0;
  Regime regime = Regime::ZERO;
  double omegaN = 0.0;
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double sigmaTilde = 0.0;
  double ballChordPower = 0.0;
  double sigmaBar0 = 0.0;
  double sigmaBar0FD = 0.0;
  double sigmaZero = 0.0;
};

inline SharpConstants sharpConstants(int n, double a) {
  AlphaParam p = AlphaParam::make(n, a);
  SharpConstants s;
  s.n = n;
  s.alpha = a;
  s.regime = p.regime;
  s.omegaN = omega(n);
  if (a != 0.0) s.sigma = sigma(n, a);
  s.sigmaTilde = sigmaTilde(n, a);
  s.ballChordPower = ballChordPower(n, a);
  s.sigmaBar0 = sigmaBar0(n);
  s.sigmaBar0FD = sigmaBar0FiniteDifference(n);
  s.sigmaZero = sigmaZero(n);
  return s;
}

}  // namespace chordlab
