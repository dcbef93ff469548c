#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chordlab/verify.hpp"

namespace chordlab {

// ---------------------------------------------------------------- fixtures

namespace fixtures {

inline ConvexBody unitBall(int n) { return ConvexBody::ball(Vec(n), 1.0); }
inline ConvexBody cube(int n) { return ConvexBody::box(Vec(n), Vec(n, 1.0)); }

/// semiaxes (1, 0.5, 1, 1, ...)
inline ConvexBody ellipsoid(int n) {
  Vec a(n, 1.0);
  if (n >= 2) a[1] = 0.5;
  return ConvexBody::ellipsoid(Vec(n), a);
}

inline LogConcaveFn gaussian(int n) { return LogConcaveFn::gaussian(1.0, Vec(n), 1.0); }

/// Cell-center grid on [-L, L]^2 with m cells per side.
inline GridFn gridFrom(const std::function<double(double, double)>& g, int m = 48, double L = 2.4) {
  double h = 2.0 * L / m;
  std::vector<double> v(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(i) * m + j] = g(-L + (i + 0.5) * h, -L + (j + 0.5) * h);
  return GridFn(Vec{-L, -L}, h, {m, m}, std::move(v));
}

/// Two separated, unequal bumps off the grid center.
inline GridFn twoBump() {
  return gridFrom([](double x, double y) {
    double a = std::exp(-((x + 1.1) * (x + 1.1) + (y - 0.3) * (y - 0.3)) / (2 * 0.35 * 0.35));
    double b = 0.6 * std::exp(-((x - 1.0) * (x - 1.0) + (y + 0.6) * (y + 0.6)) / (2 * 0.3 * 0.3));
    double v = a + b;
    return v > 1e-3 ? v : 0.0;
  });
}

/// Radially decreasing about the grid center.
inline GridFn radialBump() {
  return gridFrom([](double x, double y) {
    double r2 = x * x + y * y;
    double v = std::exp(-r2 / (2 * 0.5 * 0.5));
    return v > 1e-3 ? v : 0.0;
  });
}

}  // namespace fixtures

// ---------------------------------------------------------------- suites

inline const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names{"identities", "inequalities", "limits", "rearrangement", "all"};
  return names;
}

namespace detail {
using Job = std::function<VerificationReport()>;

inline void identityJobs(int n, const Budget& b, std::vector<Job>& jobs) {
  auto ball = fixtures::unitBall(n), box = fixtures::cube(n), ell = fixtures::ellipsoid(n);
  AnyFn g = fixtures::gaussian(n);
  jobs.push_back([=] { return verifyIdentity("XU32", Input(box), b); });
  jobs.push_back([=] { return verifyIdentity("XU32_FN", Input(g), b); });
  for (const auto& K : {ball, box, ell}) {
    jobs.push_back([=] { return verifyIdentity("CROFTON", Input(K), b); });
    jobs.push_back([=] { return verifyIdentity("POINCARE_HADWIGER", Input(K), b); });
  }
  jobs.push_back([=] { return verifyIdentity("CAUCHY", Input(ball), b); });
  jobs.push_back([=] { return verifyIdentity("CAUCHY", Input(box), b); });
  jobs.push_back([=] { return verifyIdentity("CROFTON_FN", Input(g), b); });
  jobs.push_back([=] { return verifyIdentity("POINCARE_HADWIGER_FN", Input(g), b); });
  jobs.push_back([=] { return verifyIdentity("CHORD_RAK", Input(box), b, 1.0); });
  jobs.push_back([=] { return verifyIdentity("E1_SCALE", Input(g), b, 2.0); });
  jobs.push_back([=] { return verifyIdentity("ENP1_SCALE", Input(g), b, 2.0); });
}

inline void inequalityJobs(int n, const Budget& b, std::vector<Job>& jobs) {
  auto ball = fixtures::unitBall(n), box = fixtures::cube(n);
  AnyFn g = fixtures::gaussian(n);
  std::vector<Input> inputs{Input(ball), Input(box), Input(g)};
  for (double a : {0.5, 1.0, n - 0.5})
    for (const auto& in : inputs) jobs.push_back([=] { return verifyTheoremA(in, a, b); });
  for (double a : {n + 0.5, n + 2.0})
    for (const auto& in : inputs) jobs.push_back([=] { return verifyTheoremB(in, a, b); });
  for (double a : {-0.5, -0.25})
    for (const auto& in : inputs) jobs.push_back([=] { return verifyFracSobolev(in, a, b); });
  for (double a : {-0.5, 1.0, n + 1.0}) {
    jobs.push_back([=] { return verifyChordIsoperimetric(Input(ball), a, b); });
    jobs.push_back([=] { return verifyChordIsoperimetric(Input(box), a, b); });
  }
  for (int order : {1, n + 1})
    for (const auto& in : inputs) jobs.push_back([=] { return verifyEntropy(in, order, b); });
  for (const auto& in : inputs) jobs.push_back([=] { return verifyTheoremC(in, b); });
}

inline void limitJobs(int n, const Budget& b, std::vector<Job>& jobs) {
  auto ball = fixtures::unitBall(n), box = fixtures::cube(n);
  jobs.push_back([=] { return verifyLimit("I1", Input(ball), {}, b); });
  jobs.push_back([=] { return verifyLimit("MS", Input(ball), {}, b); });
  jobs.push_back([=] { return verifyLimit("I0", Input(ball), {}, b); });
  jobs.push_back([=] { return verifyLimit("I0", Input(box), {}, b); });
}

inline void rearrangementJobs(const Budget& b, std::vector<Job>& jobs) {
  for (const auto& f : {fixtures::twoBump(), fixtures::radialBump()})
    for (const auto& id : rearrangementIds()) jobs.push_back([=] { return verifyRearrangement(id, f, b); });
}
}  // namespace detail

/// Runs a named suite; reports are ordered by check id (stable within an id).
inline std::vector<VerificationReport> runSuite(const std::string& name, int n, const Budget& budget) {
  std::vector<detail::Job> jobs;
  bool all = name == "all";
  if (all || name == "identities") detail::identityJobs(n, budget, jobs);
  if (all || name == "inequalities") detail::inequalityJobs(n, budget, jobs);
  if (all || name == "limits") detail::limitJobs(n, budget, jobs);
  if (all || name == "rearrangement") detail::rearrangementJobs(budget, jobs);
  if (std::find(suiteNames().begin(), suiteNames().end(), name) == suiteNames().end())
    throw std::invalid_argument("unknown suite '" + name + "'");
  std::vector<VerificationReport> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.checkId < b.checkId; });
  return out;
}

}  // namespace chordlab
