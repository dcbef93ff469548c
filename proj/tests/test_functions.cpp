#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include <gtest/gtest.h>

#include "chordlab/functions.hpp"
#include "chordlab/suites.hpp"

using namespace chordlab;

namespace {
std::vector<LogConcaveFn> catalog(int n) {
  return {LogConcaveFn::indicator(2.0, ConvexBody::box(Vec(n), Vec(n, 0.7))),
          LogConcaveFn::indicator(0.5, ConvexBody::ball(Vec(n, 0.1), 1.2)),
          LogConcaveFn::gaussian(1.5, Vec(n, -0.2), 0.8), LogConcaveFn::exponential(0.7, 1.3, Vec(n, 0.4))};
}

/// trapezoid of t -> |{f >= t}|^e over a geometric-plus-uniform t grid on (0, fMax)
double levelPowerTrapezoid(const LogConcaveFn& f, double e) {
  std::vector<double> ts{0.0};
  for (int k = 4000; k >= 1; --k) ts.push_back(f.fMax() * std::exp(-k * 40.0 / 4000.0));
  for (int k = 1; k <= 4000; ++k) ts.push_back(f.fMax() * k / 4000.0);
  std::sort(ts.begin(), ts.end());
  double s = 0.0;
  auto vol = [&](double t) {
    if (t <= 0.0) return f.levelVolume(std::max(ts[1], 1e-300));
    return f.levelVolume(t);
  };
  for (std::size_t i = 1; i < ts.size(); ++i)
    s += 0.5 * (ts[i] - ts[i - 1]) * (std::pow(vol(ts[i - 1]), e) + std::pow(vol(ts[i]), e));
  return s;
}
}  // namespace

TEST(Eval, Examples) {
  auto ind = LogConcaveFn::indicator(3.0, fixtures::unitBall(2));
  EXPECT_EQ(ind.eval(Vec{0.2, 0.2}), 3.0);
  EXPECT_EQ(ind.eval(Vec{2.0, 0.0}), 0.0);
  EXPECT_EQ(LogConcaveFn::gaussian(1.0, Vec(3), 1.0).eval(Vec(3)), 1.0);
  auto ex = LogConcaveFn::exponential(1.0, 1.7, Vec(2));
  Vec x{0.3, -0.4};
  EXPECT_NEAR(ex.eval(x), std::exp(-1.7 * 0.5), 1e-15);
}

TEST(SupLevelBody, Examples) {
  auto g = LogConcaveFn::gaussian(1.0, Vec(2), 1.0);
  auto K = *g.supLevelBody(std::exp(-0.5));
  ASSERT_TRUE(K.isBall());
  EXPECT_NEAR(std::get<Ball>(K.shape()).radius, 1.0, 1e-14);
  auto ind = LogConcaveFn::indicator(2.0, fixtures::unitBall(3));
  EXPECT_NEAR(ind.supLevelBody(1.0)->volume(), omega(3), 1e-14);
  auto ex = LogConcaveFn::exponential(1.0, 1.0, Vec(2));
  EXPECT_NEAR(std::get<Ball>(ex.supLevelBody(std::exp(-2.0))->shape()).radius, 2.0, 1e-14);
  EXPECT_FALSE(g.supLevelBody(1.0).has_value());
  EXPECT_THROW(g.supLevelBody(1.5), std::out_of_range);
  EXPECT_THROW(g.supLevelBody(0.0), std::out_of_range);
}

/// 48 comparisons: at most one beyond 3 sigma, none beyond 4 sigma.
TEST(SupLevelBody, VolumeMatchesRejectionSampling) {
  Rng rng(77);
  int beyond3 = 0, comparisons = 0;
  for (int n : {1, 2, 3}) {
    for (const auto& f : catalog(n)) {
      double R = f.supportScale();
      Vec c = f.center();
      double boxVol = std::pow(2.0 * R, n);
      for (double frac : {0.05, 0.3, 0.7, 0.95}) {
        double t = frac * f.fMax();
        const int N = 100000;
        int hits = 0;
        for (int i = 0; i < N; ++i) {
          Vec x = c;
          for (int d = 0; d < n; ++d) x[d] += R * (2.0 * rng.uniform() - 1.0);
          hits += f.eval(x) >= t;
        }
        double p = static_cast<double>(hits) / N;
        double se = boxVol * std::sqrt(std::max(p * (1 - p), 1.0 / N) / N);
        double z = std::abs(p * boxVol - f.levelVolume(t)) / se;
        EXPECT_LT(z, 4.0) << f.kind() << " n=" << n << " t=" << t;
        beyond3 += z > 3.0;
        ++comparisons;
      }
    }
  }
  EXPECT_EQ(comparisons, 48);
  EXPECT_LE(beyond3, 1);
}

TEST(LpQuasiNorm, Examples) {
  auto K = fixtures::cube(2);
  auto ind = LogConcaveFn::indicator(3.0, K);
  for (double p : {0.25, 0.5, 1.0})
    EXPECT_NEAR(ind.lpQuasiNorm(p), 3.0 * std::pow(K.volume(), 1.0 / p), 1e-12 * std::pow(K.volume(), 1.0 / p) * 3);
  EXPECT_NEAR(LogConcaveFn::gaussian(1.0, Vec(1), 1.0).lpQuasiNorm(1.0), std::sqrt(2.0 * kPi), 1e-14);
  auto g = LogConcaveFn::gaussian(1.0, Vec(2), 1.0);
  double prev = kInf;
  for (double a : {0.5, 0.2, 0.05}) {
    double d = std::abs(g.lpQuasiNorm(2.0 / (2.0 + a)) - g.l1());
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev / g.l1(), 0.15);
  EXPECT_THROW(g.lpQuasiNorm(0.0), std::invalid_argument);
  EXPECT_THROW(g.lpQuasiNorm(kInf), std::invalid_argument);
}

TEST(LpQuasiNorm, ClosedFormsMatchQuadrature) {
  /// radial quadrature oracle of int f^p in n = 2
  for (const auto& f : {LogConcaveFn::gaussian(1.5, Vec(2), 0.8), LogConcaveFn::exponential(0.7, 1.3, Vec(2))}) {
    for (double p : {0.5, 2.0 / 3.0, 1.0, 2.0}) {
      double s = 0.0, h = 1e-3;
      for (double r = 0.5 * h; r < 60.0; r += h) s += 2.0 * kPi * r * std::pow(f.eval(Vec{r, 0.0} + f.center()), p) * h;
      EXPECT_NEAR(f.powerIntegral(p), s, 1e-6 * s) << f.kind() << " p=" << p;
    }
  }
}

TEST(Entropy, Examples) {
  auto K = fixtures::ellipsoid(2);
  EXPECT_EQ(LogConcaveFn::indicator(1.0, K).entropy(), 0.0);
  EXPECT_NEAR(LogConcaveFn::indicator(2.5, K).entropy(), 2.5 * K.volume() * std::log(2.5), 1e-13);
  EXPECT_NEAR(LogConcaveFn::gaussian(1.0, Vec(1), 1.0).entropy(), -0.5 * std::sqrt(2.0 * kPi), 1e-14);
  /// exponential in n = 2: int e^{-ar}(-ar) 2 pi r dr = -2 pi * 2 / a^2
  auto ex = LogConcaveFn::exponential(1.0, 1.3, Vec(2));
  EXPECT_NEAR(ex.entropy(), -4.0 * kPi / (1.3 * 1.3), 1e-12);
}

TEST(Scale, Examples) {
  auto f = LogConcaveFn::indicator(2.0, ConvexBody::ball(Vec(3), 1.5));
  auto g = f.scaled(3.0);
  ASSERT_TRUE(g.isIndicator());
  EXPECT_NEAR(std::get<Ball>(std::get<IndicatorFn>(g.variant()).K.shape()).radius, 0.5, 1e-14);
  for (int n : {1, 2, 3}) {
    for (const auto& h : catalog(n)) {
      for (double lam : {0.5, 2.0, 3.0}) {
        auto hl = h.scaled(lam);
        EXPECT_NEAR(hl.l1() / h.l1(), std::pow(lam, -n), 1e-12);
        EXPECT_NEAR(hl.entropy(), std::pow(lam, -n) * h.entropy(), 1e-12 * std::max(1.0, std::abs(h.entropy())));
        Vec x(n, 0.13);
        EXPECT_NEAR(hl.eval(x), h.eval(x * lam), 1e-14);
      }
    }
  }
}

TEST(Invariants, LevelPowerBoundedByQuasiNorm) {
  for (int n : {1, 2, 3}) {
    for (const auto& f : catalog(n)) {
      for (double a : {0.5, 1.0}) {
        double lhs = levelPowerTrapezoid(f, (n + a) / n);
        double rhs = f.lpQuasiNorm(n / (n + a));
        if (f.isIndicator()) EXPECT_NEAR(lhs, rhs, 1e-9 * rhs) << f.kind();
        else EXPECT_LE(lhs, rhs * (1 + 1e-6)) << f.kind() << " n=" << n << " a=" << a;
      }
    }
  }
}

TEST(Invariants, PthMeanMonotone) {
  auto K = fixtures::cube(2);
  auto f = LogConcaveFn::gaussian(1.0, Vec{0.3, -0.2}, 0.6);
  Rng rng(4);
  std::vector<double> vals;
  for (int i = 0; i < 20000; ++i) vals.push_back(f.eval(K.samplePoint(rng)));
  auto mean = [&](double p) {
    double s = 0.0;
    if (p == 0.0) {
      for (double v : vals) s += std::log(v);
      return std::exp(s / vals.size());
    }
    for (double v : vals) s += std::pow(v, p);
    return std::pow(s / vals.size(), 1.0 / p);
  };
  std::vector<double> ps{-2.0, -0.5, 0.0, 0.3, 1.0, 2.5, 6.0};
  for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LE(mean(ps[i - 1]), mean(ps[i]) * (1 + 1e-12));
}

TEST(GridFn, LayerCakeIsExact) {
  auto f = fixtures::twoBump();
  std::vector<double> levels = f.values();
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double sweep = 0.0, prev = 0.0;
  for (double v : levels) {
    if (v <= 0.0) continue;
    sweep += (v - prev) * f.levelVolume(v);
    prev = v;
  }
  double direct = 0.0;
  for (double v : f.values()) direct += v;
  direct *= f.cellVolume();
  EXPECT_NEAR(sweep, direct, 1e-12 * direct);
  EXPECT_NEAR(f.l1(), direct, 1e-12 * direct);
}

TEST(GridFn, EvalAndSampling) {
  GridFn f(Vec{0.0, 0.0}, 0.5, {2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(f.eval(Vec{0.1, 0.1}), 1.0);
  EXPECT_EQ(f.eval(Vec{0.1, 1.2}), 3.0);
  EXPECT_EQ(f.eval(Vec{0.6, 0.6}), 5.0);
  EXPECT_EQ(f.eval(Vec{1.01, 0.1}), 0.0);
  EXPECT_EQ(f.fMax(), 6.0);
  Rng rng(1);
  std::map<double, int> counts;
  const int N = 210000;
  for (int i = 0; i < N; ++i) counts[f.eval(f.sample(rng))]++;
  for (auto [v, c] : counts) EXPECT_NEAR(static_cast<double>(c) / N, v / 21.0, 4.0 * std::sqrt(v / 21.0 / N));
  EXPECT_THROW(GridFn(Vec{0.0}, 0.5, {2}, {1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(GridFn(Vec{0.0}, 0.5, {3}, {1.0, 1.0}), std::invalid_argument);
}

TEST(Schwarz, PermutationInvariants) {
  auto f = fixtures::twoBump();
  auto s = schwarzSymmetral(f);
  auto a = f.values(), b = s.values();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  for (double p : {0.5, 1.0}) EXPECT_EQ(s.lpQuasiNorm(p), f.lpQuasiNorm(p));
  EXPECT_EQ(s.entropy(), f.entropy());
  /// radially non-increasing about the grid center
  Vec c = s.center();
  for (std::size_t i = 0; i < s.values().size(); ++i)
    for (std::size_t j = 0; j < s.values().size(); j += 37)
      if (norm(s.cellCenter(i) - c) < norm(s.cellCenter(j) - c) - 1e-12) { EXPECT_GE(s.values()[i], s.values()[j]); }
}

TEST(Schwarz, IndicatorPatchBecomesCenteredQuasiBall) {
  auto patch = fixtures::gridFrom([](double x, double y) { return (x > 0.5 && x < 1.7 && y > -1.5 && y < -0.4) ? 1.0 : 0.0; }, 24);
  auto s = schwarzSymmetral(patch);
  EXPECT_EQ(s.l1(), patch.l1());
  double rmax = 0.0, rminOutside = kInf;
  Vec c = s.center();
  for (std::size_t i = 0; i < s.values().size(); ++i) {
    double r = norm(s.cellCenter(i) - c);
    if (s.values()[i] > 0) rmax = std::max(rmax, r);
    else rminOutside = std::min(rminOutside, r);
  }
  EXPECT_LE(rmax, rminOutside + 1e-12);
}

TEST(FunctionSpec, InlineAndFileGrids) {
  auto dir = std::filesystem::temp_directory_path() / "chordlab_fnspec";
  std::filesystem::create_directories(dir);
  writeFloat64File(dir / "v.f64", {0.0, 1.0, 2.0, 0.5});
  auto j = nlohmann::json::parse(R"({"type":"grid","origin":[0,0],"spacing":0.5,"shape":[2,2],"values":"v.f64"})");
  auto f = std::get<GridFn>(parseFunction(j, dir));
  EXPECT_EQ(f.eval(Vec{0.7, 0.7}), 0.5);
  auto inl = std::get<GridFn>(parseFunction(nlohmann::json::parse(R"({"type":"grid","origin":[0],"spacing":1,"shape":[2],"values":[1,3]})")));
  EXPECT_EQ(inl.l1(), 4.0);
  auto g = std::get<LogConcaveFn>(parseFunction(nlohmann::json::parse(R"({"type":"gaussian","center":[0,0],"width":2,"scale":3})")));
  EXPECT_EQ(g.fMax(), 3.0);
  EXPECT_THROW(parseFunction(nlohmann::json::parse(R"({"type":"grid","origin":[0],"spacing":1,"shape":[3],"values":"missing.f64"})"), dir),
               std::exception);
  EXPECT_THROW(parseFunction(nlohmann::json::parse(R"({"type":"gaussian","center":[0],"width":-1})")), std::invalid_argument);
  std::filesystem::remove_all(dir);
}
