#include <cmath>

#include <boost/math/special_functions/ellint_2.hpp>
#include <gtest/gtest.h>

#include "chordlab/geometry.hpp"
#include "chordlab/suites.hpp"

using namespace chordlab;

namespace {
ConvexBody boxAsPolytope(const Vec& c, const Vec& h) {
  int n = c.dim();
  std::vector<Halfspace> hs;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::unit(n, i);
    hs.push_back({e, c[i] + h[i]});
    hs.push_back({-e, -c[i] + h[i]});
  }
  return ConvexBody::polytope(hs);
}

AffineLine line(const Vec& base, const Vec& u) { return {u, along(base, -dot(base, u), u)}; }

/// Lens area of two unit disks at distance d.
double lens2(double d) { return 2.0 * std::acos(d / 2.0) - d * std::sqrt(1.0 - d * d / 4.0); }

std::vector<ConvexBody> zoo(int n) {
  Vec half(n, 1.0);
  if (n >= 2) half[1] = 0.4;
  return {ConvexBody::ball(Vec(n, 0.2), 1.3), ConvexBody::box(Vec(n), half), fixtures::ellipsoid(n),
          boxAsPolytope(Vec(n, -0.3), half)};
}
}  // namespace

TEST(Contains, Examples) {
  auto ball = fixtures::unitBall(3);
  EXPECT_TRUE(ball.contains(Vec(3)));
  EXPECT_TRUE(ball.contains(Vec::unit(3, 0)));
  auto box = fixtures::cube(2);
  EXPECT_FALSE(box.contains(Vec{1.0001, 0.0}));
  EXPECT_TRUE(box.contains(Vec{1.0, -1.0}));
  EXPECT_THROW(box.contains(Vec(3)), std::invalid_argument);
}

TEST(ChordLength, Examples) {
  auto disk = fixtures::unitBall(2);
  EXPECT_NEAR(disk.chordLength(line(Vec(2), Vec{0.6, 0.8})), 2.0, 1e-14);
  EXPECT_NEAR(disk.chordLength(line(Vec{0.0, 0.6}, Vec{1.0, 0.0})), 1.6, 1e-14);
  EXPECT_NEAR(fixtures::cube(2).chordLength(line(Vec{0.0, 0.3}, Vec{1.0, 0.0})), 2.0, 1e-14);
  EXPECT_EQ(disk.chordLength(line(Vec{0.0, 1.5}, Vec{1.0, 0.0})), 0.0);
}

TEST(ChordLength, BoundedSymmetricAndPolytopeMatchesBox) {
  for (int n : {2, 3, 4}) {
    Vec c(n, 0.1), h(n, 0.7);
    h[0] = 1.2;
    auto box = ConvexBody::box(c, h);
    auto poly = boxAsPolytope(c, h);
    Rng rng(42 + n);
    for (const auto& K : zoo(n)) {
      for (int i = 0; i < 2000; ++i) {
        auto s = sampleLine(K.boundingRadius(), K.boundingCenter(), rng);
        double len = K.chordLength(s.line);
        EXPECT_LE(len, 2.0 * K.boundingRadius() + 1e-12);
        EXPECT_NEAR(len, K.chordLength(AffineLine{-s.line.u, s.line.base}), 1e-12);
      }
    }
    for (int i = 0; i < 10000; ++i) {
      auto s = sampleLine(box.boundingRadius(), box.boundingCenter(), rng);
      ASSERT_NEAR(box.chordLength(s.line), poly.chordLength(s.line), 1e-10);
    }
  }
}

TEST(Radial, ExamplesAndDecomposition) {
  auto disk = fixtures::unitBall(2);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(disk.radial(Vec(2), rng.direction(2)), 1.0, 1e-14);
  EXPECT_NEAR(disk.radial(Vec{0.5, 0.0}, Vec{1.0, 0.0}), 0.5, 1e-14);
  for (int n : {2, 3}) {
    for (const auto& K : zoo(n)) {
      for (int i = 0; i < 500; ++i) {
        Vec x = K.samplePoint(rng);
        Vec u = rng.direction(n);
        double a = K.radial(x, u), b = K.radial(x, -u);
        EXPECT_TRUE(std::isfinite(a));
        EXPECT_NEAR(a + b, K.chordLength(line(x, u)), 1e-10);
      }
    }
  }
  EXPECT_THROW(disk.radial(Vec{2.0, 0.0}, Vec{1.0, 0.0}), std::invalid_argument);
}

TEST(SamplePoint, MeanAndAcceptance) {
  Vec c{0.5, -1.0, 2.0};
  auto K = ConvexBody::ball(c, 1.0);
  Rng rng(11);
  const int N = 100000;
  Vec mean(3);
  for (int i = 0; i < N; ++i) mean += K.samplePoint(rng);
  mean *= 1.0 / N;
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(mean[d], c[d], 4.0 / std::sqrt(N));
  /// proposals from the bounding ball always land in a ball
  for (int i = 0; i < 10000; ++i) EXPECT_TRUE(K.contains(along(K.boundingCenter(), K.boundingRadius(), rng.inBall(3))));
}

TEST(SamplePoint, BoxVolumeFromAcceptance) {
  auto K = ConvexBody::box(Vec(2), Vec{1.0, 2.0});
  Rng rng(12);
  const int N = 200000;
  int hits = 0;
  for (int i = 0; i < N; ++i) hits += K.contains(along(K.boundingCenter(), K.boundingRadius(), rng.inBall(2)));
  double p = static_cast<double>(hits) / N;
  double area = omega(2) * K.boundingRadius() * K.boundingRadius();
  EXPECT_NEAR(p * area, 8.0, 3.0 * area * std::sqrt(p * (1 - p) / N));
}

TEST(Measures, VolumeAndSurface) {
  EXPECT_NEAR(fixtures::unitBall(3).volume(), 4.0 * kPi / 3.0, 1e-13);
  EXPECT_NEAR(fixtures::unitBall(3).surfaceArea(), 4.0 * kPi, 1e-13);
  EXPECT_NEAR(fixtures::cube(3).volume(), 8.0, 1e-13);
  EXPECT_NEAR(fixtures::cube(3).surfaceArea(), 24.0, 1e-13);
  auto ell = ConvexBody::ellipsoid(Vec(2), Vec{1.0, 0.5});
  EXPECT_NEAR(ell.volume(), kPi * 0.5, 1e-13);
  double perimeter = 4.0 * boost::math::ellint_2(std::sqrt(1.0 - 0.25));
  auto s = ell.surfaceEstimate();
  EXPECT_NEAR(s.value, perimeter, 3.0 * s.stdError + 1e-8);
  /// equilateral triangle with inradius 0.5
  auto tri = ConvexBody::polytope({{Vec{0.0, -1.0}, 0.5},
                                   {Vec{std::sqrt(3.0) / 2, 0.5}, 0.5},
                                   {Vec{-std::sqrt(3.0) / 2, 0.5}, 0.5}});
  double side = std::sqrt(3.0);
  EXPECT_NEAR(tri.volume(), std::sqrt(3.0) / 4 * side * side, 1e-12);
  EXPECT_NEAR(tri.surfaceArea(), 3 * side, 1e-12);
  auto cube3 = boxAsPolytope(Vec(3), Vec(3, 1.0));
  auto v = cube3.volumeEstimate();
  EXPECT_NEAR(v.value, 8.0, 3.0 * v.stdError + 1e-9);
}

TEST(Measures, ScalingAndTranslation) {
  for (const auto& K : zoo(3)) {
    auto L = K.scaled(2.0);
    EXPECT_NEAR(L.volumeEstimate().value, K.volumeEstimate().value / 8.0,
                3 * (L.volumeEstimate().stdError + K.volumeEstimate().stdError / 8) + 1e-12);
    auto T = K.translated(Vec{1.0, -2.0, 0.5});
    EXPECT_TRUE(T.contains(K.boundingCenter() + Vec{1.0, -2.0, 0.5}));
  }
  EXPECT_THROW(fixtures::cube(2).scaled(0.0), std::invalid_argument);
}

TEST(Covariogram, LensFormulaAndMonteCarloOracle) {
  auto disk = fixtures::unitBall(2);
  EXPECT_NEAR(*disk.covariogramExact(Vec(2)), kPi, 1e-13);
  Rng rng(3);
  for (double d : {0.5, 1.0, 1.5}) {
    Vec z{d * 0.6, d * 0.8};
    EXPECT_NEAR(*disk.covariogramExact(z), lens2(d), 1e-12);
    /// independent rejection count in the square [-1,1]^2
    const int N = 400000;
    int hits = 0;
    for (int i = 0; i < N; ++i) {
      Vec x{2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
      hits += (norm(x) <= 1.0 && norm(x - z) <= 1.0);
    }
    double p = static_cast<double>(hits) / N;
    EXPECT_NEAR(4.0 * p, lens2(d), 3.0 * 4.0 * std::sqrt(p * (1 - p) / N));
  }
  EXPECT_EQ(*disk.covariogramExact(Vec{2.1, 0.0}), 0.0);
}

TEST(Covariogram, ExactMatchesMonteCarloForAllShapes) {
  Budget b{200000, 9, 4};
  for (int n : {2, 3}) {
    for (const auto& K : zoo(n)) {
      Vec z(n, 0.3);
      auto mc = K.covariogramMC(z, b);
      double expected = K.covariogramExact(z) ? *K.covariogramExact(z) : K.covariogramMC(z, b.derive("ref")).value;
      EXPECT_NEAR(mc.value, expected, 4.0 * mc.stdError * std::sqrt(2.0) + 1e-12) << K.kind();
      auto zero = K.covariogram(Vec(n), b);
      EXPECT_NEAR(zero.value, K.volume(), 4.0 * zero.stdError + 1e-9 * K.volume());
      Vec far(n);
      far[0] = 2.01 * K.boundingRadius();
      EXPECT_EQ(K.covariogram(far, b).value, 0.0);
    }
  }
}

TEST(Covariogram, NonIncreasingAlongRays) {
  Rng rng(8);
  for (int n : {2, 3}) {
    for (const auto& K : zoo(n)) {
      if (!K.covariogramExact(Vec(n))) continue;
      for (int k = 0; k < 20; ++k) {
        Vec u = rng.direction(n);
        double prev = *K.covariogramExact(Vec(n));
        for (int i = 1; i <= 60; ++i) {
          double g = *K.covariogramExact(u * (i * K.boundingRadius() / 30.0));
          EXPECT_LE(g, prev + 1e-12);
          prev = g;
        }
      }
    }
  }
}

TEST(ShapeSpec, ParsesAllTypesAndRejectsGarbage) {
  auto j = nlohmann::json::parse(R"({"type":"ellipsoid","center":[0,0],"semiaxes":[1,0.5],"rotation":[[0,-1],[1,0]]})");
  auto K = parseShape(j);
  EXPECT_TRUE(K.contains(Vec{0.0, 0.9}));
  EXPECT_FALSE(K.contains(Vec{0.9, 0.0}));
  EXPECT_THROW(parseShape(nlohmann::json::parse(R"({"type":"torus"})")), std::invalid_argument);
  EXPECT_THROW(parseShape(nlohmann::json::parse(R"({"type":"ball","radius":1})")), std::invalid_argument);
  EXPECT_THROW(ConvexBody::ball(Vec(2), -1.0), std::invalid_argument);
  EXPECT_THROW(ConvexBody::polytope({{Vec{1.0, 0.0}, 1.0}, {Vec{-1.0, 0.0}, 1.0}}), std::invalid_argument);
  auto round = parseShape(nlohmann::json::parse(K.toJson().dump()));
  EXPECT_EQ(round.toJson().dump(), K.toJson().dump());
}
