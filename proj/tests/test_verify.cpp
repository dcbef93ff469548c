#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "chordlab/suites.hpp"
#include "chordlab/verify.hpp"

using namespace chordlab;

namespace {
const Budget kBudget{400000, 7, 4};

double zOf(const VerificationReport& r) { return r.zScore.value_or(0.0); }

void expectEquality(const VerificationReport& r) {
  EXPECT_EQ(r.verdict, Verdict::PASS) << r.checkId << " " << r.note;
  EXPECT_LE(std::abs(zOf(r)), 3.0) << r.checkId << " lhs=" << r.lhs.value << " rhs=" << r.rhs.value;
}
void expectStrict(const VerificationReport& r) {
  EXPECT_EQ(r.verdict, Verdict::PASS) << r.checkId;
  EXPECT_GT(zOf(r), 3.0) << r.checkId << " lhs=" << r.lhs.value << " rhs=" << r.rhs.value;
}

Input ballIn(int n, double c = 1.0) { return Input(AnyFn(LogConcaveFn::indicator(c, fixtures::unitBall(n)))); }
Input boxIn(int n) { return Input(fixtures::cube(n)); }
Input gaussIn(int n) { return Input(AnyFn(fixtures::gaussian(n))); }
}  // namespace

TEST(Verdict, RuleMatchesDefinitionOnRandomCases) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> val(-10.0, 10.0), se(0.0, 3.0);
  for (int i = 0; i < 5000; ++i) {
    Estimate l{val(gen), se(gen), 100, kInf}, r{val(gen), se(gen), 100, kInf};
    auto kind = i % 2 ? CheckKind::IDENTITY : CheckKind::INEQUALITY;
    int orient = i % 3 ? 1 : -1;
    auto rep = makeReport("X", kind, l, r, orient, Json::object());
    double m = orient * (l.value - r.value), s = std::hypot(l.stdError, r.stdError);
    double bound = 3.0 * s + rep.tolerance;
    Verdict want;
    if (s > 0.2 * std::max(std::abs(l.value), std::abs(r.value))) want = Verdict::INCONCLUSIVE;
    else if (kind == CheckKind::INEQUALITY) want = m >= -bound ? Verdict::PASS : Verdict::FAIL;
    else want = std::abs(m) <= bound ? Verdict::PASS : Verdict::FAIL;
    ASSERT_EQ(rep.verdict, want) << i;
    ASSERT_DOUBLE_EQ(rep.margin, m);
    ASSERT_NEAR(*rep.zScore, m / s, 1e-12 * std::abs(m / s) + 1e-300);
  }
}

TEST(Verdict, DiagnosticsAndNotes) {
  auto fail = makeReport("X", CheckKind::INEQUALITY, Estimate::exact(1.0), Estimate{2.0, 0.01, 10, kInf}, +1, Json::object());
  EXPECT_EQ(fail.verdict, Verdict::FAIL);
  EXPECT_NE(fail.note.find("numerical defect"), std::string::npos);
  auto div = makeReport("X", CheckKind::INEQUALITY, Estimate::exact(1.0), Estimate{2.0, 0.01, 10, 1.05}, +1, Json::object());
  EXPECT_EQ(div.verdict, Verdict::INCONCLUSIVE);
  EXPECT_STREQ(tailStatus(div.tailIndex()), "divergent");
  auto heavy = makeReport("X", CheckKind::INEQUALITY, Estimate::exact(3.0), Estimate{2.0, 0.01, 10, 1.5}, +1, Json::object());
  EXPECT_EQ(heavy.verdict, Verdict::PASS);
  EXPECT_NE(heavy.note.find("infinite-variance"), std::string::npos);
  auto exact = makeReport("X", CheckKind::IDENTITY, Estimate::exact(1.0), Estimate::exact(1.0), +1, Json::object());
  EXPECT_EQ(exact.verdict, Verdict::PASS);
  EXPECT_FALSE(exact.zScore.has_value());
}

TEST(TheoremA, EqualityAndStrictness) {
  for (double a : {0.5, 1.0, 1.5}) {
    expectEquality(verifyTheoremA(ballIn(2), a, kBudget));
    expectStrict(verifyTheoremA(boxIn(2), a, kBudget));
    EXPECT_EQ(verifyTheoremA(gaussIn(2), a, kBudget).verdict, Verdict::PASS);
  }
  EXPECT_THROW(verifyTheoremA(ballIn(2), 2.0, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyTheoremA(ballIn(2), 0.0, kBudget), std::invalid_argument);
}

TEST(TheoremB, EqualityAndStrictness) {
  for (double a : {2.5, 4.0}) {
    expectEquality(verifyTheoremB(ballIn(2, 2.0), a, kBudget));
    expectStrict(verifyTheoremB(boxIn(2), a, kBudget));
  }
  expectEquality(verifyTheoremB(ballIn(2), 3.0, kBudget, Route::PAIRS));
  EXPECT_EQ(verifyTheoremB(gaussIn(2), 3.0, kBudget).verdict, Verdict::PASS);
  EXPECT_THROW(verifyTheoremB(ballIn(2), 2.0, kBudget), std::invalid_argument);
}

TEST(FracSobolev, EqualityAndStrictness) {
  for (double a : {-0.5, -0.25}) {
    expectEquality(verifyFracSobolev(ballIn(2), a, kBudget));
    expectStrict(verifyFracSobolev(boxIn(2), a, kBudget));
    EXPECT_EQ(verifyFracSobolev(gaussIn(2), a, kBudget).verdict, Verdict::PASS);
  }
  EXPECT_THROW(verifyFracSobolev(ballIn(2), 0.25, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyFracSobolev(ballIn(2), -1.0, kBudget), std::invalid_argument);
}

TEST(ChordIsoperimetric, RegimeOrientation) {
  for (double a : {-0.5, 1.0, 3.0}) expectEquality(verifyChordIsoperimetric(Input(fixtures::unitBall(2)), a, kBudget));
  auto sub = verifyChordIsoperimetric(boxIn(2), 1.0, kBudget);
  expectStrict(sub);
  EXPECT_LT(sub.lhs.value, sub.rhs.value);
  EXPECT_EQ(sub.metadata["orientation"], "lhs <= rhs");
  auto neg = verifyChordIsoperimetric(boxIn(2), -0.5, kBudget);
  expectStrict(neg);
  EXPECT_GT(neg.lhs.value, neg.rhs.value);
  expectStrict(verifyChordIsoperimetric(boxIn(2), 3.0, kBudget));
  EXPECT_THROW(verifyChordIsoperimetric(boxIn(2), 0.0, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyChordIsoperimetric(boxIn(2), 2.0, kBudget), std::invalid_argument);
}

TEST(Entropy, EqualityAndStrictness) {
  for (int n : {2, 3}) {
    for (int order : {1, n + 1}) {
      expectEquality(verifyEntropy(ballIn(n, 2.0), order, kBudget));
      expectStrict(verifyEntropy(boxIn(n), order, kBudget));
    }
    expectStrict(verifyEntropy(gaussIn(n), 1, kBudget));
  }
  EXPECT_THROW(verifyEntropy(boxIn(2), 2, kBudget), std::invalid_argument);
}

TEST(TheoremC, EqualityStrictnessAndInterpretations) {
  auto ball = verifyTheoremC(ballIn(2, 3.0), kBudget);
  expectEquality(ball);
  EXPECT_DOUBLE_EQ(ball.metadata["normalized_by"].get<double>(), 3.0 * kPi);
  EXPECT_EQ(ball.metadata["sigma0_interpretations"].size(), 2u);
  EXPECT_EQ(ball.metadata["closest_to_equality"], "n*omega_n*(sigmaBar0 + gamma)");
  expectStrict(verifyTheoremC(boxIn(2), kBudget));
  expectStrict(verifyTheoremC(gaussIn(2), kBudget));
}

TEST(Identities, Examples) {
  expectEquality(verifyIdentity("XU32", boxIn(2), kBudget));
  expectEquality(verifyIdentity("XU32", boxIn(3), kBudget));
  expectEquality(verifyIdentity("XU32_FN", gaussIn(2), kBudget));
  auto cf = verifyIdentity("CROFTON_FN", gaussIn(2), kBudget);
  EXPECT_EQ(cf.verdict, Verdict::PASS);
  EXPECT_NEAR(cf.lhs.value, cf.rhs.value, 1e-8 * cf.rhs.value);
  for (const auto& K : {fixtures::unitBall(2), fixtures::cube(3), fixtures::ellipsoid(2)}) {
    expectEquality(verifyIdentity("CROFTON", Input(K), kBudget));
    expectEquality(verifyIdentity("POINCARE_HADWIGER", Input(K), kBudget));
    expectEquality(verifyIdentity("CAUCHY", Input(K), kBudget));
  }
  expectEquality(verifyIdentity("POINCARE_HADWIGER_FN", gaussIn(2), kBudget));
  expectEquality(verifyIdentity("CHORD_RAK", Input(fixtures::ellipsoid(2)), kBudget, 2.0));
  expectEquality(verifyIdentity("E1_SCALE", gaussIn(2), kBudget, 2.0));
  expectEquality(verifyIdentity("ENP1_SCALE", gaussIn(3), kBudget, 2.0));
  EXPECT_THROW(verifyIdentity("NOPE", boxIn(2), kBudget), std::invalid_argument);
  EXPECT_THROW(verifyIdentity("E1_SCALE", gaussIn(2), kBudget, -1.0), std::invalid_argument);
}

TEST(OrientationAudit, NegationFlipsExactlyTheStrictPasses) {
  std::vector<VerificationReport> strict{verifyTheoremA(boxIn(2), 1.0, kBudget), verifyTheoremB(boxIn(2), 3.0, kBudget),
                                         verifyFracSobolev(boxIn(2), -0.5, kBudget),
                                         verifyChordIsoperimetric(boxIn(2), 1.0, kBudget),
                                         verifyChordIsoperimetric(boxIn(2), -0.5, kBudget),
                                         verifyChordIsoperimetric(boxIn(2), 3.0, kBudget), verifyEntropy(boxIn(2), 1, kBudget),
                                         verifyEntropy(boxIn(2), 3, kBudget), verifyTheoremC(boxIn(2), kBudget)};
  std::vector<VerificationReport> equal{verifyTheoremA(ballIn(2), 1.0, kBudget), verifyTheoremB(ballIn(2), 3.0, kBudget),
                                        verifyFracSobolev(ballIn(2), -0.5, kBudget),
                                        verifyChordIsoperimetric(Input(fixtures::unitBall(2)), 1.0, kBudget),
                                        verifyEntropy(ballIn(2), 1, kBudget), verifyTheoremC(ballIn(2), kBudget)};
  for (const auto& r : strict) {
    ASSERT_EQ(r.verdict, Verdict::PASS) << r.checkId;
    EXPECT_EQ(negated(r).verdict, Verdict::FAIL) << r.checkId << " " << r.metadata.dump();
  }
  for (const auto& r : equal) {
    ASSERT_EQ(r.verdict, Verdict::PASS) << r.checkId;
    EXPECT_EQ(negated(r).verdict, Verdict::PASS) << r.checkId;
  }
}

TEST(FitLimit, RecoversSyntheticModels) {
  for (double p : {0.3, 1.0, 2.0}) {
    std::array<double, 3> t{0.2, 0.1, 0.05}, q{};
    for (int i = 0; i < 3; ++i) q[i] = 7.0 - 1.5 * std::pow(t[i], p);
    auto fit = fitLimit(t, q);
    ASSERT_TRUE(fit.has_value());
    EXPECT_NEAR(fit->limit, 7.0, 1e-9);
    EXPECT_NEAR(fit->power, p, 1e-6);
    EXPECT_NEAR(fit->amplitude, -1.5, 1e-6);
    EXPECT_FALSE(fit->clamped);
  }
  EXPECT_FALSE(fitLimit({0.2, 0.1, 0.05}, {1.0, 2.0, 1.5}).has_value());
  auto clamped = fitLimit({0.2, 0.1, 0.05}, {1.0, 1.5, 1.50001});
  ASSERT_TRUE(clamped.has_value());
  EXPECT_TRUE(clamped->clamped);
  EXPECT_DOUBLE_EQ(clamped->power, 5.0);
}

TEST(Limits, BallAndBox) {
  auto i1 = verifyLimit("I1", Input(fixtures::unitBall(2)), {}, kBudget);
  EXPECT_EQ(i1.verdict, Verdict::PASS) << i1.metadata.dump();
  EXPECT_LT(i1.metadata["relative_error"].get<double>(), 0.02);
  auto ms = verifyLimit("MS", Input(fixtures::unitBall(2)), {}, kBudget);
  EXPECT_EQ(ms.verdict, Verdict::PASS) << ms.metadata.dump();
  EXPECT_LT(ms.metadata["relative_error"].get<double>(), 0.02);
  auto i0 = verifyLimit("I0", boxIn(2), {}, kBudget);
  EXPECT_EQ(i0.verdict, Verdict::PASS) << i0.metadata.dump();
  EXPECT_LT(i0.metadata["relative_error"].get<double>(), 0.05);
  EXPECT_NEAR(i0.rhs.value, 2.0 * omega(1) * 8.0, 1e-12);
  EXPECT_THROW(verifyLimit("I1", boxIn(2), {0.05, 0.1, 0.2}, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyLimit("MS", boxIn(2), {0.2, 0.1, 0.05}, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyLimit("I1", boxIn(2), {0.2, 0.1}, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyLimit("XX", boxIn(2), {}, kBudget), std::invalid_argument);
}

TEST(Rearrangement, TwoBumpPassesAndRadialCloses) {
  auto bump = fixtures::twoBump();
  for (const auto& id : rearrangementIds()) {
    auto r = verifyRearrangement(id, bump, kBudget);
    EXPECT_EQ(r.verdict, Verdict::PASS) << id << " z=" << zOf(r);
  }
  auto radial = fixtures::radialBump();
  for (const auto& id : rearrangementIds()) {
    auto r = verifyRearrangement(id, radial, kBudget);
    EXPECT_EQ(r.verdict, Verdict::PASS) << id;
    EXPECT_LE(std::abs(zOf(r)), 3.0) << id;
  }
  EXPECT_THROW(verifyRearrangement("NOPE", bump, kBudget), std::invalid_argument);
  EXPECT_THROW(verifyRearrangement("Q", bump, kBudget, -1.0), std::invalid_argument);
}

TEST(Suites, OrderedByCheckIdAndUnknownRejected) {
  auto reps = runSuite("identities", 2, Budget{50000, 3, 2});
  EXPECT_FALSE(reps.empty());
  for (std::size_t i = 1; i < reps.size(); ++i) EXPECT_LE(reps[i - 1].checkId, reps[i].checkId);
  EXPECT_THROW(runSuite("everything", 2, kBudget), std::invalid_argument);
}
