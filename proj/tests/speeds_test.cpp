#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "lvspread/speeds.hpp"

using namespace lvspread;

namespace {

const double kSqrtHalf = std::sqrt(0.5);

// Independent oracle for the nonlocally pulled speed: minimize
// lambda + (1-a)/lambda over lambda in (0, Lambda] where Lambda is the decay
// rate that u inherits at x = sigma1 t. Computed by brute-force scan.
double brute_force_nlp(double sigma1, double lambda_u, double a) {
  double cap;
  if (sigma1 < 2.0 * lambda_u)
    cap = 0.5 * sigma1 - std::sqrt(a);
  else
    cap = 0.5 * (sigma1 - std::sqrt((sigma1 - 2.0 * lambda_u) * (sigma1 - 2.0 * lambda_u) + 4.0 * a));
  const double lam = std::min(cap, std::sqrt(1.0 - a));
  return lam + (1.0 - a) / lam;
}

}  // namespace

TEST(Coexistence, Values) {
  auto [k1, k2] = coexistence_equilibrium({1, 1, 0, 0});
  EXPECT_DOUBLE_EQ(k1, 1.0);
  EXPECT_DOUBLE_EQ(k2, 1.0);
  auto [m1, m2] = coexistence_equilibrium({1, 1, 0.5, 0.5});
  EXPECT_NEAR(m1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m2, 2.0 / 3.0, 1e-15);
  auto [s1, s2] = coexistence_equilibrium({1, 1, 0.3, 0.3});
  EXPECT_DOUBLE_EQ(s1, s2);
  EXPECT_THROW(coexistence_equilibrium({1, 1, 2.0, 0.5}), ValidationError);
}

TEST(SigmaSet, Examples) {
  EXPECT_DOUBLE_EQ(sigma_set({1, 1, 0.5, 0.5}, {1, 1, 1}).sigma1, 2.0);
  EXPECT_DOUBLE_EQ(sigma_set({1, 1, 0.5, 0.5}, {1, 0.5, 1}).sigma1, 2.5);
  EXPECT_DOUBLE_EQ(sigma_set({1, 1, 0.5, 0.5}, {1e6, 1, 1}).sigma2, 2.0);
  auto s = sigma_set({1, 1, 0.5, 0.5}, {1, 0.5, 0.5});
  ASSERT_TRUE(s.sigma3);
  EXPECT_DOUBLE_EQ(*s.sigma3, 1.5);
  ASSERT_TRUE(s.sigma2_prime);
  EXPECT_NEAR(*s.sigma2_prime, 2.0 * kSqrtHalf, 1e-15);
  EXPECT_FALSE(sigma_set({1, 1, 0.5, 1.5}, {1, 0.5, 0.5}).sigma3);
}

TEST(SigmaSet, LowerBounds) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 4.0);
  for (int i = 0; i < 1000; ++i) {
    ModelParams p{U(rng), U(rng), U(rng) / 4.1, U(rng) / 4.1};
    DecayRates dr{U(rng), U(rng), U(rng)};
    auto s = sigma_set(p, dr);
    EXPECT_GE(s.sigma1, 2.0 * std::sqrt(p.d * p.r) - 1e-12);
    EXPECT_GE(s.sigma2, 2.0 - 1e-12);
    EXPECT_GE(*s.sigma3, 2.0 * std::sqrt(p.d * p.r * (1 - p.b)) - 1e-12);
  }
}

TEST(SigmaSet, RejectsInvalid) {
  EXPECT_THROW(sigma_set({-1, 1, 0.5, 0.5}, {1, 1, 1}), ValidationError);
  EXPECT_THROW(sigma_set({1, 1, 0.5, 0.5}, {0, 1, 1}), ValidationError);
}

TEST(TildeLambda, Examples) {
  EXPECT_NEAR(tilde_lambda_nlp(2.5, 1, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(tilde_lambda_nlp(2.5, 0.7, 0.0), 0.7, 1e-15);
  EXPECT_NEAR(tilde_lambda_nlp(2.5, 0.5, 0.5), 0.5 * (2.5 - std::sqrt(4.25)), 1e-15);
  EXPECT_NEAR(tilde_lambda_nlp(2.5, 0.5, 0.5), 0.219224, 1e-6);
}

TEST(HatCNlp, BranchExamples) {
  auto b1 = hat_c_nlp(2.5, 2, 0.5);
  EXPECT_EQ(b1.tag, NlpCase::PulledByFaster);
  const double s = 1.25 - kSqrtHalf;
  EXPECT_NEAR(b1.speed, s + 0.5 / s, 1e-14);
  EXPECT_NEAR(b1.speed, 1.463885, 1e-6);

  auto b2 = hat_c_nlp(2.5, 1, 0.5);
  EXPECT_EQ(b2.tag, NlpCase::NonlocalLambda);
  EXPECT_NEAR(b2.speed, 1.5, 1e-14);

  auto b3 = hat_c_nlp(2.9, 2, 0.5);
  EXPECT_EQ(b3.tag, NlpCase::LocallyPulled);
  EXPECT_NEAR(b3.speed, 2 * kSqrtHalf, 1e-15);
}

TEST(HatCNlp, Decoupled) {
  // a = 0: u does not feel v and spreads at its own KPP speed sigma2.
  auto lam_u1 = hat_c_nlp(2.5, 1, 0.0);
  EXPECT_EQ(lam_u1.tag, NlpCase::NonlocalLambda);
  EXPECT_DOUBLE_EQ(lam_u1.speed, 2.0);
  auto lam_u2 = hat_c_nlp(4.5, 2, 0.0);
  EXPECT_EQ(lam_u2.tag, NlpCase::LocallyPulled);
  EXPECT_DOUBLE_EQ(lam_u2.speed, 2.0);
}

TEST(HatCNlp, TieGoesToNonStrictBranch) {
  EXPECT_EQ(hat_c_nlp(2.0, 1.0, 0.5).tag, NlpCase::NonlocalLambda);
}

TEST(HatCNlp, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> A(0.0, 0.99), L(0.1, 4.0), E(0.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = A(rng), lu = L(rng);
    const double s1 = kpp_speed(1, 1, lu) + E(rng);
    EXPECT_NEAR(hat_c_nlp(s1, lu, a).speed, brute_force_nlp(s1, lu, a), 1e-12);
  }
}

TEST(HatCNlp, Range) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> A(0.0, 0.99), L(0.1, 4.0), E(0.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = A(rng), lu = L(rng);
    const double s1 = kpp_speed(1, 1, lu) + E(rng);
    const double c = hat_c_nlp(s1, lu, a).speed;
    EXPECT_GE(c, 2 * std::sqrt(1 - a) - 1e-12);
    EXPECT_LE(c, s1 + 1e-12);
  }
}

TEST(HatCNlp, ContinuityAcrossBranches) {
  const double off = 1e-9;
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double lu : {1.2, 1.5, 2.0}) {
      // sigma1 = 2 lambda_u boundary (requires sigma1 >= sigma2 = 2).
      const double s = 2 * lu;
      EXPECT_LT(std::abs(hat_c_nlp(s - off, lu, a).speed - hat_c_nlp(s + off, lu, a).speed), 1e-8);
    }
    // nonlocal rate = sqrt(1-a) boundary, found by solving for sigma1 at fixed lambda_u.
    const double lu = 1.5;
    TradeoffCurves tc(a, lu);
    const double s = tc.g_domain().upper;
    if (std::isfinite(s) && s >= 2 * lu) {
      EXPECT_LT(std::abs(hat_c_nlp(s - off, lu, a).speed - hat_c_nlp(s + off, lu, a).speed), 1e-8);
    }
    // sigma1 = 2(sqrt a + sqrt(1-a)) boundary inside sigma1 < 2 lambda_u.
    const double sb = 2 * (std::sqrt(a) + std::sqrt(1 - a));
    const double lu_big = sb;
    EXPECT_LT(std::abs(hat_c_nlp(sb - off, lu_big, a).speed - hat_c_nlp(sb + off, lu_big, a).speed),
              1e-8);
  }
}

TEST(HatCNlp, MonotoneOnGrid) {
  for (double a : {0.1, 0.5, 0.9}) {
    const int n = 50;
    std::vector<double> lus(n), s1s(n);
    for (int i = 0; i < n; ++i) {
      lus[i] = 0.2 + 3.8 * i / (n - 1);
      s1s[i] = 2.0 + 6.0 * i / (n - 1);
    }
    int violations = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 1 < n; ++j) {
        // sigma1 direction at fixed lambda_u
        if (s1s[j] >= kpp_speed(1, 1, lus[i]) &&
            hat_c_nlp(s1s[j + 1], lus[i], a).speed > hat_c_nlp(s1s[j], lus[i], a).speed + 1e-12)
          ++violations;
        // lambda_u direction at fixed sigma1
        if (s1s[i] >= kpp_speed(1, 1, lus[j]) &&
            hat_c_nlp(s1s[i], lus[j + 1], a).speed > hat_c_nlp(s1s[i], lus[j], a).speed + 1e-12)
          ++violations;
      }
    EXPECT_EQ(violations, 0) << "a=" << a;
  }
}

TEST(HatCNlp, TangFifeLimit) {
  for (double lu : {0.3, 0.5, 0.8, 1.0}) {
    const double s2 = kpp_speed(1, 1, lu);
    EXPECT_NEAR(hat_c_nlp(s2, lu, 0.5).speed, s2, 1e-6) << lu;
  }
  EXPECT_NEAR(hat_c_nlp(2.5, 0.5, 0.5).speed, 2.5, 1e-6);
}

TEST(MuHat, Examples) {
  EXPECT_NEAR(mu_hat(2.5, 2, 0.5), 0.5625, 1e-12);
  EXPECT_NEAR(mu_hat(2.5, 1, 0.5), 0.5, 1e-12);
  EXPECT_NEAR(mu_hat(2.0, 1.5, 0.5), 0.0, 1e-12);
}

TEST(MuHat, IdentitiesOnRandomDraws) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> A(0.0, 0.99), L(0.1, 4.0), E(0.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = A(rng), lu = L(rng);
    const double s1 = kpp_speed(1, 1, lu) + E(rng);
    const double expect = s1 < 2 * lu ? 0.25 * (s1 * s1 - 4) : lu * (s1 - (lu + 1 / lu));
    EXPECT_NEAR(mu_hat(s1, lu, a), expect, 1e-10);
  }
}

TEST(LlwBounds, Examples) {
  auto [c, ct] = llw_bounds({1, 1, 0.5, 0.5});
  EXPECT_NEAR(c.lower, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(c.upper, 2.0);
  EXPECT_NEAR(ct.lower, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(ct.upper, 2.0);
  auto [c0, ct0] = llw_bounds({1, 1, 0.0, 0.5});
  EXPECT_EQ(c0.lower, 2.0);
  EXPECT_EQ(c0.upper, 2.0);
  auto [cm, ctm] = llw_bounds({1, 1, 0.5, 1.5});
  EXPECT_TRUE(ctm.degenerate);
  EXPECT_EQ(ctm.lower, 0.0);
  EXPECT_EQ(ctm.upper, 2.0);
}

TEST(SpeedCap, Examples) {
  // Zero discriminant: the square root amplifies rounding to ~sqrt(eps).
  EXPECT_NEAR(lambda_llw(std::sqrt(2.0), 0.5), kSqrtHalf, 1e-7);
  EXPECT_NEAR(lemma_b2_speed_cap(2.5, 0.5, std::sqrt(2.0), 0.5), 1.5, 1e-12);
  const double thr = lambda_llw(1.8, 0.5) * (2.5 - 1.8);
  EXPECT_EQ(lemma_b2_speed_cap(2.5, thr, 1.8, 0.5), 1.8);
  EXPECT_EQ(lemma_b2_speed_cap(2.5, 100.0, 1.8, 0.5), 1.8);
  EXPECT_THROW(lemma_b2_speed_cap(2.0, 0.5, 1.8, 0.5), ValidationError);
  EXPECT_THROW(lemma_b2_speed_cap(2.5, 0.0, 1.8, 0.5), ValidationError);
}

TEST(SpeedCap, EqualsAssembledC2) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> A(0.01, 0.99), L(0.2, 3.0), E(0.01, 5.0), T(0.0, 1.0);
  int tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = A(rng), lu = L(rng);
    const double s1 = std::max(2.0, kpp_speed(1, 1, lu)) + E(rng);
    const double cl = 2 * std::sqrt(1 - a) + T(rng) * (2 - 2 * std::sqrt(1 - a));
    const double mu = mu_hat(s1, lu, a);
    if (!(mu > 0)) continue;
    ++tested;
    EXPECT_NEAR(lemma_b2_speed_cap(s1, mu, cl, a), std::max(cl, hat_c_nlp(s1, lu, a).speed), 1e-10);
  }
  EXPECT_GT(tested, 9000);
}

TEST(SpeedCap, MirroredReducesToPlain) {
  // With d = r = 1 the mirrored formula is the plain one with a -> b.
  for (double c : {2.2, 2.5, 3.0})
    for (double mu : {0.05, 0.3, 1.0})
      EXPECT_NEAR(lemma_b2_speed_cap_mirrored(c, mu, 1.6, 1, 1, 0.4),
                  lemma_b2_speed_cap(c, mu, 1.6, 0.4), 1e-13);
}

TEST(Assemble, ReferenceExample) {
  auto rep = assemble_speeds({1, 1, 0.5, 0.5}, {1, 0.5, 0.5},
                             {std::sqrt(2.0), Provenance::LowerBound},
                             LlwInput{std::sqrt(2.0), Provenance::LowerBound});
  EXPECT_EQ(rep.regime, SpeedRegime::Separated);
  EXPECT_DOUBLE_EQ(rep.c1, 2.5);
  EXPECT_NEAR(*rep.c2, 1.5, 1e-14);
  EXPECT_NEAR(*rep.c3, -1.5, 1e-14);
  EXPECT_EQ(rep.nlp->tag, NlpCase::NonlocalLambda);
  EXPECT_NEAR(*rep.mu_hat, 0.5, 1e-14);
  EXPECT_TRUE(rep.warnings.empty());
}

TEST(Assemble, TangFife) {
  auto rep = assemble_speeds({1, 1, 0.5, 0.5}, {0.5, 0.5, 0.5}, {1.6, Provenance::Measured},
                             LlwInput{1.6, Provenance::Measured});
  EXPECT_EQ(rep.regime, SpeedRegime::TangFife);
  EXPECT_DOUBLE_EQ(rep.c1, 2.5);
  EXPECT_FALSE(rep.c2);
  EXPECT_TRUE(rep.c3);
  EXPECT_FALSE(rep.nlp);
}

TEST(Assemble, SwapErrorAndClamp) {
  EXPECT_THROW(assemble_speeds({1, 1, 0.5, 0.5}, {0.5, 1.0, 0.5}, {1.6, Provenance::Measured},
                               LlwInput{1.6, Provenance::Measured}),
               ValidationError);
  auto rep = assemble_speeds({1, 1, 0.5, 0.5}, {1, 0.5, 0.5}, {2.5, Provenance::UserSupplied},
                             LlwInput{1.6, Provenance::Measured});
  EXPECT_EQ(rep.c_llw_input.value, 2.0);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(Assemble, MixedCase) {
  auto rep = assemble_speeds({1, 1, 0.5, 1.5}, {1, 0.5, 0.5}, {1.45, Provenance::Measured},
                             std::nullopt);
  EXPECT_EQ(rep.regime, SpeedRegime::MixedCase);
  EXPECT_NEAR(*rep.c2, 1.5, 1e-14);
  EXPECT_FALSE(rep.c3);
}

TEST(Assemble, DecoupledReducesToSigma2) {
  auto rep = assemble_speeds({1, 1, 0, 0}, {1, 0.5, 0.5}, {2.0, Provenance::LowerBound},
                             LlwInput{2.0, Provenance::LowerBound});
  EXPECT_DOUBLE_EQ(*rep.c2, rep.sigma.sigma2);
}

TEST(Tradeoff, FAtTwo) {
  TradeoffCurves tc(0.5, 1.0);
  EXPECT_NEAR(tc.f(2.0), 2.0, 1e-14);
}

// sigma -> c -> sigma is limited by the condition number |c / (sigma h'(sigma))|
// of the inverse, which blows up where h' -> 0 at the top of each domain.
double inverse_tolerance(const std::function<double(double)>& h, double x) {
  const double d = 1e-6 * x;
  const double kappa = std::abs(h(x) * 2 * d / (x * (h(x + d) - h(x - d))));
  return std::max(1e-10, 16 * std::numeric_limits<double>::epsilon() * kappa) * std::max(1.0, x);
}

TEST(Tradeoff, RoundTrips) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> A(0.01, 0.99), L(0.2, 4.0), T(0.001, 0.999), E(0.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = A(rng);
    TradeoffCurves tc(a, L(rng));
    auto f = [&](double x) { return tc.f(x); };
    auto g = [&](double x) { return tc.g(x); };
    auto fd = tc.f_domain();
    const double s = fd.lower + T(rng) * (fd.upper - fd.lower);
    EXPECT_NEAR(tc.f_inverse(tc.f(s)), s, inverse_tolerance(f, s));
    const double c = 2 * std::sqrt(1 - a) + E(rng);
    EXPECT_NEAR(tc.f(tc.f_inverse(c)), c, 1e-10 * std::max(1.0, c));

    auto gd = tc.g_domain();
    const double hi = std::isfinite(gd.upper) ? gd.upper : gd.lower + 10;
    const double sg = gd.lower + T(rng) * (hi - gd.lower);
    EXPECT_NEAR(tc.g_inverse(tc.g(sg)), sg, inverse_tolerance(g, sg));
    auto gi = tc.g_inverse_domain();
    const double cg = gi.lower + T(rng) * 5;
    EXPECT_NEAR(tc.g(tc.g_inverse(cg)), cg, 1e-10 * std::max(1.0, cg));
  }
}

TEST(Tradeoff, IllConditionedInverseNearDomainTop) {
  // lambda_u just above sqrt(1-a): g is nearly flat over most of its domain.
  TradeoffCurves tc(0.029943, 0.985265);
  const double s = 85.9754;
  EXPECT_NEAR(tc.g_inverse(tc.g(s)), s, inverse_tolerance([&](double x) { return tc.g(x); }, s));
  EXPECT_NEAR(tc.g(tc.g_inverse(tc.g(s))), tc.g(s), 1e-14);
}

TEST(Tradeoff, FRoundTripOnLowerRange) {
  for (double a : {0.1, 0.3, 0.45}) {
    TradeoffCurves tc(a, 1.0);
    const double lo = 2 * std::sqrt(1 - a), hi = 2 * (std::sqrt(a) + std::sqrt(1 - a));
    for (int i = 0; i <= 100; ++i) {
      const double s = lo + (hi - lo) * i / 100.0;
      EXPECT_NEAR(tc.f(tc.f_inverse(tc.f(s))), tc.f(s), 1e-12);
      // f'(s) vanishes at the upper end, so the inverse loses half the digits there.
      EXPECT_NEAR(tc.f_inverse(tc.f(s)), s, i == 100 ? 1e-7 : 1e-10);
    }
  }
}

TEST(Tradeoff, GInfinityIsLimit) {
  TradeoffCurves tc(0.5, 1.3);
  EXPECT_NEAR(tc.g(1e7), tc.g_infinity(), 1e-6);
}

TEST(Realizability, Classification) {
  ModelParams p{1, 1, 0.5, 1.5};
  const double hat_llw = 1.45;
  const double cbar = 2.5;
  TradeoffCurves tc(0.5, 1.0);
  const double fb = tc.f(cbar);

  EXPECT_EQ(realizability(cbar, fb - 1e-6, p, hat_llw).kind, Realizability::NotRealizable);

  auto eq = realizability(cbar, fb, p, hat_llw);
  EXPECT_EQ(eq.kind, Realizability::UniqueLambdaVPlus);
  EXPECT_NEAR(*eq.lambda_v_plus, 0.5, 1e-14);
  EXPECT_DOUBLE_EQ(*eq.lambda_u_min, 1.25);

  auto pair = realizability(cbar, 1.5, p, hat_llw);
  ASSERT_EQ(pair.kind, Realizability::UniquePair);
  EXPECT_NEAR(*pair.lambda_u, 1.0, 1e-10);
  EXPECT_NEAR(*pair.lambda_v_plus, 0.5, 1e-14);
  // The recovered rates reproduce the pair through the forward formulas.
  auto rep = assemble_speeds(p, {*pair.lambda_u, *pair.lambda_v_plus, 0.5},
                             {hat_llw, Provenance::Measured}, std::nullopt);
  EXPECT_NEAR(rep.c1, cbar, 1e-12);
  EXPECT_NEAR(*rep.c2, 1.5, 1e-9);

  EXPECT_THROW(realizability(1.9, 1.5, p, hat_llw), ValidationError);
  EXPECT_THROW(realizability(cbar, 1.4, p, hat_llw), ValidationError);
  EXPECT_THROW(realizability(cbar, 2.6, p, hat_llw), ValidationError);
}

TEST(Realizability, LargeCBarUsesCappedUpperBracket) {
  ModelParams p{1, 1, 0.5, 1.5};
  const double cbar = 4.0;  // beyond 2(sqrt a + sqrt(1-a))
  for (double lu : {0.6, 0.9, 1.2}) {
    const double c = hat_c_nlp(cbar, lu, 0.5).speed;
    if (c <= 1.45 || hat_c_nlp(cbar, lu, 0.5).tag != NlpCase::NonlocalLambda) continue;
    auto res = realizability(cbar, c, p, 1.45);
    ASSERT_EQ(res.kind, Realizability::UniquePair);
    EXPECT_NEAR(*res.lambda_u, lu, 1e-9);
  }
}

TEST(MixedSubcase, Tags) {
  ModelParams p{1, 1, 0.5, 1.5};
  EXPECT_EQ(mixed_case_subcase(p, 2.0, 1.45), MixedSubcase::B1);
  EXPECT_EQ(mixed_case_subcase(p, 0.5, 1.45), MixedSubcase::B3);
  EXPECT_EQ(mixed_case_subcase(p, 2.0, 2.3), MixedSubcase::A1);
}
