#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "pseudolap/errors.hpp"
#include "pseudolap/models.hpp"
#include "pseudolap/oracle.hpp"

using namespace pseudolap;

TEST(Matching, SecularRootMatches) {
  const auto m = synthetic_model({1.0}, Eigen::MatrixXd::Identity(1, 1));
  const auto r = real_branch_roots(*m, {10.0}, 0.5, 1.0);
  ASSERT_EQ(r.roots.size(), 1u);
  const auto p = truncate_zero_mode(secular_zero_mode(*m, r.roots[0].param.s, r.roots[0].alpha), {10.0});
  EXPECT_TRUE(matching_check(p).pass);
  const auto off = truncate_zero_mode(secular_zero_mode(*m, r.roots[0].param.s + 1e-3, r.roots[0].alpha), {10.0});
  EXPECT_FALSE(matching_check(off).pass);
}

TEST(Matching, ModularHorocycle) {
  const double s = 0.813367836786153;
  const MatchingDatum d = modular_matching_check(s, 10.0);
  EXPECT_TRUE(d.pass);
  EXPECT_LT(d.cusps[0].constancy_defect, 1e-8);
  EXPECT_FALSE(modular_matching_check(s + 1e-3, 10.0).pass);
}

TEST(BruteForce, CountsAndErrors) {
  const auto m = synthetic_model({1.0}, Eigen::MatrixXd::Identity(1, 1));
  const auto b = brute_force_secular(*m, {10.0}, 0.5, 1.0);
  ASSERT_EQ(b.roots.size(), 1u);
  EXPECT_NEAR(b.roots[0].s, 0.797055095617121, 1e-4);
  EXPECT_THROW(brute_force_secular(*m, {10.0}, 0.5, 1.0, 1e-3), DomainError);
}

TEST(ModularSeries, AutomorphyAndPeriodicity) {
  EXPECT_LT(modular_automorphy_defect(0.2, 1.1, 0.8), 1e-12);
  EXPECT_LT(modular_automorphy_defect(-0.3, 0.97, 0.65), 1e-12);
  const double v0 = modular_eisenstein_point(0.17, 1.3, 0.8).value;
  const double v1 = modular_eisenstein_point(1.17, 1.3, 0.8).value;
  EXPECT_NEAR(v0, v1, 1e-12 * std::abs(v0));
}

TEST(ModularSeries, DefectShrinksWithTerms) {
  const double d2 = modular_automorphy_defect(0.2, 1.1, 0.8, 2);
  const double d6 = modular_automorphy_defect(0.2, 1.1, 0.8, 6);
  EXPECT_LT(d6, d2);
}

TEST(ModularSeries, EigenResidual) {
  EXPECT_LT(modular_eigen_residual(0.1, 1.2, 0.8), 1e-5);
  EXPECT_LT(modular_eigen_residual(0.4, 2.0, 0.7), 1e-5);
}

TEST(ModularSeries, InjectedBessel) {
  const auto boost_k = [](double nu, double x) { return boost::math::cyl_bessel_k(nu, x); };
  const double a = modular_eisenstein_point(0.1, 1.2, 0.8).value;
  const double b = modular_eisenstein_point(0.1, 1.2, 0.8, 0, boost_k).value;
  EXPECT_NEAR(a, b, 1e-13 * std::abs(a));
  EXPECT_THROW(modular_eisenstein_point(0.1, 1e-3, 0.8), ConvergenceError);
}

TEST(Rayleigh, ClaimedVersusWrong) {
  const double s = 0.813367836786153;
  const RayleighResult ok = rayleigh_probe(s, 10.0, s * (1.0 - s));
  EXPECT_TRUE(ok.pass);
  EXPECT_LT(ok.rel_error, ok.coarse_rel_error);
  EXPECT_FALSE(rayleigh_probe(s, 10.0, 1.1 * s * (1.0 - s)).pass);
}

TEST(Suite, AllPassAndDigestsStable) {
  const VerificationReport a = run_verification_suite();
  EXPECT_TRUE(a.all_pass());
  const VerificationReport b = run_verification_suite();
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) EXPECT_EQ(a.checks[k].digest, b.checks[k].digest);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}
