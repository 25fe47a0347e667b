#include <gtest/gtest.h>

#include <cmath>

#include "pseudolap/errors.hpp"
#include "pseudolap/models.hpp"
#include "pseudolap/oracle.hpp"
#include "pseudolap/secular.hpp"

using namespace pseudolap;

namespace {

ScatteringPtr beta(double b) { return synthetic_model({b}, Eigen::MatrixXd::Identity(1, 1)); }

Eigen::MatrixXd rotation(double degrees) {
  const double c = std::cos(degrees * kPi / 180.0), s = std::sin(degrees * kPi / 180.0);
  Eigen::MatrixXd u(2, 2);
  u << c, -s, s, c;
  return u;
}

}  // namespace

TEST(SecularMatrix, ScalarArithmetic) {
  const CMatrix m = secular_matrix(*beta(1.0), 0.75, {4.0});
  EXPECT_NEAR(std::abs(m(0, 0) - Complex(-1.5, 0.0)), 0.0, 1e-14);
}

TEST(SecularMatrix, HalfIsPhi) {
  const auto m = modular_model();
  EXPECT_NEAR((secular_matrix(*m, 0.5, {37.0}) - m->at_half()).norm(), 0.0, 1e-14);
}

TEST(SecularMatrix, UnitaryOnCriticalLine) {
  const auto m = synthetic_model({0.9, 0.7}, rotation(30.0));
  const CMatrix u = secular_matrix(*m, Complex(0.5, 2.3), {3.0, 11.0});
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_THROW(secular_matrix(*m, 0.9, {3.0, 11.0}), AtPole);
}

TEST(RealBranch, BetaOne) {
  const auto m = beta(1.0);
  const auto r10 = real_branch_roots(*m, {10.0}, 0.5, 1.0);
  ASSERT_EQ(r10.roots.size(), 1u);
  EXPECT_NEAR(r10.roots[0].param.s.real(), 0.797055095617121, 1e-10);
  EXPECT_NEAR(r10.roots[0].param.lambda, 0.161758270167903, 1e-10);
  const auto r100 = real_branch_roots(*m, {100.0}, 0.5, 1.0);
  ASSERT_EQ(r100.roots.size(), 1u);
  EXPECT_NEAR(r100.roots[0].param.lambda, 0.0108193776592165, 1e-10);
  EXPECT_LT(r100.roots[0].param.lambda, r10.roots[0].param.lambda);
  EXPECT_LE(r10.roots[0].residual, 1e-8);
}

TEST(RealBranch, Modular) {
  const auto m = modular_model();
  const auto r10 = real_branch_roots(*m, {10.0}, 0.5, 1.0);
  ASSERT_EQ(r10.roots.size(), 1u);
  EXPECT_NEAR(r10.roots[0].param.s.real(), 0.813367836786153, 1e-10);
  const auto r50 = real_branch_roots(*m, {50.0}, 0.5, 1.0);
  ASSERT_EQ(r50.roots.size(), 1u);
  EXPECT_NEAR(r50.roots[0].param.s.real(), 0.977726265494976, 1e-10);
}

TEST(RealBranch, BarrierModel) {
  const auto m = beta(0.75);
  const auto r = real_branch_roots(*m, {100.0}, 0.5, 1.0);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_NEAR(r.roots[0].param.s.real(), 0.648527547808561, 1e-10);
  EXPECT_TRUE(real_branch_roots(*m, {50.0}, 0.5, 1.0).roots.empty());
}

TEST(RealBranch, TwinDoubleRoot) {
  const auto m = synthetic_model({0.9, 0.9}, rotation(45.0));
  const auto r = real_branch_roots(*m, {50.0, 50.0}, 0.5, 1.0);
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_EQ(r.roots[0].multiplicity, 2);
  EXPECT_NEAR(r.roots[0].param.s.real(), 0.852175895552165, 1e-9);
}

TEST(RealBranch, AlphaMeetsQ) {
  for (const char* name : {"synthetic-beta1", "synthetic-mixed", "synthetic-twin", "modular"}) {
    const SurfaceModel sm = builtin_model(name);
    const TruncationHeights a(sm.num_cusps(), 20.0);
    for (const SecularRoot& r : real_branch_roots(*sm.scattering, a, 0.5, 1.0).roots) {
      const auto cls = classify(*sm.scattering, r.param.s);
      double q = 0.0;
      for (std::size_t j : cls.Q) q += std::norm(r.alpha[static_cast<Eigen::Index>(j)]);
      EXPECT_GT(std::sqrt(q), 1e-6) << name;
    }
  }
}

TEST(Mixed, RootOnlyAtNine) {
  const auto m = synthetic_model({1.0, 0.75}, Eigen::MatrixXd::Identity(2, 2));
  const MixedSystem at = mixed_system(*m, {9.0, 5.0}, 0.75);
  EXPECT_TRUE(at.admissible());
  ASSERT_EQ(at.nullspace.cols(), 1);
  EXPECT_NEAR(std::abs(at.nullspace(0, 0)), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(at.nullspace(1, 0)), 0.0, 1e-9);
  EXPECT_TRUE(mixed_system(*m, {9.0 + 5e-9, 5.0}, 0.75).admissible());
  EXPECT_TRUE(mixed_system(*m, {9.0 - 5e-9, 5.0}, 0.75).admissible());
  EXPECT_FALSE(mixed_system(*m, {9.0 + 1e-6, 5.0}, 0.75).admissible());
  EXPECT_FALSE(mixed_system(*m, {9.0 - 1e-6, 5.0}, 0.75).admissible());

  const auto r = real_branch_roots(*m, {9.0, 5.0}, 0.5, 1.0);
  bool found = false;
  for (const auto& root : r.roots) {
    if (root.classification != RootClass::singular_mixed) continue;
    found = true;
    EXPECT_NEAR(root.param.lambda, 0.1875, 1e-12);
  }
  EXPECT_TRUE(found);
}

TEST(Barrier, Verdicts) {
  EXPECT_TRUE(barrier_check(*modular_model(), {10.0}, 1.0).barrier);
  const auto b = barrier_check(*beta(0.75), {100.0}, 0.75);
  EXPECT_TRUE(b.barrier);
  EXPECT_NEAR(b.lambda, 0.1875, 1e-15);
  EXPECT_FALSE(b.eigenvalue_at_pole);
  const auto m = synthetic_model({1.0, 0.75}, Eigen::MatrixXd::Identity(2, 2));
  EXPECT_FALSE(barrier_check(*m, {9.0, 5.0}, 0.75).barrier);
}

TEST(CriticalLine, BetaOneFirstRoot) {
  const auto r = critical_line_roots(*beta(1.0), {10.0}, 1e-6, 3.0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].param.t, 1.93684612926139, 1e-9);
  EXPECT_NEAR(r[0].param.lambda, 4.0013729284348, 1e-8);
}

TEST(CriticalLine, Modular) {
  const auto r = critical_line_roots(*modular_model(), {10.0}, 1e-6, 3.5);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].param.t, 1.89560645412565, 1e-9);
  EXPECT_NEAR(r[1].param.t, 3.27399580628502, 1e-9);
}

TEST(CriticalLine, OneRootPerPhaseTurn) {
  // asymptotic phase slope is 2 ln a, so roots are pi / ln a apart
  const double a = 10.0;
  const auto r = critical_line_roots(*beta(1.0), {a}, 20.0, 40.0);
  ASSERT_GE(r.size(), 3u);
  for (std::size_t k = 1; k < r.size(); ++k) EXPECT_NEAR(r[k].param.t - r[k - 1].param.t, kPi / std::log(a), 0.05);
}

TEST(CriticalLine, DecouplesForIdentityMixing) {
  const auto m = synthetic_model({1.0, 0.75}, Eigen::MatrixXd::Identity(2, 2));
  const auto both = critical_line_roots(*m, {10.0, 20.0}, 1e-6, 6.0);
  const auto one = critical_line_roots(*beta(1.0), {10.0}, 1e-6, 6.0);
  const auto two = critical_line_roots(*beta(0.75), {20.0}, 1e-6, 6.0);
  EXPECT_EQ(both.size(), one.size() + two.size());
}

TEST(Quarter, BetaOneTransitionAtE2) {
  const auto m = beta(1.0);
  const double e2 = std::exp(2.0);
  EXPECT_EQ(quarter_multiplicity(*m, {e2}).mu, 1);
  EXPECT_EQ(quarter_multiplicity(*m, {e2 + 0.1}).mu, 0);
  EXPECT_EQ(quarter_multiplicity(*m, {e2 - 0.1}).mu, 0);
  const auto tr = quarter_transitions(*m, {1.0}, 2.0, 20.0);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_NEAR(tr[0], e2, 1e-9);
}

TEST(Quarter, ModularTransition) {
  const auto tr = quarter_transitions(*modular_model(), {1.0}, 2.0, 20.0);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_NEAR(tr[0], 7.05550795544818, 1e-8);
}

TEST(Quarter, MuBoundedByEMinus) {
  const auto m = synthetic_model({0.9, 0.7}, rotation(20.0));
  for (double c : {1.5, 3.0, 10.0}) {
    const QuarterReport q = quarter_multiplicity(*m, {c, 2.0 * c});
    EXPECT_LE(q.mu, q.e_minus.cols());
  }
}

TEST(Quarter, RootApproachesHalfFromAbove) {
  const auto m = beta(1.0);
  const double e2 = std::exp(2.0);
  double prev = 1.0;
  for (double d : {1.0, 0.1, 0.01, 1e-4}) {
    const auto r = real_branch_roots(*m, {e2 + d}, 0.5, 1.0);
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_LT(r.roots[0].param.s.real(), prev);
    prev = r.roots[0].param.s.real();
  }
  // s - 1/2 shrinks like the square root of a - e^2
  EXPECT_LT(prev, 0.503);
  EXPECT_TRUE(real_branch_roots(*m, {e2 - 0.1}, 0.5, 1.0).roots.empty());
}

TEST(Residual, Spectra) {
  const auto mod = residual_spectrum(*modular_model());
  ASSERT_EQ(mod.size(), 1u);
  EXPECT_NEAR(mod[0].first, 0.0, 1e-15);
  EXPECT_EQ(mod[0].second, 1);
  const auto b = residual_spectrum(*beta(0.75));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].first, 0.1875, 1e-15);
  const auto twin = residual_spectrum(*synthetic_model({0.9, 0.9}, rotation(45.0)));
  ASSERT_EQ(twin.size(), 1u);
  EXPECT_NEAR(twin[0].first, 0.09, 1e-15);
  EXPECT_EQ(twin[0].second, 2);
}

TEST(Count, Examples) {
  const SurfaceModel m = builtin_model("synthetic-beta1");
  const CountReport c10 = count_below(m, {10.0});
  EXPECT_EQ(c10.total, 1);
  EXPECT_EQ(c10.budget, 1);
  EXPECT_TRUE(c10.within_budget);
  // at a = e^2 the real-branch root has merged into the quarter eigenvalue
  const CountReport ce2 = count_below(m, {std::exp(2.0)});
  EXPECT_EQ(ce2.quarter, 1);
  EXPECT_EQ(ce2.real_branch, 0);
  EXPECT_EQ(ce2.total, 1);
  SurfaceModel extra = m;
  extra.cuspidal_eigenvalues = std::vector<double>{0.2};
  const CountReport over = count_below(extra, {10.0});
  EXPECT_EQ(over.total, 2);
  EXPECT_FALSE(over.within_budget);
  EXPECT_EQ(over.verdict, "MODEL-NOT-SURFACE");
  EXPECT_EQ(count_below(builtin_model("modular"), {10.0}).total, 1);
}

TEST(Count, NonDecreasingInA) {
  for (const auto& info : builtin_models()) {
    if (info.negative_control) continue;
    const SurfaceModel m = builtin_model(info.name);
    int prev = 0;
    for (double c : {2.0, 5.0, 10.0, 50.0, 200.0}) {
      const int n = count_below(m, TruncationHeights(m.num_cusps(), c)).total;
      EXPECT_GE(n, prev) << info.name << " c=" << c;
      prev = n;
    }
  }
}

TEST(Branch, BetaOneDecreasesToZero) {
  const auto m = beta(1.0);
  const SpectralBranch b0 = branch_sweep(*m, {1.0}, 5.0, 500.0, 12, 0);
  EXPECT_TRUE(b0.ok());
  EXPECT_NEAR(b0.target, 0.0, 1e-15);
  // a = 5 is below e^2, so the branch starts on the critical line
  EXPECT_EQ(b0.samples.front().chart, Chart::critical_line);
  EXPECT_GT(b0.samples.front().lambda, 0.25);
  EXPECT_EQ(b0.samples.back().chart, Chart::real_branch);
  EXPECT_NEAR(b0.samples.back().lambda, 0.002043155046014, 1e-9);
  const SpectralBranch b1 = branch_sweep(*m, {1.0}, 5.0, 500.0, 12, 1);
  EXPECT_TRUE(b1.monotone);
  for (const auto& s : b1.samples) EXPECT_GT(s.lambda, 0.25);
  EXPECT_THROW(branch_sweep(*m, {1.0}, 5.0, 500.0, 7, 0), DomainError);
}

TEST(Branch, TamperedFailsMonotonicity) {
  const SurfaceModel m = builtin_model("tampered");
  const SpectralBranch b = branch_sweep(*m.scattering, {1.0}, 5.0, 500.0, 12, 1);
  EXPECT_FALSE(b.monotone);
}

TEST(Scan, WindowPartitionIndependent) {
  const SurfaceModel m = builtin_model("synthetic-mixed");
  const TruncationHeights a{30.0, 200.0};
  const auto whole = real_branch_roots(*m.scattering, a, 0.5, 1.0);
  const auto left = real_branch_roots(*m.scattering, a, 0.5, 0.7);
  const auto right = real_branch_roots(*m.scattering, a, 0.7, 1.0);
  ASSERT_EQ(whole.roots.size(), left.roots.size() + right.roots.size());
  std::size_t k = 0;
  for (const auto* part : {&left, &right})
    for (const auto& r : part->roots) EXPECT_NEAR(r.param.s.real(), whole.roots[k++].param.s.real(), 1e-10);
}

TEST(Scan, BruteForceAgrees) {
  for (const char* name : {"synthetic-beta1", "synthetic-barrier", "synthetic-twin", "modular"}) {
    const SurfaceModel m = builtin_model(name);
    const TruncationHeights a(m.num_cusps(), 50.0);
    const auto fast = real_branch_roots(*m.scattering, a, 0.5, 1.0);
    int regular = 0;
    for (const auto& r : fast.roots)
      if (r.classification == RootClass::regular) regular += r.multiplicity;
    EXPECT_EQ(brute_force_secular(*m.scattering, a, 0.5, 1.0).total_multiplicity(), regular) << name;
  }
}
