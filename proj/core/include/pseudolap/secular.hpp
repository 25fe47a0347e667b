#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudolap/scattering.hpp"
#include "pseudolap/surface.hpp"
#include "pseudolap/types.hpp"

namespace pseudolap {

enum class Chart { real_branch, critical_line };

// lambda = s (1 - s); on the critical line s = 1/2 + i t and lambda = 1/4 + t^2.
struct SpectralParameter {
  Chart chart = Chart::real_branch;
  Complex s;
  double t = 0.0;
  double lambda = 0.0;

  static SpectralParameter real(double s);
  static SpectralParameter critical(double t);
};

enum class RootClass { regular, singular_mixed, quarter };

struct SecularRoot {
  SpectralParameter param;
  CVector alpha;        // unit vector, largest entry real positive
  CMatrix alpha_basis;  // one column per independent solution
  int multiplicity = 1;
  RootClass classification = RootClass::regular;
  double residual = 0.0;
};

struct ScanOptions {
  int grid = 1000;             // uniform points per pole-free interval
  double tol = 1e-12;          // root bracket width on s or t
  double half_margin = 1e-7;   // s = 1/2 is left to quarter_multiplicity
  double pole_margin = 1e-8;
  double tangency_tol = 1e-10;
  double t_step = 0.0;         // 0 selects a step from the truncation heights
};

// M_ij = phi_ij(s) a_j^{1-2s}
CMatrix secular_matrix(const ScatteringModel& model, Complex s, const TruncationHeights& a);

struct RealBranchResult {
  std::vector<SecularRoot> roots;
  std::vector<double> poles_examined;
  // singular points with a nontrivial solution supported in P(s) only
  std::vector<double> rejected_singular;
};

RealBranchResult real_branch_roots(const ScatteringModel& model, const TruncationHeights& a, double s_lo,
                                   double s_hi, const ScanOptions& opt = {});

// Solution space of the mixed system at a pole s_p.
struct MixedSystem {
  double s = 0.0;
  SingularityClassification classification;
  CMatrix matrix;     // rows = equations j, columns = unknowns alpha_i
  CMatrix nullspace;  // orthonormal columns
  int q_rank = 0;     // rank of the nullspace restricted to Q(s)
  bool admissible() const { return q_rank > 0; }
};

MixedSystem mixed_system(const ScatteringModel& model, const TruncationHeights& a, double s_pole);

std::vector<SecularRoot> critical_line_roots(const ScatteringModel& model, const TruncationHeights& a, double t_lo,
                                             double t_hi, const ScanOptions& opt = {});

struct QuarterReport {
  CMatrix e_plus;
  CMatrix e_minus;
  RVector d_a;
  CMatrix condition;  // B^* (D_a + Phi'(1/2)^T) B, B an orthonormal basis of E-
  CMatrix kernel;     // alpha^- spanning the multiplicity space
  int mu = 0;
};

QuarterReport quarter_multiplicity(const ScatteringModel& model, const TruncationHeights& a);

// Scales c in [c_lo, c_hi] where mu(c a_base) > 0, located by bisection on the
// eigenvalues of the quarter condition matrix.
std::vector<double> quarter_transitions(const ScatteringModel& model, const TruncationHeights& a_base, double c_lo,
                                        double c_hi, int samples = 200);

std::vector<std::pair<double, int>> residual_spectrum(const ScatteringModel& model);

struct BarrierReport {
  double s_pole = 0.0;
  double lambda = 0.0;
  SingularityClass kind = SingularityClass::regular;
  bool barrier = false;             // completely singular
  bool eigenvalue_at_pole = false;  // the mixed system has an admissible solution
  int residual_index = 0;           // position among residual eigenvalues
  int eigenvalues_below = 0;
  std::optional<double> below;
  std::optional<double> above;
  bool interlacing = false;
};

BarrierReport barrier_check(const ScatteringModel& model, const TruncationHeights& a, double s_pole,
                            const ScanOptions& opt = {});

// Real-branch, quarter and critical-line eigenvalues, ascending in lambda.
std::vector<SecularRoot> discrete_spectrum(const ScatteringModel& model, const TruncationHeights& a, double t_max,
                                           const ScanOptions& opt = {});

std::vector<SecularRoot> spectrum_in_lambda_window(const ScatteringModel& model, const TruncationHeights& a,
                                                   double lambda_lo, double lambda_hi, const ScanOptions& opt = {});

struct CountReport {
  double lambda_max = 0.25;
  int cuspidal = 0;
  bool cuspidal_assumed_zero = false;
  int real_branch = 0;
  int quarter = 0;
  int total = 0;
  int budget = 0;
  bool within_budget = true;
  std::string verdict;  // PASS or MODEL-NOT-SURFACE
};

CountReport count_below(const SurfaceModel& m, const TruncationHeights& a, double lambda_max = 0.25,
                        const ScanOptions& opt = {});

struct BranchSample {
  double scale = 0.0;
  double lambda = 0.0;
  Chart chart = Chart::real_branch;
};

struct SpectralBranch {
  int index = 0;
  std::vector<BranchSample> samples;
  double target = 0.0;
  bool monotone = true;
  bool limit_ok = true;
  std::size_t first_violation = 0;  // sample index where monotonicity first fails
  bool ok() const { return monotone && limit_ok; }
};

// Follows the j-th eigenvalue (ascending at the base point, counted with
// multiplicity) along a = c * a_base for geometric c in [c_lo, c_hi].
SpectralBranch branch_sweep(const ScatteringModel& model, const TruncationHeights& a_base, double c_lo, double c_hi,
                            int samples, int j, const ScanOptions& opt = {});

}  // namespace pseudolap
