#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pseudolap/eisenstein.hpp"
#include "pseudolap/scattering.hpp"
#include "pseudolap/secular.hpp"

namespace pseudolap {

// Oracle tolerances are kept 10x looser than the production ones.
inline constexpr double kOracleMatchingTolerance = 1e-8;

// --- transfer conditions at the truncation horocycles -------------------------

struct CuspMatching {
  double value_mismatch = 0.0;  // |zero mode at a_j|, relative to its largest term
  Complex jump;                 // recomputed by finite differences
  Complex expected_jump;        // -d/dy of the zero mode at a_j
  double jump_defect = 0.0;
  double constancy_defect = 0.0;  // variation of the jump along the horocycle
};

struct MatchingDatum {
  std::vector<CuspMatching> cusps;
  double tol = kOracleMatchingTolerance;
  bool pass = false;
};

MatchingDatum matching_check(const TruncatedProfile& profile, double tol = kOracleMatchingTolerance);

// Same conditions for the modular surface, with the jump measured from the
// full pointwise Eisenstein series at `samples` points of the horocycle y = a.
MatchingDatum modular_matching_check(double s, double a, int samples = 16, double tol = kOracleMatchingTolerance);

// --- dense determinant scan ----------------------------------------------------

struct BruteRoot {
  double s = 0.0;
  int multiplicity = 1;  // 2 for a tangency
  bool tangency = false;
};

struct BruteForceResult {
  std::vector<BruteRoot> roots;
  std::vector<double> skipped_poles;
  int total_multiplicity() const;
};

// Sign changes of det(M(s) + I), real for real s, on a grid of step <= 1e-4,
// plus tangencies. Brackets containing a pole are skipped.
BruteForceResult brute_force_secular(const ScatteringModel& model, const TruncationHeights& a, double s_lo,
                                     double s_hi, double step = 1e-4);

// --- modular Eisenstein series ---------------------------------------------------

using BesselKFunction = std::function<double(double order, double x)>;

struct ModularPoint {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  int terms = 0;
};

// E(z, s) = y^s + phi(s) y^{1-s} + 4 sqrt(y) / xi(2s) sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n y) cos(2 pi n x)
// for real s. `terms` = 0 picks the truncation with tail below 1e-12.
ModularPoint modular_eisenstein_point(double x, double y, double s, int terms = 0, const BesselKFunction& k = {});

// |E(-1/z) - E(z)| / |E(z)|
double modular_automorphy_defect(double x, double y, double s, int terms = 0);

// |-y^2 (E_xx + E_yy) - s(1-s) E| / |s(1-s) E| with 5-point stencils.
double modular_eigen_residual(double x, double y, double s, double h = 1e-3);

struct RayleighResult {
  double quotient = 0.0;
  double lambda = 0.0;
  double rel_error = 0.0;
  double coarse_rel_error = 0.0;  // same quadrature on the grid with half as many points
  bool pass = false;
};

// Rayleigh quotient of the truncated modular Eisenstein function at a real
// root s for height a: fundamental domain below a plus the cusp strip
// [a, a + 1.5], composite Simpson in x and in the rescaled height.
RayleighResult rayleigh_probe(double s, double a, double lambda_claimed, int nx = 16, int ny = 64, double tol = 1e-3);

// First Dirichlet eigenvalue of the hyperbolic disc of radius R from a
// cell-centred finite-difference discretisation with `points` cells.
double disc_lambda0_fd(double radius, int points = 2000);

// --- verification suite -------------------------------------------------------------

std::uint64_t fnv1a(const std::string& text);

struct VerificationCheck {
  std::string name;
  std::string inputs;
  std::string digest;  // FNV-1a of `inputs`, hex
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_pass() const;
};

VerificationReport run_verification_suite();

}  // namespace pseudolap
