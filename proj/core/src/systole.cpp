#include "pseudolap/systole.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "pseudolap/errors.hpp"
#include "pseudolap/types.hpp"

namespace pseudolap {

namespace {

using State = std::array<double, 2>;

// True when the radial solution regular at the origin vanishes in (0, R].
bool has_zero(double lambda, double radius) {
  namespace odeint = boost::numeric::odeint;
  // Leave the coth singularity using the series u = 1 - lambda r^2/4 + c4 r^4.
  const double r0 = std::min(1e-3, 1e-3 * radius);
  const double c2 = -0.25 * lambda;
  const double c4 = lambda * (2.0 / 3.0 + lambda) / 64.0;
  State x{1.0 + c2 * r0 * r0 + c4 * std::pow(r0, 4), 2.0 * c2 * r0 + 4.0 * c4 * std::pow(r0, 3)};

  auto rhs = [lambda](const State& u, State& du, double r) {
    du[0] = u[1];
    du[1] = -u[1] / std::tanh(r) - lambda * u[0];
  };
  bool crossed = false;
  auto observer = [&crossed](const State& u, double) {
    if (u[0] <= 0.0) crossed = true;
  };
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  const int n = 400;
  odeint::integrate_const(stepper, rhs, x, r0, radius, (radius - r0) / n, observer);
  return crossed || x[0] <= 0.0;
}

}  // namespace

double hyperbolic_disc_radius(double area) {
  if (!(area > 0.0) || !std::isfinite(area)) throw DomainError("disc area must be positive and finite");
  return std::acosh(1.0 + area / (2.0 * kPi));
}

double hyperbolic_disc_lambda0(double area, double tol) {
  const double radius = hyperbolic_disc_radius(area);
  // lambda_0 > 1/4 always; grow the upper end until the solution has a zero.
  double lo = 0.25;
  double hi = 0.25 + 2.0 * (kPi * kPi + 6.0) / (radius * radius);
  while (!has_zero(hi, radius)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ConvergenceError("disc eigenvalue: no sign change found");
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (has_zero(mid, radius) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double geodesic_annulus_bound(double area, double sys) {
  if (!(area > 0.0) || !(sys > 0.0)) throw DomainError("geodesic annulus bound needs positive area and systole");
  return 0.25 + std::min(kPi / area, sys * sys / (area * area));
}

double cusp_type5_ingredient(double a) {
  if (!(a > 0.0)) throw DomainError("cusp height must be positive");
  return kPi * kPi * a * a;
}

SystoleReport systole_report(const SurfaceModel& m, const TruncationHeights& a) {
  if (!m.systole_hint) throw MissingSystole(m.name + ": no systole given");
  validate_truncation(m, a);
  SystoleReport r;
  r.area = area(m);
  r.systole = *m.systole_hint;
  r.disc_bound = hyperbolic_disc_lambda0(r.area);
  r.geodesic_annulus_bound = geodesic_annulus_bound(r.area, r.systole);
  for (double h : a) r.cusp_bound_per_cusp.push_back(cusp_type5_ingredient(h));
  r.certified_min_types_1_4 = std::min(r.disc_bound, r.geodesic_annulus_bound);
  return r;
}

}  // namespace pseudolap
