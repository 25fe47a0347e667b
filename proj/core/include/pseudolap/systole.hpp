#pragma once

#include <vector>

#include "pseudolap/surface.hpp"

namespace pseudolap {

// First Dirichlet eigenvalue of the geodesic disc of area V in H^2, by
// shooting on u'' + coth(r) u' + lambda u = 0 with u'(0) = 0, u(R) = 0.
double hyperbolic_disc_lambda0(double area, double tol = 1e-10);

// Radius of the hyperbolic disc of area V: V = 2 pi (cosh R - 1).
double hyperbolic_disc_radius(double area);

// 1/4 + min(pi / |S|, sys^2 / |S|^2)
double geodesic_annulus_bound(double area, double sys);

// pi^2 a^2. Only bounds the part of a test function inside a cusp region
// above height a, for functions vanishing somewhere on every horocycle.
double cusp_type5_ingredient(double a);

struct SystoleReport {
  double area = 0.0;
  double systole = 0.0;
  double disc_bound = 0.0;              // domains of types 1 and 2
  double geodesic_annulus_bound = 0.0;  // types 3 and 4
  std::vector<double> cusp_bound_per_cusp;
  double certified_min_types_1_4 = 0.0;
  // Type 5 domains are only known to have bottom of spectrum above 1/4;
  // no constant is available, so none is reported.
  bool type5_qualitative = true;
};

SystoleReport systole_report(const SurfaceModel& m, const TruncationHeights& a);

}  // namespace pseudolap
