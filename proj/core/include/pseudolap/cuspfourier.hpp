#pragma once

#include <functional>
#include <vector>

#include "pseudolap/types.hpp"

namespace pseudolap {

// f_k(y) = int_0^1 f(x + iy) y^{1/2} e^{2 pi i k x} dx by the trapezoidal rule.
// `samples` holds f at x_m = m / N, m = 0..N-1, with N >= 64.
Complex fourier_coefficient(const std::vector<Complex>& samples, int k, double y);

// sup over the interior of |y^2 c'' + y c' - (1/4 + 4 pi^2 k^2 y^2 - lambda) c|,
// derivatives by 5-point central differences.
using CoefficientFunction = std::function<Complex(double)>;

double mode_ode_residual(const CoefficientFunction& c, double y0, double y1, int k, Complex lambda,
                         int points = 64, double rel_step = 2e-3);

// Same, for values sampled on the uniform grid y_m = y0 + m h.
double mode_ode_residual(const std::vector<Complex>& values, double y0, double h, int k, Complex lambda);

enum class BasisKind { generic, branch_point };

// Fundamental solutions of the zero-mode equation at s. The coefficient form
// is (y^{s-1/2}, y^{1/2-s}) or (1, ln y); the y-only eigenfunctions are the
// same times y^{1/2}.
struct ZeroModeSolutionBasis {
  Complex s;
  BasisKind kind;

  Complex coefficient(int which, double y) const;
  Complex eigenfunction(int which, double y) const;
  Complex eigenfunction_derivative(int which, double y) const;
};

ZeroModeSolutionBasis zero_mode_basis(Complex s);

double cusp_rayleigh_bound(double b);

}  // namespace pseudolap
