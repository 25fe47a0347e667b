#include "pseudolap/cuspfourier.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pseudolap/errors.hpp"

namespace pseudolap {

Complex fourier_coefficient(const std::vector<Complex>& samples, int k, double y) {
  if (!(y > 0.0)) throw DomainError("fourier_coefficient: height must be positive");
  const auto n = static_cast<int>(samples.size());
  if (n < 64) throw ResolutionError("fourier_coefficient: need at least 64 samples");
  if (2 * std::abs(k) >= n) {
    std::ostringstream msg;
    msg << "fourier_coefficient: |k| = " << std::abs(k) << " exceeds the Nyquist limit of " << n << " samples";
    throw ResolutionError(msg.str());
  }
  Complex sum = 0.0;
  for (int m = 0; m < n; ++m) {
    // reduce k m mod n so the phase stays exact for large k m
    const double phase = 2.0 * kPi * static_cast<double>((static_cast<long long>(k) * m) % n) / n;
    sum += samples[static_cast<std::size_t>(m)] * std::polar(1.0, phase);
  }
  return std::sqrt(y) * sum / static_cast<double>(n);
}

namespace {

Complex ode_defect(double y, Complex c, Complex c1, Complex c2, int k, Complex lambda) {
  const double kk = 4.0 * kPi * kPi * static_cast<double>(k) * static_cast<double>(k);
  return y * y * c2 + y * c1 - (0.25 + kk * y * y - lambda) * c;
}

}  // namespace

double mode_ode_residual(const CoefficientFunction& c, double y0, double y1, int k, Complex lambda, int points,
                         double rel_step) {
  if (points < 8) throw GridError("mode_ode_residual: need at least 8 points");
  if (!(y0 > 0.0) || !(y1 > y0)) throw DomainError("mode_ode_residual: need 0 < y0 < y1");
  double worst = 0.0;
  for (int m = 0; m < points; ++m) {
    const double y = y0 + (y1 - y0) * m / (points - 1);
    const double h = rel_step * y;
    const Complex fm2 = c(y - 2 * h), fm1 = c(y - h), f0 = c(y), fp1 = c(y + h), fp2 = c(y + 2 * h);
    const Complex d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    const Complex d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    worst = std::max(worst, std::abs(ode_defect(y, f0, d1, d2, k, lambda)));
  }
  return worst;
}

double mode_ode_residual(const std::vector<Complex>& values, double y0, double h, int k, Complex lambda) {
  const auto n = values.size();
  if (n < 8) throw GridError("mode_ode_residual: need at least 8 grid points");
  if (!(h > 0.0) || !(y0 > 0.0)) throw DomainError("mode_ode_residual: need y0 > 0 and h > 0");
  double worst = 0.0;
  for (std::size_t m = 2; m + 2 < n; ++m) {
    const double y = y0 + h * static_cast<double>(m);
    const Complex d1 = (values[m - 2] - 8.0 * values[m - 1] + 8.0 * values[m + 1] - values[m + 2]) / (12.0 * h);
    const Complex d2 =
        (-values[m - 2] + 16.0 * values[m - 1] - 30.0 * values[m] + 16.0 * values[m + 1] - values[m + 2]) /
        (12.0 * h * h);
    worst = std::max(worst, std::abs(ode_defect(y, values[m], d1, d2, k, lambda)));
  }
  return worst;
}

Complex ZeroModeSolutionBasis::coefficient(int which, double y) const {
  if (kind == BasisKind::branch_point) return which == 0 ? Complex(1.0) : Complex(std::log(y));
  return which == 0 ? std::pow(y, s - 0.5) : std::pow(y, 0.5 - s);
}

Complex ZeroModeSolutionBasis::eigenfunction(int which, double y) const {
  return std::sqrt(y) * coefficient(which, y);
}

Complex ZeroModeSolutionBasis::eigenfunction_derivative(int which, double y) const {
  if (kind == BasisKind::branch_point) {
    const double r = std::sqrt(y);
    return which == 0 ? Complex(0.5 / r) : Complex((0.5 * std::log(y) + 1.0) / r);
  }
  const Complex e = which == 0 ? s : 1.0 - s;
  return e * std::pow(y, e - 1.0);
}

ZeroModeSolutionBasis zero_mode_basis(Complex s) {
  return {s, s == Complex(0.5, 0.0) ? BasisKind::branch_point : BasisKind::generic};
}

double cusp_rayleigh_bound(double b) {
  if (!(b > 0.0)) throw DomainError("cusp_rayleigh_bound: height must be positive");
  return kPi * kPi * b * b;
}

}  // namespace pseudolap
