#pragma once

// Special functions in binary64: Gamma, digamma, Riemann zeta, the completed
// zeta function xi(u) = pi^{-u/2} Gamma(u/2) zeta(u), and modified Bessel
// functions I_nu, K_nu of complex order and positive real argument.
//
// All functions are pure and thread-safe. Errors are reported by exception:
// PoleError at poles, DomainError outside the supported argument range.

#include "pseudolap/types.hpp"

namespace pseudolap::specfun {

// Module-level accuracy targets. The implementations are tuned to meet these
// on the documented domains; the test-suite asserts them.
struct Tolerances {
  static constexpr double gamma_rel = 1e-12;   // |z| <= 50
  static constexpr double zeta_rel = 1e-12;    // |Im z| <= 50, Re z >= -5
  static constexpr double bessel_rel = 1e-10;  // |order| <= 60
};

inline constexpr double kMaxBesselOrder = 60.0;

Complex log_gamma(Complex z);
Complex gamma(Complex z);
Complex digamma(Complex z);

Complex zeta(Complex z);

// (z - 1) * zeta(z) and its derivative; entire, evaluated without the pole
// cancellation that zeta(z) would suffer near z = 1. Valid for Re z >= -5.
struct ValueAndDerivative {
  Complex value;
  Complex derivative;
};
ValueAndDerivative zeta_pole_removed(Complex z);

Complex completed_xi(Complex u);

// Lambda(u) = u (u - 1) xi(u), the entire completion of xi, with its
// derivative. Lambda(0) = Lambda(1) = 1 and Lambda(u) = Lambda(1 - u).
ValueAndDerivative entire_xi(Complex u);

// K_nu(x). For purely imaginary order the value is real and returned with a
// zero imaginary part.
Complex bessel_k(Complex order, double x);

// I_nu(x).
Complex bessel_i(Complex order, double x);

}  // namespace pseudolap::specfun
