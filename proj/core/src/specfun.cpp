#include "pseudolap/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "pseudolap/errors.hpp"

namespace pseudolap::specfun {
namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640561764;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} / (2k)! for k = 1..20.
constexpr std::array<double, 20> kBernoulliOverFactorial = [] {
  constexpr std::array<double, 20> b2k = {
      1.0 / 6.0,
      -1.0 / 30.0,
      1.0 / 42.0,
      -1.0 / 30.0,
      5.0 / 66.0,
      -691.0 / 2730.0,
      7.0 / 6.0,
      -3617.0 / 510.0,
      43867.0 / 798.0,
      -174611.0 / 330.0,
      854513.0 / 138.0,
      -236364091.0 / 2730.0,
      8553103.0 / 6.0,
      -23749461029.0 / 870.0,
      8615841276005.0 / 14322.0,
      -7709321041217.0 / 510.0,
      2577687858367.0 / 6.0,
      -26315271553053477373.0 / 1919190.0,
      2929993913841559.0 / 6.0,
      -261082718496449122051.0 / 13530.0};
  std::array<double, 20> out{};
  double fact = 1.0;
  for (int k = 1; k <= 20; ++k) {
    fact *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
    out[k - 1] = b2k[k - 1] / fact;
  }
  return out;
}();

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Complex log_gamma_right(Complex z) {
  // Re z >= 1/2.
  const Complex zm = z - 1.0;
  Complex acc = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (zm + static_cast<double>(k));
  const Complex t = zm + kLanczosG + 0.5;
  return kLnSqrt2Pi + (zm + 0.5) * std::log(t) - t + std::log(acc);
}

Complex sin_pi(Complex z) {
  // sin(pi z) with exact zeros at integers on the real axis.
  const double re = z.real();
  const double n = std::round(re);
  const double frac = re - n;
  const double sign = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sin(kPi * Complex(frac, z.imag()));
}

Complex cot_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex w(z.real() - n, z.imag());
  return std::cos(kPi * w) / std::sin(kPi * w);
}

// Euler-Maclaurin partial evaluation: returns the pieces needed for both
// zeta(z) and (z - 1) zeta(z).
struct EulerMaclaurin {
  Complex regular;       // sum_{n<N} n^{-z} + N^{-z}/2 + tail corrections
  Complex regular_diff;  // d/dz of `regular`
  Complex head;          // N^{1-z}
  Complex head_diff;     // d/dz N^{1-z}
};

EulerMaclaurin euler_maclaurin(Complex z) {
  const int big_n = std::max(40, static_cast<int>(std::ceil(std::abs(z))) + 10);
  EulerMaclaurin em{};
  for (int n = 1; n < big_n; ++n) {
    const double ln_n = std::log(static_cast<double>(n));
    const Complex p = std::exp(-z * ln_n);
    em.regular += p;
    em.regular_diff -= ln_n * p;
  }
  const double ln_big = std::log(static_cast<double>(big_n));
  const Complex n_pow = std::exp(-z * ln_big);  // N^{-z}
  em.regular += 0.5 * n_pow;
  em.regular_diff -= 0.5 * ln_big * n_pow;
  em.head = static_cast<double>(big_n) * n_pow;
  em.head_diff = -ln_big * em.head;

  // Rising product P_k(z) = z (z+1) ... (z + 2k - 2) and its derivative.
  Complex poly = z;
  Complex poly_diff = 1.0;
  Complex power = n_pow / static_cast<double>(big_n);  // N^{-z-1}
  for (std::size_t k = 1; k <= kBernoulliOverFactorial.size(); ++k) {
    const double c = kBernoulliOverFactorial[k - 1];
    const Complex term = c * poly * power;
    const Complex term_diff = c * (poly_diff * power - ln_big * poly * power);
    em.regular += term;
    em.regular_diff += term_diff;
    if (std::abs(term) < 1e-18 * std::abs(em.regular) && std::abs(term_diff) < 1e-18 * (std::abs(em.regular_diff) + 1e-300)) break;
    // advance P_k -> P_{k+1}: multiply by (z + 2k - 1)(z + 2k)
    for (int j = 2 * static_cast<int>(k) - 1; j <= 2 * static_cast<int>(k); ++j) {
      poly_diff = poly_diff * (z + static_cast<double>(j)) + poly;
      poly = poly * (z + static_cast<double>(j));
    }
    power /= static_cast<double>(big_n) * static_cast<double>(big_n);
  }
  return em;
}

Complex zeta_euler_maclaurin(Complex z) {
  const EulerMaclaurin em = euler_maclaurin(z);
  return em.regular + em.head / (z - 1.0);
}


void check_bessel_args(Complex order, double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << who << ": argument must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
  if (!(std::abs(order) <= kMaxBesselOrder)) {
    std::ostringstream msg;
    msg << who << ": |order| must not exceed " << kMaxBesselOrder;
    throw DomainError(msg.str());
  }
}

}  // namespace

Complex log_gamma(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z), principal branches.
    return std::log(kPi) - std::log(sin_pi(z)) - log_gamma_right(1.0 - z);
  }
  return log_gamma_right(z);
}

Complex gamma(Complex z) {
  if (is_nonpositive_integer(z)) {
    std::ostringstream msg;
    msg << "gamma: pole at " << z.real();
    throw PoleError(msg.str());
  }
  if (z.real() < 0.5) return kPi / (sin_pi(z) * std::exp(log_gamma_right(1.0 - z)));
  return std::exp(log_gamma_right(z));
}

Complex digamma(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("digamma: pole at non-positive integer");
  if (z.real() < 0.5) return digamma(1.0 - z) - kPi * cot_pi(z);
  Complex shift = 0.0;
  while (z.real() < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv2 = 1.0 / (z * z);
  // psi(z) ~ ln z - 1/(2z) - sum B_{2k} / (2k z^{2k})
  constexpr std::array<double, 8> c = {1.0 / 12.0,   -1.0 / 120.0,      1.0 / 252.0,     -1.0 / 240.0,
                                       1.0 / 132.0,  -691.0 / 32760.0,  1.0 / 12.0,      -3617.0 / 8160.0};
  Complex series = 0.0;
  Complex p = inv2;
  for (double ck : c) {
    series += ck * p;
    p *= inv2;
  }
  return shift + std::log(z) - 0.5 / z - series;
}

Complex zeta(Complex z) {
  if (z == Complex(1.0, 0.0)) throw PoleError("zeta: pole at z = 1");
  if (z.real() < 0.0) {
    // zeta(z) = 2^z pi^{z-1} sin(pi z / 2) Gamma(1 - z) zeta(1 - z)
    const Complex w = 1.0 - z;
    const Complex half_sin = sin_pi(0.5 * z);
    return std::exp(z * std::log(2.0) + (z - 1.0) * std::log(kPi) + log_gamma(w)) * half_sin *
           zeta_euler_maclaurin(w);
  }
  return zeta_euler_maclaurin(z);
}

ValueAndDerivative zeta_pole_removed(Complex z) {
  if (z.real() < -5.0) throw DomainError("zeta_pole_removed: requires Re z >= -5");
  const EulerMaclaurin em = euler_maclaurin(z);
  ValueAndDerivative out;
  out.value = (z - 1.0) * em.regular + em.head;
  out.derivative = em.regular + (z - 1.0) * em.regular_diff + em.head_diff;
  return out;
}

Complex completed_xi(Complex u) {
  if (u == Complex(0.0, 0.0) || u == Complex(1.0, 0.0)) throw PoleError("completed_xi: pole at u in {0, 1}");
  // Gamma(u/2) has poles at the trivial zeros u = -2, -4, ...; the product is
  // finite there and equals xi(1 - u).
  if (is_nonpositive_integer(0.5 * u)) return completed_xi(1.0 - u);
  return std::exp(-0.5 * u * std::log(kPi) + log_gamma(0.5 * u)) * zeta(u);
}

ValueAndDerivative entire_xi(Complex u) {
  // Lambda(u) = 2 pi^{-u/2} Gamma(u/2 + 1) (u - 1) zeta(u). Evaluated on the
  // side Re u >= 1/2 and reflected otherwise.
  if (u.real() < 0.5) {
    const ValueAndDerivative r = entire_xi(1.0 - u);
    return {r.value, -r.derivative};
  }
  const Complex half = 0.5 * u + 1.0;
  const Complex pre = 2.0 * std::exp(-0.5 * u * std::log(kPi) + log_gamma(half));
  const ValueAndDerivative z = zeta_pole_removed(u);
  const Complex log_pre_diff = -0.5 * std::log(kPi) + 0.5 * digamma(half);
  ValueAndDerivative out;
  out.value = pre * z.value;
  out.derivative = pre * (log_pre_diff * z.value + z.derivative);
  return out;
}

Complex bessel_k(Complex order, double x) {
  check_bessel_args(order, x, "bessel_k");
  // K is even in the order.
  if (order.real() < 0.0 || (order.real() == 0.0 && order.imag() < 0.0)) order = -order;
  const double sigma = order.real();
  const double tau = order.imag();

  // K_nu(x) = 1/2 * integral_R exp(-x cosh t + nu t) dt, shifted to the line
  // t = u + i theta through the saddle so that the oscillation induced by an
  // imaginary order does not cancel.
  double theta = 0.0;
  if (tau != 0.0) {
    const double delta = std::min(0.5, 2.0 / std::abs(tau));
    theta = std::min(std::asin(std::min(std::abs(tau) / x, 1.0)), 0.5 * kPi - delta);
    if (tau < 0.0) theta = -theta;
  }
  const double ct = std::cos(theta);
  auto log_mag = [&](double u) { return -x * ct * std::cosh(u) + sigma * u; };

  const double u_peak = std::asinh(sigma / (x * ct));
  const double peak = log_mag(u_peak);
  constexpr double kDrop = 42.0;
  auto find_edge = [&](double dir) {
    double step = 0.25;
    double u = u_peak;
    while (log_mag(u + dir * step) > peak - kDrop) {
      u += dir * step;
      step *= 1.5;
    }
    // bisect the edge down to a 1e-3 band
    double lo = u, hi = u + dir * step;
    while (std::abs(hi - lo) > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (log_mag(mid) > peak - kDrop ? lo : hi) = mid;
    }
    return hi;
  };
  const double u_lo = find_edge(-1.0);
  const double u_hi = find_edge(+1.0);

  // Trapezoidal rule: error ~ exp(-2 pi d / h) times the growth of the
  // integrand over the strip of half-width d around the contour.
  const double d = 0.5 * (0.5 * kPi - std::abs(theta));
  const double growth = x * (ct - std::cos(std::abs(theta) + d)) + std::abs(tau) * d;
  const double h = std::min(0.1, 2.0 * kPi * d / (kDrop + growth));
  const auto count = static_cast<long>(std::ceil((u_hi - u_lo) / h));
  const double step = (u_hi - u_lo) / static_cast<double>(count);

  const Complex i_theta(0.0, theta);
  Complex sum = 0.0;
  for (long m = 0; m <= count; ++m) {
    const double u = u_lo + step * static_cast<double>(m);
    const Complex t = Complex(u, 0.0) + i_theta;
    const Complex expo = -x * std::cosh(t) + order * t - peak;
    const double w = (m == 0 || m == count) ? 0.5 : 1.0;
    sum += w * std::exp(expo);
  }
  Complex value = 0.5 * step * sum * std::exp(peak);
  if (sigma == 0.0 || tau == 0.0) value = Complex(value.real(), 0.0);
  return value;
}

Complex bessel_i(Complex order, double x) {
  check_bessel_args(order, x, "bessel_i");
  // I_{-n} = I_n for integers n.
  if (is_nonpositive_integer(order + 1.0)) order = -order;

  const double mag = std::abs(order);
  if (x > 40.0 && mag * mag < 0.25 * x) {
    // Hankel expansion; the exponentially small companion term is dropped.
    const Complex mu = 4.0 * order * order;
    Complex sum = 1.0;
    Complex term = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      const Complex next = -term * (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
      if (std::abs(next) > std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
  }

  // Power series sum_k (x/2)^{2k+nu} / (k! Gamma(k + nu + 1)).
  const double q = 0.25 * x * x;
  Complex term = std::exp(order * std::log(0.5 * x) - log_gamma(order + 1.0));
  Complex sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= q / (static_cast<double>(k) * (static_cast<double>(k) + order));
    sum += term;
    if (static_cast<double>(k) > 0.5 * x && std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  if (order.imag() == 0.0) sum = Complex(sum.real(), 0.0);
  return sum;
}

}  // namespace pseudolap::specfun
