#include "pseudolap/surface.hpp"

#include <cmath>
#include <sstream>

#include "pseudolap/errors.hpp"
#include "pseudolap/scattering.hpp"
#include "pseudolap/types.hpp"

namespace pseudolap {

void validate_model(const SurfaceModel& m) {
  if (m.num_cusps() == 0) throw InvalidTopology("model must have at least one cusp");
  if (m.genus < 0) throw InvalidTopology("genus must be non-negative");
  for (double b : m.base_heights) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("base heights must be positive and finite");
  }
  for (int order : m.cone_orders) {
    if (order < 2) throw InvalidTopology("cone orders must be at least 2");
  }
  if (m.systole_hint && !(*m.systole_hint > 0.0)) throw DomainError("systole hint must be positive");
  if (m.cuspidal_eigenvalues) {
    const auto& ev = *m.cuspidal_eigenvalues;
    for (std::size_t k = 1; k < ev.size(); ++k) {
      if (ev[k] < ev[k - 1]) throw DomainError("cuspidal eigenvalues must be ascending");
    }
  }
  if (!(orbifold_euler_characteristic(m) < 0.0)) {
    std::ostringstream msg;
    msg << "Euler characteristic " << orbifold_euler_characteristic(m) << " is not negative";
    throw InvalidTopology(msg.str());
  }
  if (m.scattering && m.scattering->dimension() != m.num_cusps()) {
    throw InvalidTopology("scattering dimension does not match the number of cusps");
  }
}

int euler_characteristic(const SurfaceModel& m) {
  const int n = static_cast<int>(m.num_cusps());
  return m.orientable ? 2 - 2 * m.genus - n : 2 - m.genus - n;
}

double orbifold_euler_characteristic(const SurfaceModel& m) {
  double chi = euler_characteristic(m);
  for (int order : m.cone_orders) chi -= 1.0 - 1.0 / order;
  return chi;
}

double area(const SurfaceModel& m) {
  const double chi = orbifold_euler_characteristic(m);
  if (!(chi < 0.0)) throw InvalidTopology("area requires a negative Euler characteristic");
  return 2.0 * kPi * std::abs(chi);
}

int eigenvalue_budget(const SurfaceModel& m) {
  if (m.cone_orders.empty()) return std::abs(euler_characteristic(m));
  return static_cast<int>(std::ceil(std::abs(orbifold_euler_characteristic(m)) - 1e-12));
}

double horocycle_length(double t) {
  if (!(t > 0.0)) throw DomainError("horocycle height must be positive");
  return 1.0 / t;
}

void validate_truncation(const SurfaceModel& m, const TruncationHeights& a) {
  if (a.size() != m.num_cusps()) {
    std::ostringstream msg;
    msg << "expected " << m.num_cusps() << " truncation heights, got " << a.size();
    throw DomainError(msg.str());
  }
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > m.base_heights[i])) bad.push_back(i + 1);
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "truncation height must exceed the base height at cusp";
    for (std::size_t i : bad) msg << ' ' << i;
    throw TruncationBelowBase(msg.str(), bad);
  }
}

}  // namespace pseudolap
