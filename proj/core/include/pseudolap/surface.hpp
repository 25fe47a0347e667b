#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pseudolap {

class ScatteringModel;

// Truncation heights a = (a_1, ..., a_n), one per cusp.
using TruncationHeights = std::vector<double>;

// A finite-area hyperbolic surface with cusps, described by its topology and
// its scattering data. Orbifolds (e.g. the modular surface) are supported by
// listing cone-point orders; the area then follows from the orbifold Euler
// characteristic.
struct SurfaceModel {
  std::string name;
  int genus = 0;
  bool orientable = true;
  std::vector<double> base_heights;  // b_i > 0, one per cusp
  std::vector<int> cone_orders;      // empty for a genuine surface
  std::optional<double> systole_hint;
  std::optional<std::vector<double>> cuspidal_eigenvalues;  // ascending
  std::shared_ptr<const ScatteringModel> scattering;
  // Monotonicity and counting diagnostics only fail runs on models flagged as surfaces.
  bool surface_flagged = true;

  std::size_t num_cusps() const { return base_heights.size(); }
};

// Throws InvalidTopology / DomainError when the model is inconsistent.
void validate_model(const SurfaceModel& m);

// chi(S) of the underlying punctured surface.
int euler_characteristic(const SurfaceModel& m);

// chi(S) minus the cone-point corrections sum (1 - 1/m_k).
double orbifold_euler_characteristic(const SurfaceModel& m);

// 2 pi |chi|, using the orbifold characteristic when cone points are present.
double area(const SurfaceModel& m);

// Upper bound on the number of small eigenvalues: |chi| for surfaces,
// ceil(|chi_orb|) for orbifolds.
int eigenvalue_budget(const SurfaceModel& m);

// Length of the horocycle at height t in a standard cusp.
double horocycle_length(double t);

void validate_truncation(const SurfaceModel& m, const TruncationHeights& a);

}  // namespace pseudolap
