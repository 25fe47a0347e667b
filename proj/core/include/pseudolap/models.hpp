#pragma once

#include <string>
#include <vector>

#include "pseudolap/scattering.hpp"
#include "pseudolap/surface.hpp"

namespace pseudolap {

struct BuiltinInfo {
  std::string name;
  std::string description;
  // Negative controls are flagged as surfaces so the diagnostics fire on them,
  // but they are excluded from suites that expect every check to pass.
  bool negative_control = false;
};

const std::vector<BuiltinInfo>& builtin_models();

// Throws ModelFormatError for unknown names.
SurfaceModel builtin_model(const std::string& name);

// INI-style model file:
//
//   [topology]   name, genus, orientable, cone_orders (comma list), surface
//   [cusps]      base_heights (comma list)
//   [scattering] kind = modular | synthetic | tampered | tabulated
//                synthetic: betas, mixing (row-major, n*n entries)
//                tampered:  base (builtin name), c1, c3
//                tabulated: table (path, relative to the model file)
//   [spectrum]   cuspidal (comma list, optional)
//   [systole]    length (optional)
//
// Structure checks run on load; failures raise StructureViolation.
SurfaceModel load_model_file(const std::string& path);

// A builtin name or a path to a model file.
SurfaceModel resolve_model(const std::string& source);

// Table format, one record per line, '#' starts a comment:
//   sample s_re s_im  (re im) x n^2, row-major
//   pole   s_p        (re im) x n^2, row-major
// The first record must be "dim n".
ScatteringPtr load_scattering_table(const std::string& path, const std::string& name);

}  // namespace pseudolap
