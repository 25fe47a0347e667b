#pragma once

#include <cstddef>
#include <vector>

#include "pseudolap/scattering.hpp"
#include "pseudolap/surface.hpp"
#include "pseudolap/types.hpp"

namespace pseudolap {

enum class ProfileKind { generic, half };

// Zero modes in every cusp. generic: first_j y^s + second_j y^{1-s};
// half (s = 1/2): first_j y^{1/2} + second_j y^{1/2} ln y.
struct ZeroModeProfile {
  Complex s;
  ProfileKind kind = ProfileKind::generic;
  CVector first;
  CVector second;

  std::size_t cusps() const { return static_cast<std::size_t>(first.size()); }
  Complex value(std::size_t j, double y) const;
  Complex derivative(std::size_t j, double y) const;
  // Largest single term at height y, used as a scale for mismatch tests.
  double scale(std::size_t j, double y) const;
};

ZeroModeProfile eisenstein_zero_mode(const ScatteringModel& model, std::size_t i, Complex s);

ZeroModeProfile residue_zero_mode(const ScatteringModel& model, std::size_t i, double s_pole);

// Zero mode of the combination used by the secular system: sum over Q(s) of
// alpha_i E_i(., s) plus sum over P(s) of alpha_i res E_i(., s).
ZeroModeProfile secular_zero_mode(const ScatteringModel& model, Complex s, const CVector& alpha);

struct TruncatedProfile {
  ZeroModeProfile profile;
  TruncationHeights heights;
  CVector boundary_value;   // zero mode at y = a_j (the part removed above a_j)
  CVector derivative_jump;  // d/dy above minus d/dy below at a_j
  bool discontinuous = false;
};

inline constexpr double kContinuityTolerance = 1e-9;

TruncatedProfile truncate_zero_mode(const ZeroModeProfile& p, const TruncationHeights& a);

// Moderate-growth basis at s = 1/2 from alpha_plus in E+ and alpha_minus in E-
// (the +1 / -1 eigenspaces of Phi(1/2)^T).
ZeroModeProfile quarter_basis(const ScatteringModel& model, const CVector& alpha_plus, const CVector& alpha_minus);

}  // namespace pseudolap
