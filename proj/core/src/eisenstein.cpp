#include "pseudolap/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pseudolap/errors.hpp"

namespace pseudolap {

Complex ZeroModeProfile::value(std::size_t j, double y) const {
  const auto k = static_cast<Eigen::Index>(j);
  if (kind == ProfileKind::half) return std::sqrt(y) * (first[k] + second[k] * std::log(y));
  return first[k] * std::pow(y, s) + second[k] * std::pow(y, 1.0 - s);
}

Complex ZeroModeProfile::derivative(std::size_t j, double y) const {
  const auto k = static_cast<Eigen::Index>(j);
  if (kind == ProfileKind::half) {
    const double r = std::sqrt(y);
    return first[k] * (0.5 / r) + second[k] * ((0.5 * std::log(y) + 1.0) / r);
  }
  return first[k] * s * std::pow(y, s - 1.0) + second[k] * (1.0 - s) * std::pow(y, -s);
}

double ZeroModeProfile::scale(std::size_t j, double y) const {
  const auto k = static_cast<Eigen::Index>(j);
  if (kind == ProfileKind::half) {
    return std::sqrt(y) * std::max(std::abs(first[k]), std::abs(second[k] * std::log(y)));
  }
  return std::max(std::abs(first[k] * std::pow(y, s)), std::abs(second[k] * std::pow(y, 1.0 - s)));
}

namespace {

void require_cusp(const ScatteringModel& model, std::size_t i) {
  if (i >= model.dimension()) throw DomainError("cusp index out of range");
}

bool contains(const std::vector<std::size_t>& v, std::size_t i) { return std::find(v.begin(), v.end(), i) != v.end(); }

}  // namespace

ZeroModeProfile eisenstein_zero_mode(const ScatteringModel& model, std::size_t i, Complex s) {
  require_cusp(model, i);
  const auto n = static_cast<Eigen::Index>(model.dimension());
  const auto ii = static_cast<Eigen::Index>(i);
  const SingularityClassification cls = classify(model, s);
  if (contains(cls.P, i)) {
    std::ostringstream msg;
    msg << "E_" << i + 1 << " has a pole at s = " << s;
    throw AtPole(msg.str());
  }
  ZeroModeProfile p;
  p.s = s;
  if (s == Complex(0.5, 0.0)) {
    // y^{1/2} (delta_ij + phi_ij(1/2))
    p.kind = ProfileKind::half;
    p.first = model.at_half().row(ii).transpose();
    p.first[ii] += 1.0;
    p.second = CVector::Zero(n);
    return p;
  }
  const CMatrix phi = cls.P.empty() ? model.eval(s) : model.finite_part(s.real());
  p.first = CVector::Zero(n);
  p.first[ii] = 1.0;
  p.second = phi.row(ii).transpose();
  return p;
}

ZeroModeProfile residue_zero_mode(const ScatteringModel& model, std::size_t i, double s_pole) {
  require_cusp(model, i);
  const int k = model.pole_index(s_pole, 1e-9);
  if (k < 0) {
    std::ostringstream msg;
    msg << model.name() << ": s = " << s_pole << " is not a pole";
    throw NotAPole(msg.str());
  }
  const Pole& pole = model.poles()[static_cast<std::size_t>(k)];
  const SingularityClassification cls = classify(model, pole.s);
  if (!contains(cls.P, i)) {
    std::ostringstream msg;
    msg << "E_" << i + 1 << " is regular at s = " << s_pole;
    throw NotAPole(msg.str());
  }
  ZeroModeProfile p;
  p.s = pole.s;
  p.first = CVector::Zero(static_cast<Eigen::Index>(model.dimension()));
  p.second = pole.residue.row(static_cast<Eigen::Index>(i)).transpose();
  return p;
}

ZeroModeProfile secular_zero_mode(const ScatteringModel& model, Complex s, const CVector& alpha) {
  const auto n = static_cast<Eigen::Index>(model.dimension());
  if (alpha.size() != n) throw DomainError("coefficient vector has the wrong size");
  const SingularityClassification cls = classify(model, s);
  ZeroModeProfile p;
  p.s = s;
  if (cls.P.empty()) {
    p.first = alpha;
    p.second = model.eval(s).transpose() * alpha;
    return p;
  }
  const CMatrix fin = model.finite_part(s.real());
  const CMatrix& res = model.poles()[static_cast<std::size_t>(model.pole_index(s))].residue;
  CMatrix rows(n, n);
  p.first = CVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (contains(cls.P, static_cast<std::size_t>(i))) {
      rows.row(i) = res.row(i);
    } else {
      rows.row(i) = fin.row(i);
      p.first[i] = alpha[i];
    }
  }
  p.second = rows.transpose() * alpha;
  return p;
}

TruncatedProfile truncate_zero_mode(const ZeroModeProfile& p, const TruncationHeights& a) {
  const auto n = static_cast<Eigen::Index>(p.cusps());
  if (static_cast<Eigen::Index>(a.size()) != n) throw DomainError("truncation heights do not match the profile");
  TruncatedProfile t;
  t.profile = p;
  t.heights = a;
  t.boundary_value.resize(n);
  t.derivative_jump.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double y = a[jj];
    t.boundary_value[j] = p.value(jj, y);
    t.derivative_jump[j] = -p.derivative(jj, y);
    if (std::abs(t.boundary_value[j]) > kContinuityTolerance * std::max(1.0, p.scale(jj, y))) t.discontinuous = true;
  }
  return t;
}

ZeroModeProfile quarter_basis(const ScatteringModel& model, const CVector& alpha_plus, const CVector& alpha_minus) {
  const auto n = static_cast<Eigen::Index>(model.dimension());
  if (alpha_plus.size() != n || alpha_minus.size() != n) throw DomainError("coefficient vector has the wrong size");
  const CMatrix phi_t = model.at_half().transpose();
  const double dp = (phi_t * alpha_plus - alpha_plus).norm();
  const double dm = (phi_t * alpha_minus + alpha_minus).norm();
  if (dp > 1e-9 * std::max(1.0, alpha_plus.norm())) throw NotInEigenspace("alpha_plus is not in E+");
  if (dm > 1e-9 * std::max(1.0, alpha_minus.norm())) throw NotInEigenspace("alpha_minus is not in E-");
  ZeroModeProfile p;
  p.s = 0.5;
  p.kind = ProfileKind::half;
  p.first = 2.0 * alpha_plus + model.derivative_at_half().transpose() * alpha_minus;
  p.second = 2.0 * alpha_minus;
  return p;
}

}  // namespace pseudolap
