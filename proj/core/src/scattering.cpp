#include "pseudolap/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pseudolap/errors.hpp"
#include "pseudolap/specfun.hpp"

namespace pseudolap {

CMatrix ScatteringModel::finite_part(double s_pole) const {
  // Symmetric average cancels the odd pole term; the error is O(h^2).
  const double h = 1e-5;
  return 0.5 * (eval(s_pole + h) + eval(s_pole - h));
}

int ScatteringModel::pole_index(Complex s, double tol) const {
  const auto& ps = poles();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (std::abs(s - ps[k].s) <= tol) return static_cast<int>(k);
  }
  return -1;
}

namespace {

CMatrix scalar(Complex v) { return CMatrix::Constant(1, 1, v); }

void throw_at_pole(const std::string& who, double s) {
  std::ostringstream msg;
  msg << who << ": evaluation at the pole s = " << s;
  throw AtPole(msg.str());
}

}  // namespace

// --- modular ---------------------------------------------------------------

ModularScattering::ModularScattering() {
  // res_{s=1} phi = Lambda(0) / Lambda(2)
  const Complex res = specfun::entire_xi(0.0).value / specfun::entire_xi(2.0).value;
  poles_.push_back({1.0, scalar(Complex(res.real(), 0.0))});
}

Complex ModularScattering::phi(Complex s) {
  // xi(2s-1)/xi(2s) = -(s/(1-s)) Lambda(2-2s)/Lambda(2s)
  if (std::abs(s - 1.0) < 1e-14) throw_at_pole("modular", 1.0);
  const Complex g = s / (1.0 - s);
  return -g * specfun::entire_xi(2.0 - 2.0 * s).value / specfun::entire_xi(2.0 * s).value;
}

Complex ModularScattering::phi_derivative(Complex s) {
  if (std::abs(s - 1.0) < 1e-14) throw_at_pole("modular", 1.0);
  const Complex g = s / (1.0 - s);
  const Complex g_diff = 1.0 / ((1.0 - s) * (1.0 - s));
  const auto a = specfun::entire_xi(2.0 - 2.0 * s);
  const auto b = specfun::entire_xi(2.0 * s);
  const Complex a_diff = -2.0 * a.derivative;
  const Complex b_diff = 2.0 * b.derivative;
  return -(g_diff * a.value / b.value + g * a_diff / b.value - g * a.value * b_diff / (b.value * b.value));
}

CMatrix ModularScattering::eval(Complex s) const { return scalar(phi(s)); }
CMatrix ModularScattering::derivative(Complex s) const { return scalar(phi_derivative(s)); }

// --- synthetic -------------------------------------------------------------

SyntheticScattering::SyntheticScattering(std::vector<double> betas, Eigen::MatrixXd mixing, std::string name)
    : betas_(std::move(betas)), mixing_(std::move(mixing)), name_(std::move(name)) {
  const auto n = static_cast<Eigen::Index>(betas_.size());
  if (n == 0) throw DomainError("synthetic model needs at least one beta");
  if (mixing_.rows() != n || mixing_.cols() != n) throw InvalidMixing("mixing matrix has the wrong shape");
  const double defect = (mixing_.transpose() * mixing_ - Eigen::MatrixXd::Identity(n, n)).norm();
  if (!(defect <= 1e-12 * std::max(1.0, static_cast<double>(n)))) {
    std::ostringstream msg;
    msg << "mixing matrix is not orthogonal (|U^T U - I| = " << defect << ")";
    throw InvalidMixing(msg.str());
  }
  for (double b : betas_) {
    if (!(b > 0.5 && b <= 1.0)) throw DomainError("synthetic beta must lie in (1/2, 1]");
  }
  std::vector<double> distinct = betas_;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (double p : distinct) {
    CVector d = CVector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (betas_[k] == p) d[k] = 2.0 * p - 1.0;
    }
    poles_.push_back({p, assemble(d)});
  }
}

CMatrix SyntheticScattering::assemble(const CVector& diag) const {
  const CMatrix u = mixing_.cast<Complex>();
  return u * diag.asDiagonal() * u.transpose();
}

CMatrix SyntheticScattering::eval(Complex s) const {
  const auto n = static_cast<Eigen::Index>(betas_.size());
  CVector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double b = betas_[k];
    if (s == Complex(b, 0.0)) throw_at_pole(name_, b);
    d[k] = (s + b - 1.0) / (s - b);
  }
  return assemble(d);
}

CMatrix SyntheticScattering::derivative(Complex s) const {
  const auto n = static_cast<Eigen::Index>(betas_.size());
  CVector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double b = betas_[k];
    if (s == Complex(b, 0.0)) throw_at_pole(name_, b);
    d[k] = (1.0 - 2.0 * b) / ((s - b) * (s - b));
  }
  return assemble(d);
}

CMatrix SyntheticScattering::finite_part(double s_pole) const {
  const auto n = static_cast<Eigen::Index>(betas_.size());
  CVector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double b = betas_[k];
    // phi_beta(s) = 1 + (2 beta - 1)/(s - beta)
    d[k] = (b == s_pole) ? Complex(1.0) : Complex((s_pole + b - 1.0) / (s_pole - b));
  }
  return assemble(d);
}

// --- tampered --------------------------------------------------------------

TamperedScattering::TamperedScattering(std::shared_ptr<const ScatteringModel> base, double c1, double c3)
    : base_(std::move(base)), c1_(c1), c3_(c3) {
  for (const Pole& p : base_->poles()) poles_.push_back({p.s, factor(p.s) * p.residue});
}

Complex TamperedScattering::factor(Complex s) const {
  const Complex u = 2.0 * s - 1.0;
  return std::exp(c1_ * u + c3_ * u * u * u);
}

Complex TamperedScattering::factor_derivative(Complex s) const {
  const Complex u = 2.0 * s - 1.0;
  return 2.0 * (c1_ + 3.0 * c3_ * u * u) * factor(s);
}

CMatrix TamperedScattering::eval(Complex s) const { return factor(s) * base_->eval(s); }

CMatrix TamperedScattering::derivative(Complex s) const {
  return factor_derivative(s) * base_->eval(s) + factor(s) * base_->derivative(s);
}

CMatrix TamperedScattering::finite_part(double s_pole) const {
  const int k = base_->pole_index(s_pole);
  if (k < 0) return eval(s_pole);
  return factor(s_pole) * base_->finite_part(s_pole) +
         factor_derivative(s_pole) * base_->poles()[static_cast<std::size_t>(k)].residue;
}

// --- tabulated -------------------------------------------------------------

TabulatedScattering::TabulatedScattering(std::size_t n, std::vector<Sample> samples, std::vector<Pole> poles,
                                         std::string name)
    : n_(n), name_(std::move(name)), poles_(std::move(poles)) {
  const auto dim = static_cast<Eigen::Index>(n_);
  std::sort(poles_.begin(), poles_.end(), [](const Pole& x, const Pole& y) { return x.s < y.s; });
  for (const Pole& p : poles_) {
    if (p.residue.rows() != dim || p.residue.cols() != dim) throw ModelFormatError("pole residue has the wrong size");
  }
  std::vector<std::pair<double, CMatrix>> real, critical;
  for (const Sample& smp : samples) {
    if (smp.value.rows() != dim || smp.value.cols() != dim) throw ModelFormatError("sample matrix has the wrong size");
    for (const Pole& p : poles_) {
      if (std::abs(smp.s - p.s) < 1e-12) throw ModelFormatError("sample placed on a declared pole");
    }
    const CMatrix regular = smp.value - pole_terms(smp.s);
    bool used = false;
    if (smp.s.imag() == 0.0) {
      real.emplace_back(smp.s.real(), regular);
      used = true;
    }
    if (smp.s.real() == 0.5) {
      critical.emplace_back(smp.s.imag(), regular);
      used = true;
    }
    if (!used) throw ModelFormatError("samples must lie on the real axis or on Re s = 1/2");
  }
  auto fill = [](std::vector<std::pair<double, CMatrix>>& src, Line& dst) {
    std::sort(src.begin(), src.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [x, m] : src) {
      if (!dst.x.empty() && x == dst.x.back()) throw ModelFormatError("duplicate sample location");
      dst.x.push_back(x);
      dst.regular.push_back(m);
    }
  };
  fill(real, real_);
  fill(critical, critical_);
  if (real_.x.size() < 4 && critical_.x.size() < 4) throw ModelFormatError("need at least 4 samples on a line");

  // Load-time structure checks on the supplied data itself.
  for (const Sample& smp : samples) {
    std::ostringstream site;
    site << name_ << " at s = " << smp.s;
    if (smp.s.imag() == 0.0) {
      const double d = (smp.value - smp.value.adjoint()).norm() / std::max(1.0, smp.value.norm());
      if (d > kStructureTolerance) throw StructureViolation("Hermitian defect " + std::to_string(d) + " " + site.str());
    }
    if (smp.s.real() == 0.5) {
      const double d = (smp.value * smp.value.adjoint() - CMatrix::Identity(dim, dim)).norm();
      if (d > kStructureTolerance) throw StructureViolation("unitarity defect " + std::to_string(d) + " " + site.str());
    }
  }
  StructureGrid none;
  check_structure(*this, none);
}

CMatrix TabulatedScattering::pole_terms(Complex s, int skip) const {
  const auto dim = static_cast<Eigen::Index>(n_);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < poles_.size(); ++k) {
    if (static_cast<int>(k) == skip) continue;
    out += poles_[k].residue / (s - poles_[k].s);
  }
  return out;
}

CMatrix TabulatedScattering::pole_terms_derivative(Complex s) const {
  const auto dim = static_cast<Eigen::Index>(n_);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const Pole& p : poles_) out -= p.residue / ((s - p.s) * (s - p.s));
  return out;
}

const TabulatedScattering::Line& TabulatedScattering::line_for(Complex s, double& x) const {
  if (s.imag() == 0.0 && real_.x.size() >= 4 && s.real() >= real_.x.front() && s.real() <= real_.x.back()) {
    x = s.real();
    return real_;
  }
  if (s.real() == 0.5 && critical_.x.size() >= 4 && s.imag() >= critical_.x.front() &&
      s.imag() <= critical_.x.back()) {
    x = s.imag();
    return critical_;
  }
  std::ostringstream msg;
  msg << name_ << ": s = " << s << " is outside the tabulated range";
  throw DomainError(msg.str());
}

CMatrix TabulatedScattering::interpolate(const Line& line, double x, bool derivative) const {
  const auto& xs = line.x;
  const std::size_t m = xs.size();
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  std::size_t start = hi >= 2 ? hi - 2 : 0;
  start = std::min(start, m - 4);
  const auto dim = static_cast<Eigen::Index>(n_);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t i = start; i < start + 4; ++i) {
    double weight = 0.0;
    if (!derivative) {
      weight = 1.0;
      for (std::size_t j = start; j < start + 4; ++j) {
        if (j != i) weight *= (x - xs[j]) / (xs[i] - xs[j]);
      }
    } else {
      for (std::size_t k = start; k < start + 4; ++k) {
        if (k == i) continue;
        double term = 1.0 / (xs[i] - xs[k]);
        for (std::size_t j = start; j < start + 4; ++j) {
          if (j != i && j != k) term *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        weight += term;
      }
    }
    out += weight * line.regular[i];
  }
  return out;
}

CMatrix TabulatedScattering::eval(Complex s) const {
  const int k = pole_index(s);
  if (k >= 0) throw_at_pole(name_, poles_[static_cast<std::size_t>(k)].s);
  double x = 0.0;
  const Line& line = line_for(s, x);
  return interpolate(line, x, false) + pole_terms(s);
}

CMatrix TabulatedScattering::derivative(Complex s) const {
  const int k = pole_index(s);
  if (k >= 0) throw_at_pole(name_, poles_[static_cast<std::size_t>(k)].s);
  double x = 0.0;
  const Line& line = line_for(s, x);
  // d/ds along the critical line is -i d/dt
  const Complex chain = (&line == &critical_) ? Complex(0.0, -1.0) : Complex(1.0);
  return chain * interpolate(line, x, true) + pole_terms_derivative(s);
}

CMatrix TabulatedScattering::finite_part(double s_pole) const {
  const int k = pole_index(s_pole);
  if (k < 0) throw NotAPole("finite_part: not a declared pole");
  double x = 0.0;
  const Line& line = line_for(s_pole, x);
  return interpolate(line, x, false) + pole_terms(s_pole, k);
}

// --- free functions ----------------------------------------------------------

CMatrix central_difference6(const ScatteringModel& model, Complex s, double h) {
  const CMatrix f1 = model.eval(s + h) - model.eval(s - h);
  const CMatrix f2 = model.eval(s + 2.0 * h) - model.eval(s - 2.0 * h);
  const CMatrix f3 = model.eval(s + 3.0 * h) - model.eval(s - 3.0 * h);
  return (45.0 * f1 - 9.0 * f2 + f3) / (60.0 * h);
}

SingularityClassification classify(const ScatteringModel& model, Complex s) {
  SingularityClassification out;
  const std::size_t n = model.dimension();
  const int k = model.pole_index(s);
  if (k < 0) {
    for (std::size_t i = 0; i < n; ++i) out.Q.push_back(i);
    return out;
  }
  const CMatrix& res = model.poles()[static_cast<std::size_t>(k)].residue;
  const double thr = 1e-10 * std::max(1.0, res.norm());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    (std::abs(res(ii, ii)) > thr ? out.P : out.Q).push_back(i);
  }
  if (out.P.empty()) {
    out.kind = SingularityClass::regular;
  } else {
    out.kind = out.Q.empty() ? SingularityClass::completely_singular : SingularityClass::singular;
  }
  return out;
}

StructureGrid default_structure_grid(const ScatteringModel& model, std::size_t count) {
  StructureGrid g;
  for (std::size_t k = 0; k < count; ++k) {
    double s = 0.5 + 0.5 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    for (const Pole& p : model.poles()) {
      if (std::abs(s - p.s) < 1e-3) s = p.s - 2e-3;
    }
    g.real_s.push_back(s);
    g.t.push_back(count > 1 ? 20.0 * static_cast<double>(k) / static_cast<double>(count - 1) : 0.0);
  }
  return g;
}

StructureReport check_structure(const ScatteringModel& model, const StructureGrid& grid, double tol) {
  StructureReport rep;
  const auto n = static_cast<Eigen::Index>(model.dimension());
  for (double s : grid.real_s) {
    const CMatrix phi = model.eval(s);
    const double d = (phi - phi.adjoint()).norm() / std::max(1.0, phi.norm());
    rep.hermitian_defect = std::max(rep.hermitian_defect, d);
    if (d > tol) {
      std::ostringstream msg;
      msg << model.name() << ": Hermitian defect " << d << " at s = " << s;
      throw StructureViolation(msg.str());
    }
  }
  for (double t : grid.t) {
    const CMatrix phi = model.eval(Complex(0.5, t));
    const double d = (phi * phi.adjoint() - CMatrix::Identity(n, n)).norm();
    rep.unitarity_defect = std::max(rep.unitarity_defect, d);
    if (d > tol) {
      std::ostringstream msg;
      msg << model.name() << ": unitarity defect " << d << " at t = " << t;
      throw StructureViolation(msg.str());
    }
  }
  for (const Pole& p : model.poles()) {
    if (!(p.s > 0.5 && p.s <= 1.0)) {
      rep.poles_in_range = false;
      std::ostringstream msg;
      msg << model.name() << ": pole at s = " << p.s << " outside (1/2, 1]";
      throw StructureViolation(msg.str());
    }
    const double thr = 1e-10 * std::max(1.0, p.residue.norm());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex r = p.residue(i, i);
      if (std::abs(r) <= thr) continue;
      if (!(r.real() > 0.0) || std::abs(r.imag()) > thr) {
        rep.residues_positive = false;
        std::ostringstream msg;
        msg << model.name() << ": residue diagonal entry " << i + 1 << " at s = " << p.s << " is not positive";
        throw StructureViolation(msg.str());
      }
    }
  }
  return rep;
}

int numerical_rank(const CMatrix& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > rel * sv[0]) ++rank;
  }
  return rank;
}

int residue_rank(const ScatteringModel& model, double s_pole) {
  const int k = model.pole_index(s_pole, 1e-9);
  if (k < 0) {
    std::ostringstream msg;
    msg << model.name() << ": s = " << s_pole << " is not a pole";
    throw NotAPole(msg.str());
  }
  return numerical_rank(model.poles()[static_cast<std::size_t>(k)].residue, 1e-9);
}

ScatteringPtr modular_model() { return std::make_shared<ModularScattering>(); }

ScatteringPtr synthetic_model(const std::vector<double>& betas, const Eigen::MatrixXd& mixing) {
  return std::make_shared<SyntheticScattering>(betas, mixing);
}

}  // namespace pseudolap
