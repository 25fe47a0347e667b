#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "pseudolap/types.hpp"

namespace pseudolap {

struct Pole {
  double s;
  CMatrix residue;
};

// Phi(s) for a surface with n cusps. Implementations are immutable.
class ScatteringModel {
 public:
  virtual ~ScatteringModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::string name() const = 0;
  virtual std::string provenance() const = 0;

  // Throw AtPole when s coincides with a declared pole.
  virtual CMatrix eval(Complex s) const = 0;
  virtual CMatrix derivative(Complex s) const = 0;
  virtual bool analytic_derivative() const { return true; }

  // Simple poles in (1/2, 1] with their residue matrices, ascending in s.
  virtual const std::vector<Pole>& poles() const = 0;

  // Phi(s_p) minus the pole term res / (s - s_p), evaluated at s = s_p.
  virtual CMatrix finite_part(double s_pole) const;

  // Limits along the real axis at s = 1/2.
  virtual CMatrix at_half() const { return eval(0.5); }
  virtual CMatrix derivative_at_half() const { return derivative(0.5); }

  // Index into poles() of the pole at s (|s - s_p| <= tol), or -1.
  int pole_index(Complex s, double tol = 1e-12) const;
};

using ScatteringPtr = std::shared_ptr<const ScatteringModel>;

// phi(s) = xi(2s - 1) / xi(2s), the one-cusp modular surface.
class ModularScattering final : public ScatteringModel {
 public:
  ModularScattering();
  std::size_t dimension() const override { return 1; }
  std::string name() const override { return "modular"; }
  std::string provenance() const override { return "closed form xi(2s-1)/xi(2s)"; }
  CMatrix eval(Complex s) const override;
  CMatrix derivative(Complex s) const override;
  const std::vector<Pole>& poles() const override { return poles_; }

  static Complex phi(Complex s);
  static Complex phi_derivative(Complex s);

 private:
  std::vector<Pole> poles_;
};

// Phi(s) = U diag(phi_beta_i(s)) U^T with phi_beta(s) = (s + beta - 1)/(s - beta).
class SyntheticScattering final : public ScatteringModel {
 public:
  SyntheticScattering(std::vector<double> betas, Eigen::MatrixXd mixing, std::string name = "synthetic");
  std::size_t dimension() const override { return betas_.size(); }
  std::string name() const override { return name_; }
  std::string provenance() const override { return "rational synthetic family"; }
  CMatrix eval(Complex s) const override;
  CMatrix derivative(Complex s) const override;
  const std::vector<Pole>& poles() const override { return poles_; }
  CMatrix finite_part(double s_pole) const override;

  const std::vector<double>& betas() const { return betas_; }
  const Eigen::MatrixXd& mixing() const { return mixing_; }

 private:
  CMatrix assemble(const CVector& diag) const;

  std::vector<double> betas_;
  Eigen::MatrixXd mixing_;
  std::string name_;
  std::vector<Pole> poles_;
};

// A base model multiplied by w(s) = exp(c1 u + c3 u^3), u = 2s - 1. w is real
// for real s, unimodular on the critical line and w(1/2) = 1, so the
// structure checks still pass; with c3 < 0 an eigenvalue branch increases
// with the truncation height.
class TamperedScattering final : public ScatteringModel {
 public:
  TamperedScattering(std::shared_ptr<const ScatteringModel> base, double c1 = 0.0, double c3 = -3.0);
  std::size_t dimension() const override { return base_->dimension(); }
  std::string name() const override { return "tampered"; }
  std::string provenance() const override { return "negative control"; }
  CMatrix eval(Complex s) const override;
  CMatrix derivative(Complex s) const override;
  const std::vector<Pole>& poles() const override { return poles_; }
  CMatrix finite_part(double s_pole) const override;

 private:
  Complex factor(Complex s) const;
  Complex factor_derivative(Complex s) const;

  std::shared_ptr<const ScatteringModel> base_;
  double c1_;
  double c3_;
  std::vector<Pole> poles_;
};

// User-supplied samples on the real axis and on the critical line. The pole
// terms are subtracted before interpolation so the interpolant only sees the
// regular part.
class TabulatedScattering final : public ScatteringModel {
 public:
  struct Sample {
    Complex s;
    CMatrix value;
  };
  TabulatedScattering(std::size_t n, std::vector<Sample> samples, std::vector<Pole> poles,
                      std::string name = "tabulated");
  std::size_t dimension() const override { return n_; }
  std::string name() const override { return name_; }
  std::string provenance() const override { return "tabulated samples, local cubic interpolation"; }
  CMatrix eval(Complex s) const override;
  CMatrix derivative(Complex s) const override;
  bool analytic_derivative() const override { return false; }
  const std::vector<Pole>& poles() const override { return poles_; }
  CMatrix finite_part(double s_pole) const override;

 private:
  struct Line {
    std::vector<double> x;
    std::vector<CMatrix> regular;
  };
  CMatrix pole_terms(Complex s, int skip = -1) const;
  CMatrix pole_terms_derivative(Complex s) const;
  CMatrix interpolate(const Line& line, double x, bool derivative) const;
  const Line& line_for(Complex s, double& x) const;

  std::size_t n_;
  std::string name_;
  std::vector<Pole> poles_;
  Line real_;
  Line critical_;
};

// Sixth-order central difference of Phi at s.
CMatrix central_difference6(const ScatteringModel& model, Complex s, double h = 1e-3);

enum class SingularityClass { regular, singular, completely_singular };

struct SingularityClassification {
  std::vector<std::size_t> P;  // 0-based cusps whose Eisenstein series has a pole at s
  std::vector<std::size_t> Q;
  SingularityClass kind = SingularityClass::regular;
};

SingularityClassification classify(const ScatteringModel& model, Complex s);

struct StructureGrid {
  std::vector<double> real_s;
  std::vector<double> t;
};

// `count` real points in (1/2, 1] away from poles and `count` points t in [0, 20].
StructureGrid default_structure_grid(const ScatteringModel& model, std::size_t count = 20);

struct StructureReport {
  double hermitian_defect = 0.0;
  double unitarity_defect = 0.0;
  bool poles_in_range = true;
  bool residues_positive = true;
};

inline constexpr double kStructureTolerance = 1e-8;

// Throws StructureViolation naming the failing site.
StructureReport check_structure(const ScatteringModel& model, const StructureGrid& grid,
                                double tol = kStructureTolerance);

int residue_rank(const ScatteringModel& model, double s_pole);

// Numerical rank with singular values below rel * sigma_max discarded.
int numerical_rank(const CMatrix& m, double rel);

ScatteringPtr modular_model();
ScatteringPtr synthetic_model(const std::vector<double>& betas, const Eigen::MatrixXd& mixing);

}  // namespace pseudolap
