#include "pseudolap/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/minima.hpp>

#include "pseudolap/errors.hpp"
#include "pseudolap/models.hpp"
#include "pseudolap/specfun.hpp"
#include "pseudolap/systole.hpp"

namespace pseudolap {

namespace {

// One-sided 5-point first derivatives, O(h^4).
template <class F>
auto derivative_below(const F& f, double y, double h) {
  return (25.0 * f(y) - 48.0 * f(y - h) + 36.0 * f(y - 2 * h) - 16.0 * f(y - 3 * h) + 3.0 * f(y - 4 * h)) / (12.0 * h);
}

template <class F>
auto derivative_above(const F& f, double y, double h) {
  return (-25.0 * f(y) + 48.0 * f(y + h) - 36.0 * f(y + 2 * h) + 16.0 * f(y + 3 * h) - 3.0 * f(y + 4 * h)) / (12.0 * h);
}

double relative(double num, double den) { return num / std::max(1.0, den); }

}  // namespace

// --- matching ---------------------------------------------------------------------

MatchingDatum matching_check(const TruncatedProfile& t, double tol) {
  MatchingDatum d;
  d.tol = tol;
  d.pass = true;
  const ZeroModeProfile& p = t.profile;
  for (std::size_t j = 0; j < p.cusps(); ++j) {
    const double a = t.heights[j];
    const double scale = p.scale(j, a);
    CuspMatching c;
    c.value_mismatch = relative(std::abs(p.value(j, a)), scale);
    // The jump is minus the derivative of the removed zero mode; recompute it
    // from values only.
    const double h = 1e-3 * a;
    auto f = [&](double y) { return p.value(j, y); };
    c.jump = -(derivative_above(f, a, h) + derivative_below(f, a, h)) * 0.5;
    c.expected_jump = t.derivative_jump[static_cast<Eigen::Index>(j)];
    c.jump_defect = relative(std::abs(c.jump - c.expected_jump), std::abs(c.expected_jump) + scale / a);
    d.pass = d.pass && c.value_mismatch <= tol && c.jump_defect <= tol;
    d.cusps.push_back(c);
  }
  return d;
}

MatchingDatum modular_matching_check(double s, double a, int samples, double tol) {
  const double phi = ModularScattering::phi(s).real();
  auto zero_mode = [&](double y) { return std::pow(y, s) + phi * std::pow(y, 1.0 - s); };
  auto zero_mode_d = [&](double y) { return s * std::pow(y, s - 1.0) + (1.0 - s) * phi * std::pow(y, -s); };
  MatchingDatum d;
  d.tol = tol;
  CuspMatching c;
  const double scale = std::max(std::pow(a, s), std::abs(phi) * std::pow(a, 1.0 - s));
  c.value_mismatch = relative(std::abs(zero_mode(a)), scale);
  c.expected_jump = -zero_mode_d(a);
  const double h = 1e-3 * a;
  std::vector<double> jumps;
  for (int m = 0; m < samples; ++m) {
    const double x = (m + 0.5) / samples - 0.5;
    auto below = [&](double y) { return modular_eisenstein_point(x, y, s).value; };
    auto above = [&](double y) { return modular_eisenstein_point(x, y, s).value - zero_mode(y); };
    jumps.push_back(derivative_above(above, a, h) - derivative_below(below, a, h));
  }
  double mean = 0.0;
  for (double j : jumps) mean += j;
  mean /= static_cast<double>(jumps.size());
  for (double j : jumps) c.constancy_defect = std::max(c.constancy_defect, relative(std::abs(j - mean), std::abs(mean)));
  c.jump = mean;
  c.jump_defect = relative(std::abs(c.jump - c.expected_jump), std::abs(c.expected_jump));
  d.pass = c.value_mismatch <= tol && c.jump_defect <= tol && c.constancy_defect <= tol;
  d.cusps.push_back(c);
  return d;
}

// --- brute force --------------------------------------------------------------------

int BruteForceResult::total_multiplicity() const {
  int n = 0;
  for (const BruteRoot& r : roots) n += r.multiplicity;
  return n;
}

BruteForceResult brute_force_secular(const ScatteringModel& model, const TruncationHeights& a, double s_lo,
                                     double s_hi, double step) {
  if (!(step > 0.0) || step > 1e-4) throw DomainError("brute_force_secular: grid step must be in (0, 1e-4]");
  if (!(s_hi > s_lo)) throw DomainError("brute_force_secular: empty window");
  const auto n_cells = static_cast<long>(std::ceil((s_hi - s_lo) / step));
  const double h = (s_hi - s_lo) / static_cast<double>(n_cells);
  const auto dim = static_cast<Eigen::Index>(a.size());

  auto det = [&](double s) {
    CMatrix m = secular_matrix(model, s, a);
    const double scale = std::pow(1.0 + m.norm(), static_cast<double>(dim));
    m += CMatrix::Identity(dim, dim);
    return std::pair{m.determinant().real(), scale};
  };
  auto pole_between = [&](double l, double r) -> const Pole* {
    for (const Pole& p : model.poles()) {
      if (p.s > l - 1e-12 && p.s < r + 1e-12) return &p;
    }
    return nullptr;
  };

  BruteForceResult out;
  std::vector<double> s(static_cast<std::size_t>(n_cells)), f(s.size()), sc(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = s_lo + (static_cast<double>(k) + 0.5) * h;
    if (pole_between(s[k], s[k])) s[k] += 1e-3 * h;
    std::tie(f[k], sc[k]) = det(s[k]);
  }
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (const Pole* p = pole_between(s[k], s[k + 1])) {
      if (out.skipped_poles.empty() || out.skipped_poles.back() != p->s) out.skipped_poles.push_back(p->s);
      continue;
    }
    if (f[k] == 0.0 || f[k] * f[k + 1] < 0.0) {
      out.roots.push_back({0.5 * (s[k] + s[k + 1]), 1, false});
      continue;
    }
    if (k == 0) continue;
    const double fl = f[k - 1], fm = f[k], fr = f[k + 1];
    if (fl * fm > 0.0 && fm * fr > 0.0 && std::abs(fm) < std::abs(fl) && std::abs(fm) <= std::abs(fr) &&
        !pole_between(s[k - 1], s[k + 1])) {
      const auto m = boost::math::tools::brent_find_minima([&](double x) { return std::abs(det(x).first); },
                                                           s[k - 1], s[k + 1], 52);
      if (m.second <= 1e-10 * sc[k]) out.roots.push_back({m.first, 2, true});
    }
  }
  return out;
}

// --- modular Eisenstein series --------------------------------------------------

ModularPoint modular_eisenstein_point(double x, double y, double s, int terms, const BesselKFunction& k) {
  if (!(y > 0.0)) throw DomainError("modular_eisenstein_point: y must be positive");
  if (std::abs(s - 0.5) < 1e-8 || s <= 0.0) throw DomainError("modular_eisenstein_point: s must be real, s > 0, s != 1/2");
  if (terms <= 0) {
    terms = static_cast<int>(std::ceil((12.0 * std::log(10.0) + 4.0) / (2.0 * kPi * y)));
    if (terms > 256) throw ConvergenceError("modular_eisenstein_point: more than 256 terms needed");
  }
  const BesselKFunction bessel = k ? k : [](double nu, double t) { return boost::math::cyl_bessel_k(nu, t); };
  const double nu = s - 0.5;
  const double phi = ModularScattering::phi(s).real();
  const double norm = 4.0 / specfun::completed_xi(2.0 * s).real();
  const double ry = std::sqrt(y);

  ModularPoint p;
  p.terms = terms;
  p.value = std::pow(y, s) + phi * std::pow(y, 1.0 - s);
  p.dy = s * std::pow(y, s - 1.0) + (1.0 - s) * phi * std::pow(y, -s);
  for (int n = 1; n <= terms; ++n) {
    double sigma = 0.0;
    for (int dv = 1; dv * dv <= n; ++dv) {
      if (n % dv != 0) continue;
      sigma += std::pow(dv, 1.0 - 2.0 * s);
      if (dv * dv != n) sigma += std::pow(n / dv, 1.0 - 2.0 * s);
    }
    const double c = norm * std::pow(n, nu) * sigma;
    const double arg = 2.0 * kPi * n * y;
    const double kv = bessel(nu, arg);
    const double kd = -0.5 * (bessel(nu - 1.0, arg) + bessel(nu + 1.0, arg));
    const double cx = std::cos(2.0 * kPi * n * x), sx = std::sin(2.0 * kPi * n * x);
    p.value += c * ry * kv * cx;
    p.dx -= c * ry * kv * 2.0 * kPi * n * sx;
    p.dy += c * cx * (kv / (2.0 * ry) + ry * 2.0 * kPi * n * kd);
  }
  return p;
}

double modular_automorphy_defect(double x, double y, double s, int terms) {
  const double r2 = x * x + y * y;
  const double e = modular_eisenstein_point(x, y, s, terms).value;
  const double e_inv = modular_eisenstein_point(-x / r2, y / r2, s, terms).value;
  return std::abs(e_inv - e) / std::abs(e);
}

double modular_eigen_residual(double x, double y, double s, double h) {
  auto e = [&](double xx, double yy) { return modular_eisenstein_point(xx, yy, s).value; };
  auto second = [&](double fm2, double fm1, double f0, double fp1, double fp2) {
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  };
  const double f0 = e(x, y);
  const double exx = second(e(x - 2 * h, y), e(x - h, y), f0, e(x + h, y), e(x + 2 * h, y));
  const double eyy = second(e(x, y - 2 * h), e(x, y - h), f0, e(x, y + h), e(x, y + 2 * h));
  const double lam = s * (1.0 - s);
  return std::abs(-y * y * (exx + eyy) - lam * f0) / std::abs(lam * f0);
}

namespace {

std::pair<double, double> rayleigh_integrals(double s, double a, int nx, int ny) {
  if (nx < 2 || ny < 2 || nx % 2 || ny % 2) throw DomainError("rayleigh_probe: grid sizes must be even and >= 2");
  const double phi = ModularScattering::phi(s).real();
  auto simpson_weight = [](int i, int n) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  const double strip = 1.5;
  double grad = 0.0, mass = 0.0;
  const double hx = 1.0 / nx;
  for (int i = 0; i <= nx; ++i) {
    const double x = -0.5 + i * hx;
    const double floor_y = std::sqrt(1.0 - x * x);
    const double wx = simpson_weight(i, nx) * hx / 3.0;
    // fundamental domain below a, then the cusp strip with the zero mode removed
    for (int part = 0; part < 2; ++part) {
      const double lo = part == 0 ? floor_y : a;
      const double hi = part == 0 ? a : a + strip;
      const double hy = (hi - lo) / ny;
      for (int k = 0; k <= ny; ++k) {
        const double y = lo + k * hy;
        const double w = wx * simpson_weight(k, ny) * hy / 3.0;
        ModularPoint p = modular_eisenstein_point(x, y, s);
        if (part == 1) {
          p.value -= std::pow(y, s) + phi * std::pow(y, 1.0 - s);
          p.dy -= s * std::pow(y, s - 1.0) + (1.0 - s) * phi * std::pow(y, -s);
        }
        grad += w * (p.dx * p.dx + p.dy * p.dy);
        mass += w * p.value * p.value / (y * y);
      }
    }
  }
  return {grad, mass};
}

}  // namespace

RayleighResult rayleigh_probe(double s, double a, double lambda_claimed, int nx, int ny, double tol) {
  if (!(a > 1.0)) throw DomainError("rayleigh_probe: truncation height must exceed 1");
  const auto [g, m] = rayleigh_integrals(s, a, nx, ny);
  const auto [gc, mc] = rayleigh_integrals(s, a, nx / 2 + (nx / 2) % 2, ny / 2 + (ny / 2) % 2);
  RayleighResult r;
  r.lambda = lambda_claimed;
  r.quotient = g / m;
  const double coarse = gc / mc;
  if (!std::isfinite(r.quotient) || std::abs(r.quotient - coarse) > 0.1 * std::abs(r.quotient)) {
    throw QuadratureError("rayleigh_probe: quadrature did not settle under refinement");
  }
  r.rel_error = std::abs(r.quotient - lambda_claimed) / std::abs(lambda_claimed);
  r.coarse_rel_error = std::abs(coarse - lambda_claimed) / std::abs(lambda_claimed);
  r.pass = r.rel_error <= tol;
  return r;
}

double disc_lambda0_fd(double radius, int points) {
  if (!(radius > 0.0) || points < 10) throw DomainError("disc_lambda0_fd: invalid discretisation");
  const double h = radius / points;
  RVector diag(points), sub(points - 1), w(points);
  for (int i = 0; i < points; ++i) w[i] = std::sinh((i + 0.5) * h);
  for (int i = 0; i < points; ++i) {
    const double left = std::sinh(i * h);
    const double right = std::sinh((i + 1) * h) * (i + 1 == points ? 2.0 : 1.0);
    diag[i] = (left + right) / (h * h * w[i]);
    if (i + 1 < points) sub[i] = -std::sinh((i + 1) * h) / (h * h * std::sqrt(w[i] * w[i + 1]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// --- suite -------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool VerificationReport::all_pass() const {
  for (const VerificationCheck& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string heights_text(const TruncationHeights& a) {
  std::ostringstream o;
  o.precision(17);
  for (std::size_t j = 0; j < a.size(); ++j) o << (j ? "," : "") << a[j];
  return o.str();
}

void add(VerificationReport& r, std::string name, std::string inputs, double defect, double tol, bool pass) {
  const std::string digest = hex(fnv1a(name + "|" + inputs));
  r.checks.push_back({std::move(name), std::move(inputs), digest, defect, tol, pass});
}

}  // namespace

VerificationReport run_verification_suite() {
  VerificationReport rep;

  // Dense determinant scans against the secular solver, and the transfer
  // conditions at every regular root.
  for (const BuiltinInfo& info : builtin_models()) {
    if (info.negative_control) continue;
    const SurfaceModel m = builtin_model(info.name);
    std::vector<TruncationHeights> heights;
    for (double c : {2.0, 5.0, 10.0, 50.0}) heights.push_back(TruncationHeights(m.num_cusps(), c));
    if (info.name == "synthetic-mixed") heights.push_back({9.0, 3.0});
    if (info.name == "synthetic-twin") heights.push_back({5.0, 10.0});
    for (const TruncationHeights& a : heights) {
      const std::string inputs = info.name + " a=" + heights_text(a) + " s in (0.5,1]";
      const RealBranchResult sec = real_branch_roots(*m.scattering, a, 0.5, 1.0);
      const BruteForceResult bf = brute_force_secular(*m.scattering, a, 0.5, 1.0);
      int regular = 0;
      double worst_ds = 0.0;
      for (const SecularRoot& r : sec.roots) {
        if (r.classification != RootClass::regular) continue;
        regular += r.multiplicity;
        double best = 1.0;
        for (const BruteRoot& b : bf.roots) best = std::min(best, std::abs(b.s - r.param.s.real()));
        worst_ds = std::max(worst_ds, best);
      }
      const int diff = std::abs(regular - bf.total_multiplicity());
      add(rep, "brute-force root count", inputs, diff, 0.0, diff == 0);
      if (regular > 0) add(rep, "brute-force root position", inputs, worst_ds, 1e-4, worst_ds <= 1e-4);

      for (const SecularRoot& r : sec.roots) {
        if (r.classification != RootClass::regular) continue;
        const double s = r.param.s.real();
        std::ostringstream in;
        in.precision(15);
        in << inputs << " root s=" << s;
        const MatchingDatum at = matching_check(truncate_zero_mode(secular_zero_mode(*m.scattering, s, r.alpha), a));
        double defect = 0.0;
        for (const CuspMatching& c : at.cusps) defect = std::max({defect, c.value_mismatch, c.jump_defect});
        add(rep, "matching at root", in.str(), defect, at.tol, at.pass);
        for (double ds : {-1e-3, 1e-3}) {
          const double sp = s + ds;
          if (sp <= 0.5 || sp >= 1.0 || classify(*m.scattering, sp).kind != SingularityClass::regular) continue;
          const MatchingDatum off =
              matching_check(truncate_zero_mode(secular_zero_mode(*m.scattering, sp, r.alpha), a));
          double mis = 0.0;
          for (const CuspMatching& c : off.cusps) mis = std::max(mis, c.value_mismatch);
          add(rep, "matching fails off root", in.str() + (ds < 0 ? " -1e-3" : " +1e-3"), mis, off.tol, !off.pass);
        }
      }
    }
  }

  // Quarter root of the one-cusp beta = 1 model at a = e^2.
  {
    const SurfaceModel m = builtin_model("synthetic-beta1");
    const TruncationHeights a{std::exp(2.0)};
    const QuarterReport q = quarter_multiplicity(*m.scattering, a);
    double defect = 1.0;
    if (q.mu > 0) {
      const CVector am = q.kernel.col(0);
      const CMatrix op = CMatrix(q.d_a.cast<Complex>().asDiagonal()) + m.scattering->derivative_at_half().transpose();
      const CVector ap = -0.5 * q.e_plus * (q.e_plus.adjoint() * (op * am));
      const ZeroModeProfile p = quarter_basis(*m.scattering, ap, am);
      defect = 0.0;
      for (std::size_t j = 0; j < p.cusps(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        defect = std::max(defect, std::abs(p.first[jj] + p.second[jj] * std::log(a[j])));
      }
    }
    add(rep, "quarter root zeroth coefficient", "synthetic-beta1 a=e^2", defect, kOracleMatchingTolerance,
        q.mu == 1 && defect <= kOracleMatchingTolerance);
  }

  // Modular surface: pointwise Eisenstein series.
  {
    const double d = modular_automorphy_defect(0.3, 1.1, 0.8);
    add(rep, "modular automorphy z -> -1/z", "z=0.3+1.1i s=0.8", d, 1e-7, d <= 1e-7);
    const double e0 = modular_eisenstein_point(0.3, 1.1, 0.8).value;
    const double e1 = modular_eisenstein_point(1.3, 1.1, 0.8).value;
    const double dp = std::abs(e1 - e0) / std::abs(e0);
    add(rep, "modular periodicity z -> z+1", "z=0.3+1.1i s=0.8", dp, 1e-10, dp <= 1e-10);
    for (const auto& [x, y] : {std::pair{0.1, 0.9}, std::pair{0.3, 1.1}, std::pair{-0.2, 1.7}}) {
      const double res = modular_eigen_residual(x, y, 0.8);
      std::ostringstream in;
      in << "z=" << x << "+" << y << "i s=0.8";
      add(rep, "modular eigenfunction residual", in.str(), res, 1e-5, res <= 1e-5);
    }
    const RealBranchResult roots = real_branch_roots(*modular_model(), {10.0}, 0.5, 1.0);
    if (!roots.roots.empty()) {
      const double s = roots.roots.front().param.s.real();
      const double lam = roots.roots.front().param.lambda;
      const MatchingDatum md = modular_matching_check(s, 10.0);
      add(rep, "modular matching at root", "a=10", std::max(md.cusps[0].jump_defect, md.cusps[0].constancy_defect),
          md.tol, md.pass);
      const RayleighResult rr = rayleigh_probe(s, 10.0, lam);
      add(rep, "modular Rayleigh quotient", "a=10 grid 16x64", rr.rel_error, 1e-3, rr.pass);
      const RayleighResult wrong = rayleigh_probe(s, 10.0, lam + 0.05);
      add(rep, "modular Rayleigh rejects wrong lambda", "a=10 lambda+0.05", wrong.rel_error, 1e-3, !wrong.pass);
    } else {
      add(rep, "modular root at a=10", "a=10", 1.0, 0.0, false);
    }
  }

  // Hyperbolic disc: shooting against finite differences.
  {
    const double area = 2.0 * kPi * (std::cosh(1.0) - 1.0);
    const double shoot = hyperbolic_disc_lambda0(area);
    const double fd = disc_lambda0_fd(1.0, 2000);
    const double d = std::abs(shoot - fd);
    add(rep, "disc eigenvalue shooting vs finite differences", "R=1 points=2000", d, 1e-5, d <= 1e-5);
  }
  return rep;
}

}  // namespace pseudolap
