#include "pseudolap/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "pseudolap/errors.hpp"

namespace pseudolap {

SpectralParameter SpectralParameter::real(double s) {
  SpectralParameter p;
  p.chart = Chart::real_branch;
  p.s = s;
  p.lambda = s * (1.0 - s);
  return p;
}

SpectralParameter SpectralParameter::critical(double t) {
  SpectralParameter p;
  p.chart = Chart::critical_line;
  p.s = Complex(0.5, t);
  p.t = t;
  p.lambda = 0.25 + t * t;
  return p;
}

namespace {

void check_heights(const ScatteringModel& model, const TruncationHeights& a) {
  if (a.size() != model.dimension()) throw DomainError("truncation heights do not match the model dimension");
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("truncation heights must be positive");
  }
}

// Unit vector with its largest entry real and positive.
CVector normalise_phase(CVector v) {
  v.normalize();
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v[k]) > 0.0) v *= std::conj(v[k]) / std::abs(v[k]);
  return v;
}

void fill_nullspace(SecularRoot& r, const CMatrix& system, int mult) {
  Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
  const auto n = system.cols();
  mult = std::clamp(mult, 1, static_cast<int>(n));
  r.alpha_basis = svd.matrixV().rightCols(mult);
  r.alpha = normalise_phase(r.alpha_basis.col(0));
  r.multiplicity = mult;
  r.residual = (system * r.alpha).norm();
}

// Eigenvalues of D^{1/2} Phi D^{1/2} + I, ascending; similar to M + I.
RVector shifted_eigenvalues(const ScatteringModel& model, double s, const TruncationHeights& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  RVector d(n);
  for (Eigen::Index j = 0; j < n; ++j) d[j] = std::pow(a[static_cast<std::size_t>(j)], 0.5 - s);
  const CMatrix phi = model.eval(s);
  const CMatrix h = d.asDiagonal() * phi * d.asDiagonal();
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().array() + 1.0;
}

struct Candidate {
  double s;
  Eigen::Index branch;
};

void scan_piece(const ScatteringModel& model, const TruncationHeights& a, double l, double r,
                const ScanOptions& opt, std::vector<Candidate>& out) {
  std::vector<double> grid;
  const int n_uniform = std::max(opt.grid, 8);
  for (int i = 0; i <= n_uniform; ++i) grid.push_back(l + (r - l) * i / n_uniform);
  for (int k = 3; k <= 30; ++k) {
    const double f = std::pow(10.0, -k / 3.0);
    grid.push_back(l + (r - l) * f);
    grid.push_back(r - (r - l) * f);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Branches through -1 in the spectrum of Phi(1/2) vanish at s = 1/2 for
  // every a; they are divided by (s - 1/2).
  const RVector at_half = (Eigen::SelfAdjointEigenSolver<CMatrix>(
                               0.5 * (model.at_half() + model.at_half().adjoint()), Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .array() +
                           1.0)
                              .matrix();
  std::vector<bool> deflate(static_cast<std::size_t>(at_half.size()));
  for (Eigen::Index k = 0; k < at_half.size(); ++k) deflate[static_cast<std::size_t>(k)] = std::abs(at_half[k]) <= 1e-9;
  auto eval = [&](double s) {
    RVector v = shifted_eigenvalues(model, s, a);
    for (Eigen::Index k = 0; k < v.size(); ++k)
      if (deflate[static_cast<std::size_t>(k)]) v[k] /= s - 0.5;
    return v;
  };
  // Close to 1/2 a deflated branch is a cancellation 1 + (-1 + O(s - 1/2)) and
  // carries no sign information once it drops to rounding level.
  constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();
  auto resolved = [&](std::size_t i, Eigen::Index k, double v) {
    return !deflate[static_cast<std::size_t>(k)] || std::abs(v * (grid[i] - 0.5)) > 2.0 * kNoise;
  };

  std::vector<RVector> g;
  g.reserve(grid.size());
  for (double s : grid) g.push_back(eval(s));
  const Eigen::Index nb = g.front().size();

  auto branch_fn = [&](Eigen::Index k) { return [&, k](double s) { return eval(s)[k]; }; };
  auto tol = [&](double x, double y) { return std::abs(y - x) <= opt.tol; };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (Eigen::Index k = 0; k < nb; ++k) {
      const double gi = g[i][k];
      if (!resolved(i, k, gi)) continue;
      if (gi == 0.0) {
        out.push_back({grid[i], k});
        continue;
      }
      if (i + 1 < grid.size() && resolved(i + 1, k, g[i + 1][k]) && gi * g[i + 1][k] < 0.0) {
        std::uintmax_t iters = 200;
        const auto f = branch_fn(k);
        const auto br = boost::math::tools::toms748_solve(f, grid[i], grid[i + 1], gi, g[i + 1][k], tol, iters);
        out.push_back({0.5 * (br.first + br.second), k});
      }
      // Tangency: a local minimum of |g_k| without a sign change.
      if (i > 0 && i + 1 < grid.size()) {
        const double gl = g[i - 1][k], gr = g[i + 1][k];
        if (resolved(i - 1, k, gl) && gl * gi > 0.0 && gi * gr > 0.0 && std::abs(gi) < std::abs(gl) && std::abs(gi) <= std::abs(gr)) {
          const auto f = branch_fn(k);
          const auto m = boost::math::tools::brent_find_minima([&](double s) { return std::abs(f(s)); },
                                                               grid[i - 1], grid[i + 1], 52);
          if (m.second <= opt.tangency_tol) out.push_back({m.first, k});
        }
      }
    }
  }
}

}  // namespace

CMatrix secular_matrix(const ScatteringModel& model, Complex s, const TruncationHeights& a) {
  check_heights(model, a);
  const SingularityClassification cls = classify(model, s);
  if (!cls.P.empty()) {
    std::ostringstream msg;
    msg << "secular matrix requested at the pole s = " << s;
    throw AtPole(msg.str());
  }
  const CMatrix phi = s == Complex(0.5, 0.0) ? model.at_half() : model.eval(s);
  const auto n = static_cast<Eigen::Index>(a.size());
  CVector d(n);
  for (Eigen::Index j = 0; j < n; ++j) d[j] = std::pow(Complex(a[static_cast<std::size_t>(j)]), 1.0 - 2.0 * s);
  return phi * d.asDiagonal();
}

MixedSystem mixed_system(const ScatteringModel& model, const TruncationHeights& a, double s_pole) {
  check_heights(model, a);
  const int idx = model.pole_index(s_pole, 1e-9);
  if (idx < 0) {
    std::ostringstream msg;
    msg << model.name() << ": s = " << s_pole << " is not a pole";
    throw NotAPole(msg.str());
  }
  const Pole& pole = model.poles()[static_cast<std::size_t>(idx)];
  MixedSystem ms;
  ms.s = pole.s;
  ms.classification = classify(model, pole.s);
  const auto n = static_cast<Eigen::Index>(model.dimension());
  const CMatrix fin = model.finite_part(pole.s);
  std::vector<bool> in_p(static_cast<std::size_t>(n), false);
  for (std::size_t i : ms.classification.P) in_p[i] = true;

  ms.matrix = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = in_p[static_cast<std::size_t>(i)] ? pole.residue.row(i) : fin.row(i);
    ms.matrix.col(i) = row.transpose();
  }
  double scale = ms.matrix.norm();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (in_p[static_cast<std::size_t>(j)]) continue;
    const double w = std::pow(a[static_cast<std::size_t>(j)], 2.0 * pole.s - 1.0);
    ms.matrix(j, j) += w;
    scale = std::max(scale, w);
  }
  Eigen::JacobiSVD<CMatrix> svd(ms.matrix, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int nullity = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] <= 1e-9 * scale) ++nullity;
  }
  ms.nullspace = svd.matrixV().rightCols(nullity);
  if (nullity > 0 && !ms.classification.Q.empty()) {
    CMatrix nq(static_cast<Eigen::Index>(ms.classification.Q.size()), nullity);
    for (std::size_t r = 0; r < ms.classification.Q.size(); ++r) {
      nq.row(static_cast<Eigen::Index>(r)) = ms.nullspace.row(static_cast<Eigen::Index>(ms.classification.Q[r]));
    }
    Eigen::JacobiSVD<CMatrix> qsvd(nq);
    for (Eigen::Index k = 0; k < qsvd.singularValues().size(); ++k) {
      if (qsvd.singularValues()[k] > 1e-6) ++ms.q_rank;
    }
  }
  return ms;
}

namespace {

SecularRoot root_from_mixed(const MixedSystem& ms) {
  SecularRoot r;
  r.param = SpectralParameter::real(ms.s);
  r.classification = RootClass::singular_mixed;
  r.multiplicity = ms.q_rank;
  // Combination of nullspace vectors with the largest Q(s) component first.
  const auto nq_rows = static_cast<Eigen::Index>(ms.classification.Q.size());
  CMatrix nq(nq_rows, ms.nullspace.cols());
  for (Eigen::Index row = 0; row < nq_rows; ++row) {
    nq.row(row) = ms.nullspace.row(static_cast<Eigen::Index>(ms.classification.Q[static_cast<std::size_t>(row)]));
  }
  Eigen::JacobiSVD<CMatrix> svd(nq, Eigen::ComputeFullV);
  r.alpha_basis = ms.nullspace * svd.matrixV().leftCols(ms.q_rank);
  r.alpha = normalise_phase(r.alpha_basis.col(0));
  r.residual = (ms.matrix * r.alpha).norm();
  return r;
}

}  // namespace

RealBranchResult real_branch_roots(const ScatteringModel& model, const TruncationHeights& a, double s_lo,
                                   double s_hi, const ScanOptions& opt) {
  check_heights(model, a);
  RealBranchResult result;
  const double lo = std::max(s_lo, 0.5 + opt.half_margin);
  const double hi = std::min(s_hi, 1.0);
  if (!(hi > lo)) return result;

  std::vector<std::pair<double, double>> pieces;
  double left = lo;
  for (const Pole& p : model.poles()) {
    if (p.s < lo - opt.pole_margin || p.s > hi + opt.pole_margin) continue;
    result.poles_examined.push_back(p.s);
    if (p.s - opt.pole_margin > left) pieces.emplace_back(left, p.s - opt.pole_margin);
    left = std::max(left, p.s + opt.pole_margin);
  }
  if (hi > left) pieces.emplace_back(left, hi);

  std::vector<Candidate> cand;
  for (const auto& [l, r] : pieces) scan_piece(model, a, l, r, opt, cand);
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) { return x.s < y.s; });

  std::size_t i = 0;
  while (i < cand.size()) {
    std::size_t j = i;
    std::vector<Eigen::Index> branches;
    double sum = 0.0;
    while (j < cand.size() && cand[j].s - cand[i].s <= 1e-9) {
      if (std::find(branches.begin(), branches.end(), cand[j].branch) == branches.end()) {
        branches.push_back(cand[j].branch);
      }
      sum += cand[j].s;
      ++j;
    }
    const double s = sum / static_cast<double>(j - i);
    SecularRoot r;
    r.param = SpectralParameter::real(s);
    const CMatrix m = secular_matrix(model, s, a);
    fill_nullspace(r, m.transpose() + CMatrix::Identity(m.rows(), m.cols()), static_cast<int>(branches.size()));
    result.roots.push_back(std::move(r));
    i = j;
  }

  for (double sp : result.poles_examined) {
    if (sp < s_lo || sp > s_hi) continue;
    const MixedSystem ms = mixed_system(model, a, sp);
    if (ms.admissible()) {
      result.roots.push_back(root_from_mixed(ms));
    } else if (ms.nullspace.cols() > 0) {
      result.rejected_singular.push_back(sp);
    }
  }
  std::sort(result.roots.begin(), result.roots.end(),
            [](const SecularRoot& x, const SecularRoot& y) { return x.param.s.real() < y.param.s.real(); });
  return result;
}

// --- critical line -----------------------------------------------------------

namespace {

struct Frame {
  std::vector<Complex> mu;
  CMatrix vecs;
};

Frame frame_at(const ScatteringModel& model, const TruncationHeights& a, double t) {
  const CMatrix m = secular_matrix(model, Complex(0.5, t), a);
  Frame f;
  if (m.rows() == 1) {
    f.mu = {m(0, 0)};
    f.vecs = CMatrix::Identity(1, 1);
    return f;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  f.vecs = es.eigenvectors();
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    f.mu.push_back(es.eigenvalues()[k]);
    f.vecs.col(k).normalize();
  }
  return f;
}

// perm[k] = index in `cur` matched to tracked eigenvector k of `prev`.
std::vector<Eigen::Index> match(const CMatrix& prev, const CMatrix& cur) {
  const Eigen::Index n = prev.cols();
  const Eigen::MatrixXd overlap = (prev.adjoint() * cur).cwiseAbs();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 7) {
    std::vector<Eigen::Index> best = perm;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) score += overlap(k, perm[static_cast<std::size_t>(k)]);
      if (score > best_score) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = -1;
    double v = -1.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      if (!used[static_cast<std::size_t>(l)] && overlap(k, l) > v) {
        v = overlap(k, l);
        arg = l;
      }
    }
    used[static_cast<std::size_t>(arg)] = true;
    perm[static_cast<std::size_t>(k)] = arg;
  }
  return perm;
}

Complex follow(const Frame& f, const CVector& v) {
  Eigen::Index best = 0;
  double score = -1.0;
  for (Eigen::Index l = 0; l < f.vecs.cols(); ++l) {
    const double o = std::abs(v.dot(f.vecs.col(l)));
    if (o > score) {
      score = o;
      best = l;
    }
  }
  return f.mu[static_cast<std::size_t>(best)];
}

// Upper bound on the eigenphase speed of the unitary M(t): |d theta / dt| <= |M'(t)|.
double phase_speed(const ScatteringModel& model, const TruncationHeights& a, double t) {
  const Complex s(0.5, t);
  double log_max = 0.0;
  for (double v : a) log_max = std::max(log_max, std::abs(std::log(v)));
  const double n = std::sqrt(static_cast<double>(a.size()));
  return model.derivative(s).norm() + 2.0 * log_max * n + 1e-3;
}

bool track(const ScatteringModel& model, const TruncationHeights& a, double lo, double hi, double refine,
           const ScanOptions& opt, std::vector<double>& out) {
  Frame prev = frame_at(model, a, lo);
  const auto n = static_cast<Eigen::Index>(prev.mu.size());
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) theta[static_cast<std::size_t>(k)] = std::arg(prev.mu[static_cast<std::size_t>(k)]);

  double tl = lo;
  while (tl < hi) {
    double h = opt.t_step > 0.0 ? opt.t_step : std::min(0.05, 0.3 / phase_speed(model, a, tl));
    h *= refine;
    const double tr = (tl + h >= hi - 1e-12) ? hi : tl + h;
    const Frame cur = frame_at(model, a, tr);
    const auto perm = match(prev.vecs, cur.vecs);
    Frame next;
    next.vecs.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const Complex mu_new = cur.mu[static_cast<std::size_t>(perm[kk])];
      const double d = std::arg(mu_new / prev.mu[kk]);
      if (std::abs(d) > 0.25 * kPi) return false;
      const double th_new = theta[kk] + d;
      const double c_old = std::floor((theta[kk] - kPi) / (2.0 * kPi));
      const double c_new = std::floor((th_new - kPi) / (2.0 * kPi));
      if (c_old != c_new) {
        // bisection on arg(-mu) of the followed eigenvalue
        const CVector v = prev.vecs.col(k);
        double l = tl, r = tr;
        const bool left_neg = std::arg(-prev.mu[kk]) < 0.0;
        while (r - l > opt.tol) {
          const double mid = 0.5 * (l + r);
          if (mid <= l || mid >= r) break;
          const bool neg = std::arg(-follow(frame_at(model, a, mid), v)) < 0.0;
          (neg == left_neg ? l : r) = mid;
        }
        out.push_back(0.5 * (l + r));
      }
      theta[kk] = th_new;
      next.mu.push_back(mu_new);
      next.vecs.col(k) = cur.vecs.col(perm[kk]);
    }
    prev = std::move(next);
    tl = tr;
  }
  return true;
}

}  // namespace

std::vector<SecularRoot> critical_line_roots(const ScatteringModel& model, const TruncationHeights& a, double t_lo,
                                             double t_hi, const ScanOptions& opt) {
  check_heights(model, a);
  const double lo = std::max(t_lo, 1e-7);
  if (!(t_hi > lo)) return {};
  std::vector<double> ts;
  bool ok = false;
  double refine = 1.0;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt, refine *= 0.25) {
    ts.clear();
    ok = track(model, a, lo, t_hi, refine, opt, ts);
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "eigenphase tracking lost on [" << lo << ", " << t_hi << "] after two refinements";
    throw PhaseTrackingLost(msg.str());
  }
  std::sort(ts.begin(), ts.end());

  std::vector<SecularRoot> roots;
  std::size_t i = 0;
  while (i < ts.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < ts.size() && ts[j] - ts[i] <= 1e-9) sum += ts[j++];
    const double t = sum / static_cast<double>(j - i);
    SecularRoot r;
    r.param = SpectralParameter::critical(t);
    const CMatrix m = secular_matrix(model, Complex(0.5, t), a);
    fill_nullspace(r, m.transpose() + CMatrix::Identity(m.rows(), m.cols()), static_cast<int>(j - i));
    roots.push_back(std::move(r));
    i = j;
  }
  return roots;
}

// --- s = 1/2 -----------------------------------------------------------------

QuarterReport quarter_multiplicity(const ScatteringModel& model, const TruncationHeights& a) {
  check_heights(model, a);
  const auto n = static_cast<Eigen::Index>(a.size());
  QuarterReport q;
  const CMatrix phi_t = model.at_half().transpose();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (phi_t + phi_t.adjoint()));
  std::vector<Eigen::Index> minus, plus;
  for (Eigen::Index k = 0; k < n; ++k) (es.eigenvalues()[k] < 0.0 ? minus : plus).push_back(k);
  q.e_minus.resize(n, static_cast<Eigen::Index>(minus.size()));
  q.e_plus.resize(n, static_cast<Eigen::Index>(plus.size()));
  for (std::size_t k = 0; k < minus.size(); ++k) q.e_minus.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(minus[k]);
  for (std::size_t k = 0; k < plus.size(); ++k) q.e_plus.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(plus[k]);

  q.d_a.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) q.d_a[j] = 2.0 * std::log(a[static_cast<std::size_t>(j)]);
  const CMatrix dphi_t = model.derivative_at_half().transpose();
  const Eigen::Index m = q.e_minus.cols();
  if (m == 0) {
    q.condition.resize(0, 0);
    q.kernel.resize(n, 0);
    return q;
  }
  const CMatrix op = CMatrix(q.d_a.cast<Complex>().asDiagonal()) + dphi_t;
  q.condition = q.e_minus.adjoint() * op * q.e_minus;
  const double scale = std::max({1.0, q.d_a.cwiseAbs().maxCoeff(), dphi_t.norm()});
  Eigen::JacobiSVD<CMatrix> svd(q.condition, Eigen::ComputeFullV);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (svd.singularValues()[k] <= 1e-9 * scale) ++q.mu;
  }
  q.kernel = q.e_minus * svd.matrixV().rightCols(q.mu);
  return q;
}

std::vector<double> quarter_transitions(const ScatteringModel& model, const TruncationHeights& a_base, double c_lo,
                                        double c_hi, int samples) {
  if (!(c_lo > 0.0) || !(c_hi > c_lo) || samples < 2) throw DomainError("quarter_transitions: invalid scale range");
  auto eig = [&](double c) {
    TruncationHeights a = a_base;
    for (double& v : a) v *= c;
    const QuarterReport q = quarter_multiplicity(model, a);
    if (q.condition.size() == 0) return RVector();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (q.condition + q.condition.adjoint()), Eigen::EigenvaluesOnly);
    return RVector(es.eigenvalues());
  };
  std::vector<double> out;
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) grid[static_cast<std::size_t>(k)] = c_lo * std::pow(c_hi / c_lo, static_cast<double>(k) / (samples - 1));
  std::vector<RVector> vals;
  for (double c : grid) vals.push_back(eig(c));
  if (vals.front().size() == 0) return out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    for (Eigen::Index k = 0; k < vals[i].size(); ++k) {
      if (vals[i][k] == 0.0) {
        out.push_back(grid[i]);
        continue;
      }
      if (vals[i][k] * vals[i + 1][k] >= 0.0) continue;
      double l = grid[i], r = grid[i + 1];
      const bool left_neg = vals[i][k] < 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (l + r);
        if (mid <= l || mid >= r) break;
        const double v = eig(mid)[k];
        if (v == 0.0) {
          l = r = mid;
          break;
        }
        ((v < 0.0) == left_neg ? l : r) = mid;
      }
      out.push_back(0.5 * (l + r));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<double, int>> residual_spectrum(const ScatteringModel& model) {
  std::vector<std::pair<double, int>> out;
  for (const Pole& p : model.poles()) {
    const int rank = residue_rank(model, p.s);
    if (rank > 0) out.emplace_back(p.s * (1.0 - p.s), rank);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- spectrum assembly ---------------------------------------------------------

namespace {

SecularRoot quarter_root(const QuarterReport& q) {
  SecularRoot r;
  r.param = SpectralParameter::critical(0.0);
  r.param.s = 0.5;
  r.classification = RootClass::quarter;
  r.multiplicity = q.mu;
  r.alpha_basis = q.kernel;
  r.alpha = normalise_phase(q.kernel.col(0));
  r.residual = (q.e_minus * q.condition * (q.e_minus.adjoint() * r.alpha)).norm();
  return r;
}

void sort_by_lambda(std::vector<SecularRoot>& v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const SecularRoot& x, const SecularRoot& y) { return x.param.lambda < y.param.lambda; });
}

}  // namespace

std::vector<SecularRoot> discrete_spectrum(const ScatteringModel& model, const TruncationHeights& a, double t_max,
                                           const ScanOptions& opt) {
  std::vector<SecularRoot> out = real_branch_roots(model, a, 0.5, 1.0, opt).roots;
  const QuarterReport q = quarter_multiplicity(model, a);
  if (q.mu > 0) out.push_back(quarter_root(q));
  for (auto& r : critical_line_roots(model, a, 0.0, t_max, opt)) out.push_back(std::move(r));
  sort_by_lambda(out);
  return out;
}

std::vector<SecularRoot> spectrum_in_lambda_window(const ScatteringModel& model, const TruncationHeights& a,
                                                   double lambda_lo, double lambda_hi, const ScanOptions& opt) {
  std::vector<SecularRoot> out;
  if (!(lambda_hi >= lambda_lo)) return out;
  auto keep = [&](const SecularRoot& r) {
    return r.param.lambda >= lambda_lo - 1e-14 && r.param.lambda <= lambda_hi + 1e-14;
  };
  if (lambda_lo < 0.25) {
    const double s_hi = 0.5 + std::sqrt(0.25 - std::max(lambda_lo, 0.0));
    const double s_lo = 0.5 + std::sqrt(std::max(0.25 - std::min(lambda_hi, 0.25), 0.0));
    for (auto& r : real_branch_roots(model, a, s_lo, s_hi, opt).roots) {
      if (keep(r)) out.push_back(std::move(r));
    }
  }
  if (lambda_lo <= 0.25 && lambda_hi >= 0.25) {
    const QuarterReport q = quarter_multiplicity(model, a);
    if (q.mu > 0) out.push_back(quarter_root(q));
  }
  if (lambda_hi > 0.25) {
    const double t_lo = std::sqrt(std::max(lambda_lo - 0.25, 0.0));
    const double t_hi = std::sqrt(lambda_hi - 0.25);
    for (auto& r : critical_line_roots(model, a, t_lo, t_hi, opt)) {
      if (keep(r)) out.push_back(std::move(r));
    }
  }
  sort_by_lambda(out);
  return out;
}

BarrierReport barrier_check(const ScatteringModel& model, const TruncationHeights& a, double s_pole,
                            const ScanOptions& opt) {
  const MixedSystem ms = mixed_system(model, a, s_pole);
  BarrierReport b;
  b.s_pole = ms.s;
  b.lambda = ms.s * (1.0 - ms.s);
  b.kind = ms.classification.kind;
  b.barrier = b.kind == SingularityClass::completely_singular;
  b.eigenvalue_at_pole = ms.admissible();

  for (const auto& [lam, mult] : residual_spectrum(model)) {
    if (lam < b.lambda - 1e-14) b.residual_index += mult;
  }
  for (const SecularRoot& r : real_branch_roots(model, a, 0.5, 1.0, opt).roots) {
    const double lam = r.param.lambda;
    if (std::abs(lam - b.lambda) <= 1e-12) continue;
    if (lam < b.lambda) {
      b.eigenvalues_below += r.multiplicity;
      if (!b.below || lam > *b.below) b.below = lam;
    } else if (!b.above || lam < *b.above) {
      b.above = lam;
    }
  }
  if (!b.above) {
    const QuarterReport q = quarter_multiplicity(model, a);
    if (q.mu > 0) {
      b.above = 0.25;
    } else {
      for (double t_max = 4.0; t_max <= 64.0 && !b.above; t_max *= 2.0) {
        const auto crit = critical_line_roots(model, a, 0.0, t_max, opt);
        if (!crit.empty()) b.above = crit.front().param.lambda;
      }
    }
  }
  b.interlacing = b.barrier && !b.eigenvalue_at_pole && b.eigenvalues_below == b.residual_index;
  return b;
}

CountReport count_below(const SurfaceModel& m, const TruncationHeights& a, double lambda_max,
                        const ScanOptions& opt) {
  if (!m.scattering) throw InvalidTopology("surface model has no scattering data");
  validate_truncation(m, a);
  if (lambda_max > 0.25) throw DomainError("count_below: lambda_max must not exceed 1/4");
  CountReport c;
  c.lambda_max = lambda_max;
  if (m.cuspidal_eigenvalues) {
    for (double ev : *m.cuspidal_eigenvalues) {
      if (ev <= lambda_max) ++c.cuspidal;
    }
  } else {
    c.cuspidal_assumed_zero = true;
  }
  const double s_lo = 0.5 + std::sqrt(std::max(0.25 - lambda_max, 0.0));
  for (const SecularRoot& r : real_branch_roots(*m.scattering, a, s_lo, 1.0, opt).roots) {
    if (r.param.lambda <= lambda_max + 1e-14) c.real_branch += r.multiplicity;
  }
  if (lambda_max >= 0.25) c.quarter = quarter_multiplicity(*m.scattering, a).mu;
  c.total = c.cuspidal + c.real_branch + c.quarter;
  c.budget = eigenvalue_budget(m);
  c.within_budget = c.total <= c.budget;
  c.verdict = c.within_budget ? "PASS" : "MODEL-NOT-SURFACE";
  return c;
}

SpectralBranch branch_sweep(const ScatteringModel& model, const TruncationHeights& a_base, double c_lo, double c_hi,
                            int samples, int j, const ScanOptions& opt) {
  if (samples < 8) throw DomainError("branch_sweep: need at least 8 samples along the ray");
  if (!(c_lo > 0.0) || !(c_hi > c_lo)) throw DomainError("branch_sweep: invalid scale interval");
  if (j < 0) throw DomainError("branch_sweep: negative branch index");
  auto heights = [&](double c) {
    TruncationHeights a = a_base;
    for (double& v : a) v *= c;
    return a;
  };
  SpectralBranch br;
  br.index = j;

  std::vector<double> residual;
  for (const auto& [lam, mult] : residual_spectrum(model)) residual.insert(residual.end(), static_cast<std::size_t>(mult), lam);
  br.target = static_cast<std::size_t>(j) < residual.size() ? residual[static_cast<std::size_t>(j)] : 0.25;

  // j-th eigenvalue at the base point, counted with multiplicity.
  std::optional<SecularRoot> start;
  for (double t_max = 4.0; t_max <= 64.0 && !start; t_max *= 2.0) {
    int seen = 0;
    for (const SecularRoot& r : discrete_spectrum(model, heights(c_lo), t_max, opt)) {
      seen += r.multiplicity;
      if (seen > j) {
        start = r;
        break;
      }
    }
  }
  if (!start) throw BranchJump("branch_sweep: the requested branch was not found at the base point");
  br.samples.push_back({c_lo, start->param.lambda, start->param.chart});

  for (int k = 1; k < samples; ++k) {
    const double c = c_lo * std::pow(c_hi / c_lo, static_cast<double>(k) / (samples - 1));
    const double prev = br.samples.back().lambda;
    double last_step = 0.0;
    if (br.samples.size() > 1) last_step = std::abs(prev - br.samples[br.samples.size() - 2].lambda);
    double w = std::max({0.5 * std::abs(prev - br.target), 2.0 * last_step, 1e-4});
    std::optional<SecularRoot> best;
    for (int attempt = 0; attempt < 2 && !best; ++attempt, w *= 4.0) {
      for (const SecularRoot& r : spectrum_in_lambda_window(model, heights(c), std::max(prev - w, 1e-12), prev + w, opt)) {
        if (!best || std::abs(r.param.lambda - prev) < std::abs(best->param.lambda - prev)) best = r;
      }
    }
    if (!best) {
      std::ostringstream msg;
      msg << "branch " << j << " lost between scales " << br.samples.back().scale << " and " << c;
      throw BranchJump(msg.str());
    }
    br.samples.push_back({c, best->param.lambda, best->param.chart});
  }
  for (std::size_t k = 1; k < br.samples.size(); ++k) {
    if (!(br.samples[k].lambda < br.samples[k - 1].lambda)) {
      br.monotone = false;
      br.first_violation = k;
      break;
    }
  }
  const double first = br.samples.front().lambda, last = br.samples.back().lambda;
  br.limit_ok = last > br.target && std::abs(last - br.target) < std::abs(first - br.target);
  return br;
}

}  // namespace pseudolap
