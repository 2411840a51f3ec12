#include "tsqkd/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace tsqkd::sdp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kMaxIterations: return "max-iterations";
  }
  return "unknown";
}

template <typename Scalar>
int BasicProblem<Scalar>::total_dim() const {
  int n = 0;
  for (const auto& c : objective) n += static_cast<int>(c.rows());
  return n;
}

template <typename Scalar>
void BasicProblem<Scalar>::add_constraint(Blocks a, double b, std::string label) {
  constraints.push_back(std::move(a));
  rhs.push_back(b);
  labels.push_back(std::move(label));
}

namespace {

template <typename M>
bool hermitian(const M& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = 1.0 + (m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  return m.size() == 0 || (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

template <typename Scalar>
void BasicProblem<Scalar>::validate(double hermitian_tol) const {
  if (objective.empty()) throw ParameterError("SDP needs at least one block");
  if (constraints.empty()) throw ParameterError("SDP needs at least one constraint");
  if (rhs.size() != constraints.size()) throw ParameterError("SDP rhs and constraint counts differ");
  if (!labels.empty() && labels.size() != constraints.size()) {
    throw ParameterError("SDP labels and constraint counts differ");
  }
  for (int b = 0; b < blocks(); ++b) {
    if (objective[b].rows() == 0 || !hermitian(objective[b], hermitian_tol)) {
      throw ParameterError("SDP objective block " + std::to_string(b) + " is not Hermitian");
    }
  }
  for (size_t i = 0; i < constraints.size(); ++i) {
    if (static_cast<int>(constraints[i].size()) != blocks()) {
      throw ParameterError("SDP constraint " + std::to_string(i) + " has the wrong block count");
    }
    for (int b = 0; b < blocks(); ++b) {
      const auto& a = constraints[i][b];
      if (a.rows() != objective[b].rows() || a.cols() != objective[b].cols()) {
        throw ParameterError("SDP constraint " + std::to_string(i) + " block " + std::to_string(b) +
                             " has the wrong dimension");
      }
      if (!hermitian(a, hermitian_tol)) {
        throw ParameterError("SDP constraint " + std::to_string(i) + " is not Hermitian");
      }
    }
    if (!std::isfinite(rhs[i])) throw ParameterError("SDP rhs " + std::to_string(i) + " is not finite");
  }
}

template struct BasicProblem<Complex>;
template struct BasicProblem<double>;

Problem dense_problem(const CMatrix& objective,
                      const std::vector<std::pair<CMatrix, double>>& constraints) {
  Problem p;
  p.objective = {objective};
  for (const auto& [a, b] : constraints) p.add_constraint({a}, b);
  return p;
}

double inner(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k].array().conjugate() * b[k].array()).sum().real();
  return s;
}

RMatrix embed_matrix(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

CMatrix extract_hermitian(const RMatrix& m) {
  const Eigen::Index n = m.rows() / 2;
  const RMatrix re = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  const RMatrix im = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  CMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

RealProblem embed_hermitian(const Problem& problem) {
  RealProblem out;
  for (const auto& c : problem.objective) out.objective.push_back(0.5 * embed_matrix(c));
  for (size_t i = 0; i < problem.constraints.size(); ++i) {
    RealProblem::Blocks blocks;
    for (const auto& a : problem.constraints[i]) blocks.push_back(0.5 * embed_matrix(a));
    out.add_constraint(std::move(blocks), problem.rhs[i],
                       problem.labels.empty() ? std::string() : problem.labels[i]);
  }
  return out;
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
double dot(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  return std::real((a.array().conjugate() * b.array()).sum());
}

template <typename Scalar>
double dot(const std::vector<Mat<Scalar>>& a, const std::vector<Mat<Scalar>>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += dot<Scalar>(a[k], b[k]);
  return s;
}

template <typename Scalar>
double frobenius(const std::vector<Mat<Scalar>>& a) {
  return std::sqrt(dot<Scalar>(a, a));
}

template <typename Scalar>
void hermitize(Mat<Scalar>& m) {
  m = (0.5 * (m + m.adjoint())).eval();
}

template <typename Scalar>
class Engine {
 public:
  using M = Mat<Scalar>;
  using Blocks = std::vector<M>;
  using Problem = BasicProblem<Scalar>;
  using Solution = BasicSolution<Scalar>;

  Engine(const Problem& problem, const Options& options, bool complex_structure = false)
      : problem_(problem), options_(options), complex_structure_(complex_structure) {}

  Solution run() {
    problem_.validate();
    Solution sol;
    if (!prune(sol)) return sol;
    initialise();
    iterate(sol);
    return sol;
  }

 private:
  struct Scaling {
    M g;
    M g_inv;
    M w;
    RVector v;
  };

  std::string label(int i) const {
    if (!problem_.labels.empty() && !problem_.labels[i].empty()) {
      return "#" + std::to_string(i) + " (" + problem_.labels[i] + ")";
    }
    return "#" + std::to_string(i);
  }

  // Sequential Gram-Schmidt in the given order; a constraint whose residual
  // is tiny relative to its norm is dropped. Dropped constraints must have a
  // consistent right-hand side.
  bool prune(Solution& sol) {
    const int m = static_cast<int>(problem_.constraints.size());
    std::vector<Blocks> basis;
    std::vector<RVector> coefs;
    for (int i = 0; i < m; ++i) {
      Blocks v = problem_.constraints[i];
      const double norm0 = frobenius<Scalar>(v);
      RVector c = RVector::Zero(static_cast<Eigen::Index>(basis.size()) + 1);
      if (norm0 > 0.0) {
        for (int pass = 0; pass < 2; ++pass) {
          for (size_t j = 0; j < basis.size(); ++j) {
            const double coef = dot<Scalar>(basis[j], v);
            c(static_cast<Eigen::Index>(j)) += coef;
            for (size_t b = 0; b < v.size(); ++b) v[b] -= coef * basis[j][b];
          }
        }
      }
      const double r = frobenius<Scalar>(v);
      if (norm0 == 0.0 || r <= options_.prune_tol * norm0) {
        sol.pruned.push_back(i);
        continue;
      }
      c(c.size() - 1) = r;
      for (auto& blk : v) blk /= r;
      basis.push_back(std::move(v));
      coefs.push_back(std::move(c));
      kept_.push_back(i);
    }

    const int k = static_cast<int>(kept_.size());
    RMatrix gram(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        gram(i, j) = gram(j, i) = dot<Scalar>(problem_.constraints[kept_[i]], problem_.constraints[kept_[j]]);
    const Eigen::LDLT<RMatrix> ldlt(gram);
    RVector b_kept(k);
    for (int i = 0; i < k; ++i) b_kept(i) = problem_.rhs[kept_[i]];
    for (int p : sol.pruned) {
      RVector g(k);
      for (int i = 0; i < k; ++i) g(i) = dot<Scalar>(problem_.constraints[kept_[i]], problem_.constraints[p]);
      const RVector coef = ldlt.solve(g);
      const double predicted = coef.dot(b_kept);
      const double scale = 1.0 + std::abs(problem_.rhs[p]) + coef.cwiseAbs().dot(b_kept.cwiseAbs());
      if (std::abs(predicted - problem_.rhs[p]) > 1e-9 * scale) {
        sol.status = Status::kInfeasible;
        std::ostringstream msg;
        msg << "constraint " << label(p) << " is a combination of others but its target "
            << problem_.rhs[p] << " disagrees with the implied value " << predicted;
        sol.message = msg.str();
        return false;
      }
    }

    // The solver works with the orthonormal rows Q = L^{-1} A_kept, which
    // keeps the Schur complement as well conditioned as the scaling allows.
    factor_ = RMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) factor_.row(i).head(i + 1) = coefs[i].transpose();
    const RVector bq = factor_.triangularView<Eigen::Lower>().solve(b_kept);
    a_ = std::move(basis);
    b_.assign(bq.data(), bq.data() + k);
    return true;
  }

  void initialise() {
    n_ = problem_.total_dim();
    const double rootn = std::sqrt(static_cast<double>(n_));
    double xi = std::max(10.0, rootn);
    for (size_t i = 0; i < a_.size(); ++i) xi = std::max(xi, rootn * (1.0 + std::abs(b_[i])) / 2.0);
    double eta = std::max({10.0, rootn, frobenius<Scalar>(problem_.objective)});
    x_.clear();
    z_.clear();
    for (const auto& c : problem_.objective) {
      x_.push_back(xi * M::Identity(c.rows(), c.cols()));
      z_.push_back(eta * M::Identity(c.rows(), c.cols()));
    }
    y_ = RVector::Zero(static_cast<Eigen::Index>(a_.size()));
  }

  RVector apply_a(const Blocks& x) const {
    RVector out(static_cast<Eigen::Index>(a_.size()));
    for (size_t i = 0; i < a_.size(); ++i) out(i) = dot<Scalar>(a_[i], x);
    return out;
  }

  Blocks apply_at(const RVector& y) const {
    Blocks out;
    for (const auto& c : problem_.objective) out.push_back(M::Zero(c.rows(), c.cols()));
    for (size_t i = 0; i < a_.size(); ++i)
      for (size_t b = 0; b < out.size(); ++b) out[b] += y(i) * a_[i][b];
    return out;
  }

  std::vector<Scaling> nt_scaling() const {
    std::vector<Scaling> out;
    for (size_t b = 0; b < x_.size(); ++b) {
      Eigen::LLT<M> llt(x_[b]);
      if (llt.info() != Eigen::Success) throw NumericalError("SDP: primal iterate lost definiteness");
      const M l = llt.matrixL();
      M s = l.adjoint() * z_[b] * l;
      hermitize<Scalar>(s);
      Eigen::SelfAdjointEigenSolver<M> es(s);
      RVector d = es.eigenvalues().cwiseMax(std::numeric_limits<double>::min());
      const RVector v = d.cwiseSqrt();
      const RVector quarter = v.cwiseSqrt();
      Scaling sc;
      sc.v = v;
      sc.g = l * es.eigenvectors() * quarter.cwiseInverse().template cast<Scalar>().asDiagonal();
      const M l_inv = l.template triangularView<Eigen::Lower>().solve(M::Identity(l.rows(), l.cols()));
      sc.g_inv = quarter.template cast<Scalar>().asDiagonal() * es.eigenvectors().adjoint() * l_inv;
      sc.w = sc.g * sc.g.adjoint();
      hermitize<Scalar>(sc.w);
      out.push_back(std::move(sc));
    }
    return out;
  }

  struct Direction {
    Blocks dx;
    Blocks dz;
    RVector dy;
    Blocks dx_scaled;
    Blocks dz_scaled;
  };

  Direction direction(const std::vector<Scaling>& sc, const Eigen::LDLT<RMatrix>& schur,
                      const Blocks& rhs_scaled, const RVector& rp, const Blocks& rd) const {
    Blocks rc, wrdw;
    for (size_t b = 0; b < sc.size(); ++b) {
      const RVector& v = sc[b].v;
      M h = rhs_scaled[b];
      for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) /= (v(i) + v(j));
      rc.push_back(sc[b].g * h * sc[b].g.adjoint());
      wrdw.push_back(sc[b].w * rd[b] * sc[b].w);
    }
    const RVector rhs = rp - apply_a(rc) + apply_a(wrdw);
    Direction d;
    d.dy = schur.solve(rhs);
    Blocks dzs, dxs;
    for (int round = 0;; ++round) {
      const Blocks at = apply_at(d.dy);
      dzs.clear();
      dxs.clear();
      for (size_t b = 0; b < sc.size(); ++b) {
        M dz = rd[b] - at[b];
        hermitize<Scalar>(dz);
        M dx = rc[b] - sc[b].w * dz * sc[b].w;
        hermitize<Scalar>(dx);
        dzs.push_back(std::move(dz));
        dxs.push_back(std::move(dx));
      }
      // Refine against A(dx) = rp itself: near the boundary the Schur
      // complement is too ill-conditioned for one solve to hold primal
      // feasibility.
      if (round == kRefinements) break;
      const RVector residual = rp - apply_a(dxs);
      if (residual.cwiseAbs().maxCoeff() <= 1e-3 * options_.feasibility_tol) break;
      d.dy += schur.solve(residual);
    }
    for (size_t b = 0; b < sc.size(); ++b) {
      M dz = std::move(dzs[b]);
      M dx = std::move(dxs[b]);
      M dxs = sc[b].g_inv * dx * sc[b].g_inv.adjoint();
      M dzs = sc[b].g.adjoint() * dz * sc[b].g;
      hermitize<Scalar>(dxs);
      hermitize<Scalar>(dzs);
      d.dx.push_back(std::move(dx));
      d.dz.push_back(std::move(dz));
      d.dx_scaled.push_back(std::move(dxs));
      d.dz_scaled.push_back(std::move(dzs));
    }
    return d;
  }

  // Largest alpha with V + alpha * D >= 0 over all blocks.
  static double max_step(const std::vector<Scaling>& sc, const Blocks& d_scaled) {
    double alpha = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < sc.size(); ++b) {
      const RVector s = sc[b].v.cwiseSqrt().cwiseInverse();
      M t = s.template cast<Scalar>().asDiagonal() * d_scaled[b] * s.template cast<Scalar>().asDiagonal();
      hermitize<Scalar>(t);
      const double lmin = Eigen::SelfAdjointEigenSolver<M>(t, Eigen::EigenvaluesOnly).eigenvalues()(0);
      if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
  }

  struct Snapshot {
    Blocks x;
    Blocks z;
    RVector y;
    IterationRecord rec;
    double merit = std::numeric_limits<double>::infinity();
  };

  // Residuals against the original (unscaled, unpruned-kept) constraints.
  double primal_residual() const {
    double worst = 0.0;
    for (int i : kept_) {
      worst = std::max(worst, std::abs(dot<Scalar>(problem_.constraints[i], x_) - problem_.rhs[i]));
    }
    return worst;
  }

  double merit(const IterationRecord& rec) const {
    return std::max({rec.primal_infeasibility / options_.feasibility_tol,
                     rec.dual_infeasibility / options_.feasibility_tol, rec.gap / options_.gap_tol});
  }

  void iterate(Solution& sol) {
    const double c_norm = frobenius<Scalar>(problem_.objective);
    const RVector b = Eigen::Map<const RVector>(b_.data(), static_cast<Eigen::Index>(b_.size()));
    double gamma = 0.9;
    int stalled = 0;

    for (int it = 0;; ++it) {
      const RVector rp = b - apply_a(x_);
      const Blocks at = apply_at(y_);
      Blocks rd;
      for (size_t k = 0; k < x_.size(); ++k) rd.push_back(problem_.objective[k] - at[k] - z_[k]);

      IterationRecord rec;
      rec.iteration = it;
      rec.primal_objective = dot<Scalar>(problem_.objective, x_);
      rec.dual_objective = b.dot(y_);
      rec.gap = std::abs(rec.primal_objective - rec.dual_objective) /
                (1.0 + std::abs(rec.primal_objective) + std::abs(rec.dual_objective));
      rec.primal_infeasibility = primal_residual();
      rec.dual_infeasibility = frobenius<Scalar>(rd) / (1.0 + c_norm);
      rec.mu = dot<Scalar>(x_, z_) / n_;
      if (!sol.trace.empty()) {
        rec.step_primal = last_step_primal_;
        rec.step_dual = last_step_dual_;
      }
      sol.trace.push_back(rec);

      const bool finite = std::isfinite(rec.primal_objective) && std::isfinite(rec.dual_objective) &&
                          std::isfinite(rec.primal_infeasibility) && std::isfinite(rec.mu);
      if (!finite) {
        finish(sol, Status::kMaxIterations, "numerical breakdown; returning the best iterate");
        return;
      }
      const double score = merit(rec);
      if (score < 0.5 * best_.merit || (score < best_.merit && best_.merit <= 1.0)) {
        stalled = 0;
      } else {
        ++stalled;
      }
      if (score < best_.merit) best_ = {x_, z_, y_, rec, score};

      if (score <= 1.0) {
        finish(sol, Status::kOptimal, "");
        return;
      }
      double x_size = 0.0;
      for (const auto& x : x_) x_size += std::abs(x.trace());
      if (x_size > 1e12 || y_.cwiseAbs().maxCoeff() > 1e12) {
        finish(sol, Status::kInfeasible, "iterates diverged: primal or dual problem is infeasible", true);
        return;
      }
      if (it >= options_.max_iterations) {
        finish(sol, Status::kMaxIterations, "iteration cap reached");
        return;
      }
      if (stalled >= kStallLimit) {
        finish(sol, Status::kMaxIterations, "progress stalled; returning the best iterate");
        return;
      }

      std::vector<Scaling> sc;
      try {
        sc = nt_scaling();
      } catch (const NumericalError& e) {
        finish(sol, Status::kMaxIterations, std::string(e.what()) + "; returning the best iterate");
        return;
      }

      const int m = static_cast<int>(a_.size());
      RMatrix schur(m, m);
      for (int j = 0; j < m; ++j) {
        Blocks waw;
        for (size_t k = 0; k < sc.size(); ++k) waw.push_back(sc[k].w * a_[j][k] * sc[k].w);
        for (int i = 0; i <= j; ++i) schur(i, j) = schur(j, i) = dot<Scalar>(a_[i], waw);
      }
      Eigen::LDLT<RMatrix> ldlt(schur);
      if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
        schur.diagonal().array() += 1e-14 * schur.diagonal().maxCoeff();
        ldlt.compute(schur);
      }

      const double mu = rec.mu;
      Blocks pred;
      for (const auto& s : sc) pred.push_back((-2.0 * s.v.array().square()).matrix().template cast<Scalar>().asDiagonal());
      const Direction aff = direction(sc, ldlt, pred, rp, rd);
      const double ap = std::min(1.0, max_step(sc, aff.dx_scaled));
      const double ad = std::min(1.0, max_step(sc, aff.dz_scaled));
      double mu_aff = 0.0;
      for (size_t k = 0; k < x_.size(); ++k) {
        mu_aff += dot<Scalar>(M(x_[k] + ap * aff.dx[k]), M(z_[k] + ad * aff.dz[k]));
      }
      mu_aff /= n_;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      Blocks corr;
      for (size_t k = 0; k < sc.size(); ++k) {
        const Eigen::Index d = sc[k].v.size();
        M r = (2.0 * sigma * mu * RVector::Ones(d) - 2.0 * sc[k].v.array().square().matrix())
                  .template cast<Scalar>()
                  .asDiagonal();
        r -= aff.dx_scaled[k] * aff.dz_scaled[k] + aff.dz_scaled[k] * aff.dx_scaled[k];
        corr.push_back(std::move(r));
      }
      const Direction dir = direction(sc, ldlt, corr, rp, rd);
      gamma = 0.9 + 0.09 * std::min(ap, ad);
      const double step_p = std::min(1.0, gamma * max_step(sc, dir.dx_scaled));
      const double step_d = std::min(1.0, gamma * max_step(sc, dir.dz_scaled));
      for (size_t k = 0; k < x_.size(); ++k) {
        x_[k] += step_p * dir.dx[k];
        z_[k] += step_d * dir.dz[k];
        hermitize<Scalar>(x_[k]);
        hermitize<Scalar>(z_[k]);
        if (complex_structure_) {
          restore_structure(x_[k]);
          restore_structure(z_[k]);
        }
      }
      y_ += step_d * dir.dy;
      last_step_primal_ = step_p;
      last_step_dual_ = step_d;
    }
  }

  // Reports the best iterate seen, or the current one when it is the
  // evidence (divergence).
  void finish(Solution& sol, Status status, const std::string& message, bool current = false) {
    const Snapshot& s = current ? Snapshot{x_, z_, y_, sol.trace.back(), 0.0} : best_;
    sol.status = status;
    sol.message = message;
    sol.x = s.x;
    sol.z = s.z;
    const RVector y_kept = factor_.transpose().triangularView<Eigen::Upper>().solve(s.y);
    sol.y = RVector::Zero(static_cast<Eigen::Index>(problem_.constraints.size()));
    for (size_t i = 0; i < kept_.size(); ++i) sol.y(kept_[i]) = y_kept(static_cast<Eigen::Index>(i));
    sol.primal_objective = s.rec.primal_objective;
    sol.dual_objective = s.rec.dual_objective;
    sol.gap = s.rec.gap;
    sol.primal_infeasibility = s.rec.primal_infeasibility;
    sol.dual_infeasibility = s.rec.dual_infeasibility;
    sol.iterations = static_cast<int>(sol.trace.size()) - 1;
  }

  // Embedded iterates drift off the [[A, -B], [B, A]] subspace in floating
  // point; the drift is invisible to the constraints and degrades the
  // scaling, so it is projected away after every step.
  static void restore_structure(M& m) {
    const Eigen::Index n = m.rows() / 2;
    const M a = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
    const M b = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
    m.topLeftCorner(n, n) = a;
    m.bottomRightCorner(n, n) = a;
    m.bottomLeftCorner(n, n) = b;
    m.topRightCorner(n, n) = -b;
  }

  static constexpr int kStallLimit = 8;
  static constexpr int kRefinements = 3;

  const Problem& problem_;
  Options options_;
  bool complex_structure_ = false;
  std::vector<int> kept_;
  std::vector<Blocks> a_;
  std::vector<double> b_;
  RMatrix factor_;  // A_kept = factor_ * Q, lower triangular
  int n_ = 0;
  Blocks x_;
  Blocks z_;
  RVector y_;
  Snapshot best_;
  double last_step_primal_ = 0.0;
  double last_step_dual_ = 0.0;
};

}  // namespace

RealSolution solve(const RealProblem& problem, const Options& options) {
  return Engine<double>(problem, options).run();
}

Solution solve(const Problem& problem, const Options& options) {
  if (options.arithmetic == Arithmetic::kComplex) return Engine<Complex>(problem, options).run();

  problem.validate();
  const RealSolution real = Engine<double>(embed_hermitian(problem), options, true).run();
  Solution out;
  out.status = real.status;
  out.y = real.y;
  out.primal_objective = real.primal_objective;
  out.dual_objective = real.dual_objective;
  out.gap = real.gap;
  out.primal_infeasibility = real.primal_infeasibility;
  out.dual_infeasibility = real.dual_infeasibility;
  out.iterations = real.iterations;
  out.pruned = real.pruned;
  out.trace = real.trace;
  out.message = real.message;
  for (const auto& x : real.x) out.x.push_back(extract_hermitian(x));
  // The embedded slack is half the embedded dual matrix.
  for (const auto& z : real.z) out.z.push_back(2.0 * extract_hermitian(z));
  return out;
}

}  // namespace tsqkd::sdp
