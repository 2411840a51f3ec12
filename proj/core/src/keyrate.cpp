#include "tsqkd/keyrate.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "tsqkd/protocol.hpp"

namespace tsqkd::keyrate {

namespace {

CMatrix unit(int n, int i, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

bool four_fold_symmetric(const protocol::Constellation& c) {
  if (c.size() != 4) return false;
  for (int x = 0; x < 4; ++x) {
    if (c.probabilities[x] != 0.25) return false;
    if (std::abs(c.amplitudes[(x + 1) % 4] - Complex(0, 1) * c.amplitudes[x]) > 1e-14) return false;
  }
  return true;
}

}  // namespace

ConstraintSet assemble_constraints(const channel::LinkModel& link, fock::Cutoff cutoff) {
  link.validate();
  ConstraintSet set;
  set.dim_a = link.constellation.size();
  set.dim_b = static_cast<int>(cutoff.dim());
  const int na = set.dim_a;
  const CMatrix id_b = CMatrix::Identity(set.dim_b, set.dim_b);
  const auto add = [&set](CMatrix op, double target, std::string label) {
    set.operators.push_back(std::move(op));
    set.targets.push_back(target);
    set.labels.push_back(std::move(label));
  };

  add(CMatrix::Identity(set.dim(), set.dim()), 1.0, "normalization");

  const auto obs = detector::observables(link.detector, cutoff);
  for (int x = 0; x < na; ++x) {
    const auto e = channel::constraint_expectations(x, link);
    const double p = link.constellation.probabilities[x];
    const CMatrix proj = unit(na, x, x);
    const std::string tag = "x" + std::to_string(x) + ":";
    add(Eigen::kroneckerProduct(proj, obs.first_q).eval(), p * e.first_q, tag + "F_Q");
    add(Eigen::kroneckerProduct(proj, obs.first_p).eval(), p * e.first_p, tag + "F_P");
    add(Eigen::kroneckerProduct(proj, obs.second_q).eval(), p * e.second_q, tag + "S_Q");
    add(Eigen::kroneckerProduct(proj, obs.second_p).eval(), p * e.second_p, tag + "S_P");
  }

  const CMatrix rho_a = protocol::alice_reduced_state(link.constellation, link.source).matrix;
  for (int i = 0; i < na; ++i) {
    add(Eigen::kroneckerProduct(unit(na, i, i), id_b).eval(), rho_a(i, i).real(),
        "rhoA(" + std::to_string(i) + "," + std::to_string(i) + ")");
  }
  for (int i = 0; i < na; ++i) {
    for (int j = i + 1; j < na; ++j) {
      const std::string ij = std::to_string(i) + "," + std::to_string(j);
      const CMatrix sym = unit(na, i, j) + unit(na, j, i);
      const CMatrix anti = Complex(0, 1) * (unit(na, i, j) - unit(na, j, i));
      add(Eigen::kroneckerProduct(sym, id_b).eval(), 2.0 * rho_a(i, j).real(), "re rhoA(" + ij + ")");
      add(Eigen::kroneckerProduct(anti, id_b).eval(), 2.0 * rho_a(i, j).imag(), "im rhoA(" + ij + ")");
    }
  }
  return set;
}

double ConstraintSet::residual(const CMatrix& rho) const {
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double value = (operators[i].transpose().array() * rho.array()).sum().real();
    worst = std::max(worst, std::abs(value - targets[i]));
  }
  return worst;
}

SymmetryBasis SymmetryBasis::dense(int dim) {
  if (dim < 1) throw ParameterError("symmetry basis needs a positive dimension");
  SymmetryBasis b;
  b.dim_ = dim;
  b.isometries_.push_back(CMatrix::Identity(dim, dim));
  return b;
}

SymmetryBasis SymmetryBasis::four_fold(int dim_b) {
  if (dim_b < 1) throw ParameterError("symmetry basis needs a positive dimension");
  SymmetryBasis b;
  b.dim_ = 4 * dim_b;
  // Block c holds f_k (x) |n> with k = (n - c) mod 4, f_k = sum_x i^{kx} |x> / 2;
  // these are the eigenvectors of U with eigenvalue i^c.
  const Complex i1(0.0, 1.0);
  for (int c = 0; c < 4; ++c) {
    CMatrix t = CMatrix::Zero(b.dim_, dim_b);
    for (int n = 0; n < dim_b; ++n) {
      const int k = ((n - c) % 4 + 4) % 4;
      for (int x = 0; x < 4; ++x) t(x * dim_b + n, n) = 0.5 * std::pow(i1, (k * x) % 4);
    }
    b.isometries_.push_back(std::move(t));
  }
  return b;
}

std::vector<CMatrix> SymmetryBasis::reduce(const CMatrix& full) const {
  std::vector<CMatrix> out;
  for (const auto& t : isometries_) out.push_back(t.adjoint() * full * t);
  return out;
}

CMatrix SymmetryBasis::expand(const std::vector<CMatrix>& blocks) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (size_t c = 0; c < isometries_.size(); ++c) out += isometries_[c] * blocks[c] * isometries_[c].adjoint();
  return out;
}

sdp::Problem build_problem(const ConstraintSet& constraints, const SymmetryBasis& basis,
                           const std::vector<CMatrix>& objective) {
  if (basis.dim() != constraints.dim()) throw ParameterError("symmetry basis does not match the constraints");
  sdp::Problem p;
  p.objective = objective;
  for (int i = 0; i < constraints.size(); ++i) {
    p.add_constraint(basis.reduce(constraints.operators[i]), constraints.targets[i], constraints.labels[i]);
  }
  return p;
}

std::vector<CMatrix> initial_point(const KeyRateProblem& problem, const sdp::Options& options) {
  std::vector<CMatrix> zero;
  for (int c = 0; c < problem.basis.blocks(); ++c) {
    const auto n = problem.basis.isometry(c).cols();
    zero.push_back(CMatrix::Zero(n, n));
  }
  const auto sol = sdp::solve(build_problem(problem.constraints, problem.basis, zero), options);
  if (sol.status == sdp::Status::kInfeasible) {
    throw NumericalError("no state satisfies the constraints: " + sol.message);
  }
  if (sol.primal_infeasibility > 1e3 * options.feasibility_tol) {
    throw NumericalError("feasibility problem did not converge (residual " +
                         std::to_string(sol.primal_infeasibility) + ")");
  }
  return sol.x;
}

BoundReport certify(const ObjectiveState& state, const KeyRateProblem& problem,
                    const sdp::Problem& linearization, const sdp::Solution& solution) {
  const sdp::Problem& lin = linearization;
  double lambda_min = std::numeric_limits<double>::infinity();
  for (int c = 0; c < lin.blocks(); ++c) {
    CMatrix z = lin.objective[c];
    for (size_t i = 0; i < lin.constraints.size(); ++i) z -= solution.y(i) * lin.constraints[i][c];
    z = 0.5 * (z + z.adjoint()).eval();
    lambda_min = std::min(lambda_min,
                          Eigen::SelfAdjointEigenSolver<CMatrix>(z, Eigen::EigenvaluesOnly).eigenvalues()(0));
  }
  double by = 0.0;
  for (size_t i = 0; i < lin.rhs.size(); ++i) by += solution.y(i) * lin.rhs[i];

  BoundReport r;
  r.status = solution.status;
  r.primal = state.f;
  r.lambda_min = lambda_min;
  r.linear_minimum = by + lambda_min;
  r.correction = perturbation_correction(state.epsilon, problem.maps.output_dim());
  const double at_rho = (state.rho * state.gradient).trace().real();
  r.bound = state.f - at_rho + r.linear_minimum - r.correction;
  return r;
}

BoundReport reliable_lower_bound(const ObjectiveState& state, const KeyRateProblem& problem,
                                 const sdp::Options& options) {
  const sdp::Problem lin = build_problem(problem.constraints, problem.basis, problem.basis.reduce(state.gradient));
  return certify(state, problem, lin, sdp::solve(lin, options));
}

KeyRateProblem build_keyrate_problem(const channel::LinkModel& link, const KeyRateOptions& options) {
  const fock::Cutoff cutoff(options.cutoff);
  const auto regions = detector::region_operators(link.regions, link.detector, cutoff, options.regions);
  KeyRateProblem p;
  p.constraints = assemble_constraints(link, cutoff);
  p.maps = build_objective_maps(regions, p.constraints.dim_a);
  p.basis = options.use_symmetry && four_fold_symmetric(link.constellation)
                ? SymmetryBasis::four_fold(p.constraints.dim_b)
                : SymmetryBasis::dense(p.constraints.dim());
  p.epsilon = options.epsilon;
  p.completeness_deficit = regions.completeness_deficit;
  return p;
}

KeyRateReport key_rate(const channel::LinkModel& link, const KeyRateOptions& options) {
  const KeyRateProblem problem = build_keyrate_problem(link, options);
  const auto ec = channel::ec_cost(channel::joint_distribution(link), options.reconciliation_efficiency,
                                   options.conditioning);
  FrankWolfeOptions fw = options.frank_wolfe;
  if (options.stop_when_zero) {
    fw.stop_below = options.scale_bound_by_pass ? ec.delta_ec : ec.pass_probability * ec.delta_ec;
  }
  const auto state = frank_wolfe(problem, fw);

  const sdp::Problem lin = build_problem(problem.constraints, problem.basis, problem.basis.reduce(state.gradient));
  const auto final_sol = sdp::solve(lin, options.bound_sdp);
  const auto bound = certify(state, problem, lin, final_sol);
  const double certified = std::max(bound.bound, state.best_bound);

  KeyRateReport r;
  r.lower_bound = certified;
  r.primal_f = state.f;
  r.gap = state.f - certified;
  r.delta_ec = ec.delta_ec;
  r.pass_probability = ec.pass_probability;
  r.raw_rate = options.scale_bound_by_pass ? ec.pass_probability * (certified - ec.delta_ec)
                                           : certified - ec.pass_probability * ec.delta_ec;
  r.rate = std::max(0.0, r.raw_rate);
  r.epsilon = problem.epsilon;
  r.correction = bound.correction;
  r.cutoff = options.cutoff;
  r.iterations = state.iterations;
  r.converged = state.converged;
  r.trace = state.trace;
  r.pruned = final_sol.pruned;
  r.completeness_deficit = problem.completeness_deficit;
  return r;
}

}  // namespace tsqkd::keyrate
