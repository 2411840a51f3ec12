#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tsqkd/channel.hpp"
#include "tsqkd/objective.hpp"
#include "tsqkd/sdp.hpp"

namespace tsqkd::keyrate {

// Linear constraints on rho_AB: Tr rho = 1, the 16 observable constraints
// Tr[rho (|x><x| (x) O)] = p_x <O>_x, and Tr_B rho_AB = rho_A written as 16
// Hermitian-basis equalities. Listed in that order, so pruning keeps the
// normalization and drops the last diagonal pin.
struct ConstraintSet {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<CMatrix> operators;
  std::vector<double> targets;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(operators.size()); }
  int dim() const { return dim_a * dim_b; }
  // max_i |Tr(Gamma_i rho) - gamma_i|
  double residual(const CMatrix& rho) const;
};

ConstraintSet assemble_constraints(const channel::LinkModel& link, fock::Cutoff cutoff);

// Orthonormal block basis of A(x)B. The dense basis is the identity; the
// four-fold basis diagonalises U = shift_A (x) exp(i pi n/2), under which the
// whole problem is invariant, so the optimum can be taken block diagonal.
class SymmetryBasis {
 public:
  static SymmetryBasis dense(int dim);
  static SymmetryBasis four_fold(int dim_b);

  int blocks() const { return static_cast<int>(isometries_.size()); }
  int dim() const { return dim_; }
  const CMatrix& isometry(int block) const { return isometries_.at(block); }
  std::vector<CMatrix> reduce(const CMatrix& full) const;
  CMatrix expand(const std::vector<CMatrix>& blocks) const;

 private:
  int dim_ = 0;
  std::vector<CMatrix> isometries_;
};

sdp::Problem build_problem(const ConstraintSet& constraints, const SymmetryBasis& basis,
                           const std::vector<CMatrix>& objective);

struct FrankWolfeOptions {
  int max_iterations = 300;
  double improvement_tol = 1e-7;     // relative decrease of f
  int patience = 3;                  // consecutive small improvements before stopping
  double line_search_tol = 1e-6;     // golden-section tolerance on the step size
  double gap_tol = 1e-12;            // stop once the linearization gap is this small
  double certified_gap_tol = 1e-7;   // stop once f - (best certified bound) is this small
  // Steps are shortened so the iterate's constraint residual stays below
  // max(max_residual, residual of the start). Near pure states f drops much
  // faster than the residual grows, so inexact subproblem solutions must not
  // be followed all the way.
  double max_residual = 1e-7;
  // Stop as soon as f drops below this: min f is then below it too.
  double stop_below = -std::numeric_limits<double>::infinity();
  sdp::Options sdp;
};

struct FrankWolfeStep {
  int iteration = 0;
  double f = 0.0;
  double step = 0.0;
  double gap = 0.0;    // Tr[(rho - sigma) grad f], the Frank-Wolfe gap
  double bound = 0.0;  // certified lower bound from this step's subproblem dual
  int sdp_iterations = 0;
  sdp::Status sdp_status = sdp::Status::kOptimal;
};

// The solver state: a feasible rho (block form and full form), f_eps at rho
// and its gradient.
struct ObjectiveState {
  std::vector<CMatrix> blocks;
  CMatrix rho;
  double f = 0.0;
  CMatrix gradient;
  double epsilon = 0.0;
  int iterations = 0;
  bool converged = false;
  // Every subproblem is a linearization SDP, so each step certifies a bound;
  // the best one is kept.
  double best_bound = -std::numeric_limits<double>::infinity();
  std::vector<FrankWolfeStep> trace;
};

// Everything the optimisation needs, built once per scenario.
struct KeyRateProblem {
  ConstraintSet constraints;
  SymmetryBasis basis;
  ObjectiveMaps maps;
  double epsilon = 1e-12;
  double completeness_deficit = 0.0;
};

// Feasibility SDP with a zero objective; its interior solution is the
// starting point.
std::vector<CMatrix> initial_point(const KeyRateProblem& problem, const sdp::Options& options);

ObjectiveState frank_wolfe(const KeyRateProblem& problem, const FrankWolfeOptions& options);
ObjectiveState frank_wolfe(const KeyRateProblem& problem, std::vector<CMatrix> start,
                           const FrankWolfeOptions& options);

struct BoundReport {
  double bound = 0.0;          // certified lower bound on min f, bits
  double primal = 0.0;         // f_eps at the final iterate
  double linear_minimum = 0.0; // dual lower bound on min Tr(sigma grad f)
  double correction = 0.0;     // epsilon continuity term
  double lambda_min = 0.0;     // of grad f - sum y_i Gamma_i
  sdp::Status status = sdp::Status::kOptimal;
};

// Step 2: linearise f_eps at rho*, bound min Tr(sigma grad f) from below
// with any dual vector y via b.y + lambda_min(grad - A^dag y) (valid because
// Tr sigma = 1), then subtract the perturbation correction.
BoundReport reliable_lower_bound(const ObjectiveState& state, const KeyRateProblem& problem,
                                 const sdp::Options& options);
// The same bound from an already solved linearization SDP at state.rho.
BoundReport certify(const ObjectiveState& state, const KeyRateProblem& problem,
                    const sdp::Problem& linearization, const sdp::Solution& solution);

struct KeyRateOptions {
  int cutoff = 10;
  double epsilon = 1e-12;
  double reconciliation_efficiency = 0.956;
  bool use_symmetry = true;
  channel::ECConditioning conditioning = channel::ECConditioning::kPassOnly;
  bool scale_bound_by_pass = false;  // alternative normalization p_pass * (bound - delta_ec)
  // End Frank-Wolfe once f is below the error-correction cost: the clamped
  // rate is then zero whatever the bound, and raw_rate is only a lower bound.
  bool stop_when_zero = true;
  FrankWolfeOptions frank_wolfe;
  sdp::Options bound_sdp{1e-10, 1e-10, 200, 1e-10, sdp::Arithmetic::kRealEmbedding};
  detector::RegionOptions regions;
};

struct KeyRateReport {
  double rate = 0.0;      // clamped at 0
  double raw_rate = 0.0;  // signed value before clamping
  double lower_bound = 0.0;
  double primal_f = 0.0;
  double gap = 0.0;  // primal_f - lower_bound
  double delta_ec = 0.0;
  double pass_probability = 1.0;
  double epsilon = 0.0;
  double correction = 0.0;
  int cutoff = 0;
  int iterations = 0;
  bool converged = false;
  double completeness_deficit = 0.0;
  std::vector<int> pruned;
  std::vector<FrankWolfeStep> trace;
};

KeyRateProblem build_keyrate_problem(const channel::LinkModel& link, const KeyRateOptions& options);
KeyRateReport key_rate(const channel::LinkModel& link, const KeyRateOptions& options = {});

}  // namespace tsqkd::keyrate
