#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsqkd/types.hpp"

// Primal-dual interior-point solver for block-diagonal Hermitian SDPs in
// standard form
//   minimize  sum_b Tr(C_b X_b)
//   s.t.      sum_b Tr(A_ib X_b) = b_i,   X_b >= 0,
// with dual  maximize b.y  s.t.  Z = C - sum_i y_i A_i >= 0.
// Uses Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
namespace tsqkd::sdp {

enum class Status { kOptimal, kInfeasible, kMaxIterations };
const char* to_string(Status status);

enum class Arithmetic {
  kRealEmbedding,  // solve the 2n x 2n real symmetric embedding
  kComplex,        // work with complex Hermitian blocks directly
};

struct Options {
  double feasibility_tol = 1e-8;  // max_i |Tr(A_i X) - b_i| and relative dual residual
  double gap_tol = 1e-8;          // |pobj - dobj| / (1 + |pobj| + |dobj|)
  int max_iterations = 200;
  double prune_tol = 1e-10;       // relative residual below which a constraint is dependent
  Arithmetic arithmetic = Arithmetic::kRealEmbedding;
};

template <typename Scalar>
struct BasicProblem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Blocks = std::vector<Matrix>;

  Blocks objective;                 // one Hermitian matrix per block
  std::vector<Blocks> constraints;  // A_i, same block layout as objective
  std::vector<double> rhs;          // b_i
  std::vector<std::string> labels;  // optional, used in diagnostics

  int blocks() const { return static_cast<int>(objective.size()); }
  int total_dim() const;
  // Throws ParameterError on empty constraint lists, mismatched block
  // shapes or non-Hermitian data.
  void validate(double hermitian_tol = 1e-10) const;
  void add_constraint(Blocks a, double b, std::string label = {});
};

using Problem = BasicProblem<Complex>;
using RealProblem = BasicProblem<double>;

// Single-block problem builder.
Problem dense_problem(const CMatrix& objective,
                      const std::vector<std::pair<CMatrix, double>>& constraints);

struct IterationRecord {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double mu = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

template <typename Scalar>
struct BasicSolution {
  using Blocks = typename BasicProblem<Scalar>::Blocks;

  Status status = Status::kMaxIterations;
  Blocks x;
  Blocks z;
  RVector y;  // one entry per original constraint; pruned ones are 0
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // relative, see Options::gap_tol
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<int> pruned;  // dependent constraints dropped before solving
  std::vector<IterationRecord> trace;
  std::string message;
};

using Solution = BasicSolution<Complex>;
using RealSolution = BasicSolution<double>;

Solution solve(const Problem& problem, const Options& options = {});
RealSolution solve(const RealProblem& problem, const Options& options = {});

// X -> [[Re X, -Im X], [Im X, Re X]]. Objective and constraints are halved so
// that Tr(A~ X~) = Tr(A X) for every embedded X.
RealProblem embed_hermitian(const Problem& problem);
RMatrix embed_matrix(const CMatrix& m);
// Inverse of embed_matrix after averaging the two copies.
CMatrix extract_hermitian(const RMatrix& m);

// Hermitian inner product Re Tr(A^dag B) summed over blocks.
double inner(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b);

// Plain-text dump: a header line "tsqkd-sdp <blocks> <constraints>", the
// block sizes, then the objective and each constraint as row-major
// "re im" pairs, one matrix row per line, with the rhs before each
// constraint.
void write_problem(std::ostream& out, const Problem& problem);
Problem read_problem(std::istream& in);

}  // namespace tsqkd::sdp
