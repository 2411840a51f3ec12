#include <cmath>

#include "tsqkd/keyrate.hpp"

namespace tsqkd::keyrate {

namespace {

struct LineSearchResult {
  double step = 0.0;
  double f = 0.0;
};

// Golden-section search for the minimum of a convex function on [0, limit].
template <typename F>
LineSearchResult golden_section(F&& phi, double f0, double limit, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = limit;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = phi(x2);
    }
  }
  LineSearchResult best{0.0, f0};
  if (f1 < best.f) best = {x1, f1};
  if (f2 < best.f) best = {x2, f2};
  if (hi >= limit - tol) {
    const double f_end = phi(limit);
    if (f_end < best.f) best = {limit, f_end};
  }
  return best;
}

}  // namespace

ObjectiveState frank_wolfe(const KeyRateProblem& problem, const FrankWolfeOptions& options) {
  return frank_wolfe(problem, initial_point(problem, options.sdp), options);
}

ObjectiveState frank_wolfe(const KeyRateProblem& problem, std::vector<CMatrix> start,
                           const FrankWolfeOptions& options) {
  ObjectiveState state;
  state.epsilon = problem.epsilon;
  state.blocks = std::move(start);
  state.rho = problem.basis.expand(state.blocks);

  const double residual_cap = std::max(options.max_residual, problem.constraints.residual(state.rho));
  double residual = problem.constraints.residual(state.rho);
  int quiet = 0;
  for (int it = 0;; ++it) {
    auto value = objective_and_gradient(state.rho, problem.maps, problem.epsilon);
    state.f = value.f;
    state.gradient = std::move(value.gradient);
    state.iterations = it;
    if (it >= options.max_iterations) break;
    if (state.f < options.stop_below) {
      state.converged = true;
      break;
    }

    const sdp::Problem lin = build_problem(problem.constraints, problem.basis, problem.basis.reduce(state.gradient));
    const auto sol = sdp::solve(lin, options.sdp);
    if (sol.status == sdp::Status::kInfeasible) {
      throw NumericalError("Frank-Wolfe subproblem infeasible: " + sol.message);
    }

    std::vector<CMatrix> delta;
    for (size_t c = 0; c < sol.x.size(); ++c) delta.push_back(sol.x[c] - state.blocks[c]);
    const CMatrix delta_full = problem.basis.expand(delta);
    const double gap = -(state.gradient.array().conjugate() * delta_full.array()).sum().real();

    FrankWolfeStep rec;
    rec.iteration = it;
    rec.f = state.f;
    rec.gap = gap;
    rec.bound = certify(state, problem, lin, sol).bound;
    rec.sdp_iterations = sol.iterations;
    rec.sdp_status = sol.status;
    state.best_bound = std::max(state.best_bound, rec.bound);
    if (state.f - state.best_bound <= options.certified_gap_tol) {
      state.trace.push_back(rec);
      state.converged = true;
      break;
    }
    // A non-positive gap from an inexact subproblem only means the solver
    // cannot resolve a better direction.
    if (gap <= options.gap_tol) {
      state.trace.push_back(rec);
      state.converged = sol.status == sdp::Status::kOptimal;
      break;
    }

    const auto phi = [&](double t) {
      return objective(CMatrix(state.rho + t * delta_full), problem.maps, problem.epsilon);
    };
    // The residual is convex along the segment.
    const double target_residual = problem.constraints.residual(CMatrix(state.rho + delta_full));
    double limit = 1.0;
    if (target_residual > residual_cap) {
      limit = std::max(0.0, (residual_cap - residual) / (target_residual - residual));
    }
    const auto ls = limit > 0.0 ? golden_section(phi, state.f, limit, options.line_search_tol * limit)
                                : LineSearchResult{0.0, state.f};
    rec.step = ls.step;
    state.trace.push_back(rec);

    if (ls.step > 0.0) {
      for (size_t c = 0; c < delta.size(); ++c) state.blocks[c] += ls.step * delta[c];
      state.rho += ls.step * delta_full;
      residual = problem.constraints.residual(state.rho);
    }
    const double improvement = (state.f - ls.f) / std::max(std::abs(state.f), 1e-300);
    quiet = improvement < options.improvement_tol ? quiet + 1 : 0;
    if (quiet >= options.patience) {
      auto last = objective_and_gradient(state.rho, problem.maps, problem.epsilon);
      state.f = last.f;
      state.gradient = std::move(last.gradient);
      state.iterations = it + 1;
      state.converged = true;
      break;
    }
  }
  return state;
}

}  // namespace tsqkd::keyrate
