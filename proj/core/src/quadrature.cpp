#include "tsqkd/quadrature.hpp"

#include <algorithm>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tsqkd::quadrature {
namespace {

struct Panel {
  double a, b;
  RVector value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<RVector(double)>& f, double a, double b, int& evals) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const RVector f0 = f(mid);
  ++evals;
  RVector kronrod = wk[0] * f0;
  RVector gauss = wg[0] * f0;
  // Kronrod abscissae at even positions coincide with the Gauss nodes.
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const RVector fp = f(mid + half * xk[i]);
    const RVector fm = f(mid - half * xk[i]);
    evals += 2;
    kronrod += wk[i] * (fp + fm);
    if (i % 2 == 0) gauss += wg[i / 2] * (fp + fm);
  }
  kronrod *= half;
  gauss *= half;
  const double err = (kronrod - gauss).cwiseAbs().maxCoeff();
  return {a, b, std::move(kronrod), err};
}

}  // namespace

Result integrate(const std::function<RVector(double)>& f, double a, double b,
                 const Options& options) {
  Result result;
  if (a == b) {
    result.value = f(a) * 0.0;
    result.converged = true;
    return result;
  }
  std::priority_queue<Panel> panels;
  panels.push(evaluate_panel(f, a, b, result.evaluations));
  RVector total = panels.top().value;
  double error = panels.top().error;

  while (true) {
    const double scale = total.cwiseAbs().maxCoeff();
    if (error <= std::max(options.abs_tol, options.rel_tol * scale)) {
      result.converged = true;
      break;
    }
    if (static_cast<int>(panels.size()) >= options.max_intervals) break;
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid, result.evaluations);
    Panel right = evaluate_panel(f, mid, worst.b, result.evaluations);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(std::move(left));
    panels.push(std::move(right));
  }
  // Recompute the sums from scratch to shed accumulated rounding.
  total.setZero();
  error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  result.value = std::move(total);
  result.error_estimate = error;
  return result;
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const Options& options) {
  const auto wrapped = [&f](double x) {
    RVector v(1);
    v(0) = f(x);
    return v;
  };
  const Result r = integrate(wrapped, a, b, options);
  if (!r.converged) throw NumericalError("adaptive quadrature did not converge");
  return r.value(0);
}

}  // namespace tsqkd::quadrature
