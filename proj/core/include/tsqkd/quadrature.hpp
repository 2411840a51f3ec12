#pragma once

#include <functional>

#include "tsqkd/types.hpp"

namespace tsqkd::quadrature {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 2000;
};

struct Result {
  RVector value;
  double error_estimate = 0.0;  // max-norm over components
  int evaluations = 0;
  bool converged = false;
};

// Globally adaptive 15-point Gauss-Kronrod for vector-valued integrands on
// [a, b]. Error control uses the max-norm of the Kronrod/Gauss difference.
Result integrate(const std::function<RVector(double)>& f, double a, double b,
                 const Options& options = {});

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const Options& options = {});

}  // namespace tsqkd::quadrature
