#pragma once

#include <vector>

#include "tsqkd/detector.hpp"

// Relative-entropy objective f(rho) = D(G(rho) || Z(G(rho))) in bits and its
// gradient. With K^dag K = P = I_A (x) sum_z R_z, the nonzero spectrum of
// G(rho) equals that of P^1/2 rho P^1/2 and Z(G(rho)) splits into the blocks
// (I (x) sqrt R_z) rho (I (x) sqrt R_z), so nothing is formed on R(x)A(x)B.
// The epsilon perturbation G -> (1 - eps) G + eps I / d' is applied to both
// spectra before taking logarithms.
namespace tsqkd::keyrate {

struct ObjectiveMaps {
  int dim_a = 0;
  int dim_b = 0;
  int symbols = 0;
  std::vector<CMatrix> sqrt_regions;  // I_A (x) sqrt(R_z), one per key symbol
  CMatrix pass_sqrt;                  // P^1/2

  int dim() const { return dim_a * dim_b; }
  // d', the dimension of the post-processed space R(x)A(x)B.
  int output_dim() const { return symbols * dim(); }
};

ObjectiveMaps build_objective_maps(const detector::RegionOperatorSet& regions, int dim_a);

struct ObjectiveValue {
  double f = 0.0;
  CMatrix gradient;
};

double objective(const CMatrix& rho, const ObjectiveMaps& maps, double epsilon);
ObjectiveValue objective_and_gradient(const CMatrix& rho, const ObjectiveMaps& maps, double epsilon);

// Same value computed by forming G(rho) and Z(G(rho)) explicitly.
double objective_reference(const CMatrix& rho, const detector::RegionOperatorSet& regions, int dim_a,
                           double epsilon);

// Continuity correction zeta = 2 eps (d'-1) log2(d' / (eps (d'-1))): for all
// rho, f(rho) >= f_eps(rho) - zeta.
double perturbation_correction(double epsilon, int output_dim);

}  // namespace tsqkd::keyrate
