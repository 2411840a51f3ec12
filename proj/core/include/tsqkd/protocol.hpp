#pragma once

#include <vector>

#include "tsqkd/detector.hpp"
#include "tsqkd/fock.hpp"
#include "tsqkd/keymap.hpp"
#include "tsqkd/noise_budget.hpp"

namespace tsqkd::protocol {

// Alice's signal states and their prior. Amplitudes are listed in key order
// x = 0, 1, ...; for QPSK these are {a, i a, -a, -i a}.
struct Constellation {
  std::vector<Complex> amplitudes;
  std::vector<double> probabilities;

  int size() const { return static_cast<int>(amplitudes.size()); }
  void validate() const;
};

Constellation build_constellation(double alpha);

enum class ReducedStateMethod { kClosedForm, kQuadrature };

// Alice's register-A state with the trusted thermal source coupled in:
//   rho_A(i,j) = sqrt(p_i p_j) <a_j|a_i> exp(-(1-eta_s) n_s |a_i - a_j|^2 / 4),
// a_x = sqrt(eta_s) alpha_x. The quadrature route evaluates the thermal
// average with polar Gauss-Laguerre x trapezoid nodes instead.
struct AliceReducedState {
  CMatrix matrix;
  ReducedStateMethod provenance = ReducedStateMethod::kClosedForm;
};

AliceReducedState alice_reduced_state(const Constellation& constellation,
                                      const noise::TrustedSourceModel& model,
                                      ReducedStateMethod method = ReducedStateMethod::kClosedForm,
                                      int quadrature_nodes = 96);

// Mean amplitude after the source beam splitter: sqrt(eta_s) alpha_x.
Complex effective_amplitude(Complex alpha_x, const noise::TrustedSourceModel& model);

// Hermitian PSD square root; eigenvalues in [-1e-10, 0) are clamped, anything
// more negative is a NumericalError.
CMatrix psd_sqrt(const CMatrix& m, double negative_tol = 1e-10);

// Kraus operator K = sum_z |z>_R (x) I_A (x) sqrt(R_z), mapping A(x)B into
// R(x)A(x)B. Composite index: (z * dim_a + a) * dim_b + b.
CMatrix kraus_operator(const detector::RegionOperatorSet& regions, int dim_a);

// G(rho) = K rho K^dag. rho lives on A(x)B with B the region cutoff.
CMatrix kraus_map_G(const CMatrix& rho, const detector::RegionOperatorSet& regions, int dim_a);

// Z(sigma): removes coherences between the key-register blocks.
CMatrix pinching_Z(const CMatrix& sigma, int key_symbols);

}  // namespace tsqkd::protocol
