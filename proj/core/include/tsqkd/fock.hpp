#pragma once

#include <utility>

#include "tsqkd/types.hpp"

// Truncated single-mode Fock-space toolkit. All operators are dense complex
// matrices in the number basis |0>, ..., |n_max>.
namespace tsqkd::fock {

// Photon-number cutoff. The Hilbert-space dimension is n_max + 1.
class Cutoff {
 public:
  explicit Cutoff(int n_max);

  int n_max() const { return n_max_; }
  Eigen::Index dim() const { return n_max_ + 1; }

  friend bool operator==(const Cutoff&, const Cutoff&) = default;

 private:
  int n_max_;
};

using FockOperator = CMatrix;
using StateVector = CVector;

FockOperator annihilation(Cutoff cutoff);
FockOperator creation(Cutoff cutoff);
FockOperator number_operator(Cutoff cutoff);

struct Quadratures {
  FockOperator q;
  FockOperator p;
};

// q = (a^dag + a)/sqrt2, p = i(a^dag - a)/sqrt2, built from truncated ladders.
Quadratures quadratures(Cutoff cutoff);

// Compression of q^2 / p^2 onto the truncated space: matrix elements of the
// untruncated operator, so the last diagonal entry is (2 n_max + 1)/2 rather
// than the product of truncated matrices.
FockOperator q_squared(Cutoff cutoff);
FockOperator p_squared(Cutoff cutoff);

// Coefficients exp(-|a|^2/2) a^n / sqrt(n!) for n <= n_max; not renormalized.
StateVector coherent_ket(Complex alpha, Cutoff cutoff);

// 1 - ||coherent_ket||^2, the Poisson tail mass beyond the cutoff.
double coherent_norm_deficit(Complex alpha, Cutoff cutoff);

// True when |alpha|^2 is not comfortably below n_max and the truncated ket
// should not be trusted.
bool coherent_truncation_suspect(Complex alpha, Cutoff cutoff);

// Diagonal n^k / (1+n)^(k+1), k <= n_max. The truncated diagonal is kept as is.
FockOperator thermal_state(double mean_photons, Cutoff cutoff);
RVector thermal_weights(double mean_photons, int count);

// 1 - trace(thermal_state), i.e. (n/(1+n))^(n_max+1).
double thermal_trace_deficit(double mean_photons, Cutoff cutoff);

// exp(alpha a^dag - alpha^* a) of the truncated generator (scaling and
// squaring). Unitary on the truncated space; only approximately equal to the
// compression of the true displacement near the cutoff edge.
FockOperator displacement(Complex alpha, Cutoff cutoff);

// Exact matrix elements <m|D(alpha)|k>, 0 <= m < rows, 0 <= k < cols, of the
// untruncated displacement operator.
CMatrix displacement_elements(Complex alpha, int rows, int cols);

struct BeamSplitterOutput {
  Complex transmitted;  // sqrt(eta) a + sqrt(1-eta) b
  Complex reflected;    // sqrt(1-eta) a - sqrt(eta) b
};

// Coherent amplitudes leaving a beam splitter of transmittance eta, using the
// reflection-matrix convention [[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]].
BeamSplitterOutput beamsplitter_amplitudes(Complex a, Complex b, double eta);

// Two-mode unitary exp[theta (a^dag b - a b^dag)] with cos^2(theta) = eta on
// the product space (index m * dim + n for |m>|n>). It maps |a>|b> to
// |sqrt(eta) a + sqrt(1-eta) b> |-(sqrt(1-eta) a - sqrt(eta) b)>: the second
// arm differs from beamsplitter_amplitudes by a pi phase.
CMatrix beamsplitter_unitary(double eta, Cutoff cutoff);

// Elementwise max-norm helpers used across the library.
double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

}  // namespace tsqkd::fock
