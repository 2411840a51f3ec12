#include "tsqkd/fock.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace tsqkd::fock {

Cutoff::Cutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw ParameterError("photon cutoff must be >= 1, got " + std::to_string(n_max));
  }
}

FockOperator annihilation(Cutoff cutoff) {
  FockOperator a = FockOperator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 1; n <= cutoff.n_max(); ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

FockOperator creation(Cutoff cutoff) { return annihilation(cutoff).adjoint(); }

FockOperator number_operator(Cutoff cutoff) {
  FockOperator n = FockOperator::Zero(cutoff.dim(), cutoff.dim());
  for (int k = 0; k <= cutoff.n_max(); ++k) n(k, k) = k;
  return n;
}

Quadratures quadratures(Cutoff cutoff) {
  const FockOperator a = annihilation(cutoff);
  const FockOperator ad = a.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  return {s * (ad + a), Complex(0.0, s) * (ad - a)};
}

namespace {

// Compression of an operator polynomial: evaluate one photon above the
// cutoff so that products of ladder operators are exact on the kept block.
template <typename F>
FockOperator compressed(Cutoff cutoff, F&& build) {
  const Cutoff wide(cutoff.n_max() + 2);
  const FockOperator full = build(quadratures(wide));
  return full.topLeftCorner(cutoff.dim(), cutoff.dim());
}

}  // namespace

FockOperator q_squared(Cutoff cutoff) {
  return compressed(cutoff, [](const Quadratures& w) -> FockOperator { return w.q * w.q; });
}

FockOperator p_squared(Cutoff cutoff) {
  return compressed(cutoff, [](const Quadratures& w) -> FockOperator { return w.p * w.p; });
}

StateVector coherent_ket(Complex alpha, Cutoff cutoff) {
  StateVector ket(cutoff.dim());
  Complex c = std::exp(-0.5 * std::norm(alpha));
  ket(0) = c;
  for (int n = 1; n <= cutoff.n_max(); ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    ket(n) = c;
  }
  return ket;
}

double coherent_norm_deficit(Complex alpha, Cutoff cutoff) {
  // Sum the Poisson tail directly; 1 - sum(head) loses everything below 1e-16.
  const double mean = std::norm(alpha);
  if (mean == 0.0) return 0.0;
  double term = std::exp(-mean);
  for (int n = 1; n <= cutoff.n_max(); ++n) term *= mean / n;
  double tail = 0.0;
  for (int n = cutoff.n_max() + 1; n < cutoff.n_max() + 2000; ++n) {
    term *= mean / n;
    tail += term;
    if (term < 1e-300 || (n > mean && term < 1e-18 * tail)) break;
  }
  return tail;
}

bool coherent_truncation_suspect(Complex alpha, Cutoff cutoff) {
  return coherent_norm_deficit(alpha, cutoff) > 1e-8;
}

RVector thermal_weights(double mean_photons, int count) {
  if (!(mean_photons >= 0.0)) {
    throw ParameterError("thermal mean photon number must be >= 0");
  }
  RVector w(count);
  const double ratio = mean_photons / (1.0 + mean_photons);
  double p = 1.0 / (1.0 + mean_photons);
  for (int k = 0; k < count; ++k) {
    w(k) = p;
    p *= ratio;
  }
  return w;
}

FockOperator thermal_state(double mean_photons, Cutoff cutoff) {
  const RVector w = thermal_weights(mean_photons, static_cast<int>(cutoff.dim()));
  return w.cast<Complex>().asDiagonal();
}

double thermal_trace_deficit(double mean_photons, Cutoff cutoff) {
  if (!(mean_photons >= 0.0)) {
    throw ParameterError("thermal mean photon number must be >= 0");
  }
  return std::pow(mean_photons / (1.0 + mean_photons), cutoff.n_max() + 1);
}

FockOperator displacement(Complex alpha, Cutoff cutoff) {
  const FockOperator a = annihilation(cutoff);
  const FockOperator generator = alpha * a.adjoint() - std::conj(alpha) * a;
  return generator.exp();
}

CMatrix displacement_elements(Complex alpha, int rows, int cols) {
  if (rows < 1 || cols < 1) throw ParameterError("displacement_elements: empty block");
  // Row 0 is the conjugate coherent amplitude series; rows follow from
  // a D = D (a + alpha): sqrt(m+1) D[m+1,k] = sqrt(k) D[m,k-1] + alpha D[m,k].
  CMatrix d(rows, cols);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  const Complex step = -std::conj(alpha);
  for (int k = 0; k < cols; ++k) {
    if (k > 0) c *= step / std::sqrt(static_cast<double>(k));
    d(0, k) = c;
  }
  for (int m = 0; m + 1 < rows; ++m) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(m + 1));
    for (int k = 0; k < cols; ++k) {
      Complex v = alpha * d(m, k);
      if (k > 0) v += std::sqrt(static_cast<double>(k)) * d(m, k - 1);
      d(m + 1, k) = v * inv;
    }
  }
  return d;
}

BeamSplitterOutput beamsplitter_amplitudes(Complex a, Complex b, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ParameterError("beam-splitter transmittance must lie in [0, 1]");
  }
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  return {t * a + r * b, r * a - t * b};
}

CMatrix beamsplitter_unitary(double eta, Cutoff cutoff) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ParameterError("beam-splitter transmittance must lie in [0, 1]");
  }
  const double theta = std::acos(std::sqrt(eta));
  const Eigen::Index d = cutoff.dim();
  const CMatrix a = annihilation(cutoff);
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix a1 = Eigen::kroneckerProduct(a, id);
  const CMatrix a2 = Eigen::kroneckerProduct(id, a);
  const CMatrix generator = theta * (a1.adjoint() * a2 - a1 * a2.adjoint());
  return generator.exp();
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

}  // namespace tsqkd::fock
