#include "tsqkd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace tsqkd::protocol {

using std::numbers::pi;

void KeyMapRegions::validate() const {
  if (!(postselection_radius >= 0.0)) throw ParameterError("postselection radius must be >= 0");
  if (symbols < 2) throw ParameterError("key map needs at least two symbols");
}

std::optional<int> key_map(Complex y, const KeyMapRegions& regions) {
  if (std::abs(y) < regions.postselection_radius) return std::nullopt;
  const int m = regions.symbols;
  const double width = 2.0 * pi / m;
  double theta = std::arg(y);
  if (theta < -0.5 * width) theta += 2.0 * pi;
  const double shifted = (theta + 0.5 * width) / width;
  int sector = static_cast<int>(std::floor(shifted)) % m;
  // An exact edge hit belongs to both neighbours; keep the lower index.
  if (m == 4 && y != Complex(0.0, 0.0) && std::abs(y.real()) == std::abs(y.imag())) {
    const int below = (sector + m - 1) % m;
    sector = std::min(sector, below);
  }
  return sector;
}

void Constellation::validate() const {
  if (amplitudes.empty() || amplitudes.size() != probabilities.size()) {
    throw ParameterError("constellation needs matching amplitudes and probabilities");
  }
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("constellation probabilities must sum to 1");
  for (double p : probabilities) {
    if (!(p > 0.0)) throw ParameterError("constellation probabilities must be positive");
  }
}

Constellation build_constellation(double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("constellation amplitude must be positive");
  return {{Complex(alpha, 0), Complex(0, alpha), Complex(-alpha, 0), Complex(0, -alpha)},
          {0.25, 0.25, 0.25, 0.25}};
}

Complex effective_amplitude(Complex alpha_x, const noise::TrustedSourceModel& model) {
  model.validate();
  return std::sqrt(model.coupling_transmittance) * alpha_x;
}

namespace {

Complex coherent_overlap(Complex bra, Complex ket) {
  return std::exp(-0.5 * std::norm(bra) - 0.5 * std::norm(ket) + std::conj(bra) * ket);
}

// Golub-Welsch nodes/weights for int_0^inf exp(-s) f(s) ds.
void gauss_laguerre(int n, RVector& nodes, RVector& weights) {
  RMatrix jacobi = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2 * i + 1;
    if (i + 1 < n) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jacobi);
  nodes = es.eigenvalues();
  weights = es.eigenvectors().row(0).array().square();
}

}  // namespace

AliceReducedState alice_reduced_state(const Constellation& constellation,
                                      const noise::TrustedSourceModel& model,
                                      ReducedStateMethod method, int quadrature_nodes) {
  constellation.validate();
  model.validate();
  const int n = constellation.size();
  const double eta = model.coupling_transmittance;
  const double mean = model.mean_photons();
  const double mix = std::sqrt(1.0 - eta);

  std::vector<Complex> a(n);
  for (int x = 0; x < n; ++x) a[x] = std::sqrt(eta) * constellation.amplitudes[x];

  CMatrix rho(n, n);
  if (method == ReducedStateMethod::kClosedForm || mean == 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double weight = std::sqrt(constellation.probabilities[i] * constellation.probabilities[j]);
        const double dephasing = std::exp(-0.25 * (1.0 - eta) * mean * std::norm(a[i] - a[j]));
        rho(i, j) = weight * coherent_overlap(a[j], a[i]) * dephasing;
      }
    }
  } else {
    // beta = sqrt(mean * s) e^{i phi}: the thermal weight becomes
    // exp(-s) ds dphi / (2 pi).
    RVector s, w;
    gauss_laguerre(quadrature_nodes, s, w);
    const int angles = 2 * quadrature_nodes;
    rho.setZero();
    for (int k = 0; k < quadrature_nodes; ++k) {
      const double radius = std::sqrt(mean * s(k));
      for (int l = 0; l < angles; ++l) {
        const Complex beta = std::polar(radius, 2.0 * pi * l / angles);
        const double weight = w(k) / angles;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            rho(i, j) += weight * coherent_overlap(a[j] + mix * beta, a[i] + mix * beta);
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rho(i, j) *= std::sqrt(constellation.probabilities[i] * constellation.probabilities[j]);
    if (!rho.allFinite()) throw NumericalError("reduced-state quadrature diverged");
  }
  return {rho, method == ReducedStateMethod::kClosedForm || mean == 0.0
                   ? ReducedStateMethod::kClosedForm
                   : ReducedStateMethod::kQuadrature};
}

CMatrix psd_sqrt(const CMatrix& m, double negative_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  RVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -negative_tol) {
      throw NumericalError("psd_sqrt: eigenvalue " + std::to_string(ev(i)) + " is not PSD");
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix kraus_operator(const detector::RegionOperatorSet& regions, int dim_a) {
  const Eigen::Index db = regions.cutoff.dim();
  const Eigen::Index dab = dim_a * db;
  const int symbols = static_cast<int>(regions.key.size());
  CMatrix k = CMatrix::Zero(symbols * dab, dab);
  for (int z = 0; z < symbols; ++z) {
    const CMatrix root = psd_sqrt(regions.key[z]);
    for (int a = 0; a < dim_a; ++a) k.block(z * dab + a * db, a * db, db, db) = root;
  }
  return k;
}

CMatrix kraus_map_G(const CMatrix& rho, const detector::RegionOperatorSet& regions, int dim_a) {
  if (rho.rows() != dim_a * regions.cutoff.dim() || rho.cols() != rho.rows()) {
    throw ParameterError("kraus_map_G: state dimension does not match A(x)B");
  }
  const CMatrix k = kraus_operator(regions, dim_a);
  return k * rho * k.adjoint();
}

CMatrix pinching_Z(const CMatrix& sigma, int key_symbols) {
  if (sigma.rows() % key_symbols != 0 || sigma.rows() != sigma.cols()) {
    throw ParameterError("pinching_Z: dimension is not a multiple of the key register");
  }
  const Eigen::Index block = sigma.rows() / key_symbols;
  CMatrix out = CMatrix::Zero(sigma.rows(), sigma.cols());
  for (int z = 0; z < key_symbols; ++z) {
    out.block(z * block, z * block, block, block) = sigma.block(z * block, z * block, block, block);
  }
  return out;
}

}  // namespace tsqkd::protocol
