#include "tsqkd/objective.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "tsqkd/protocol.hpp"

namespace tsqkd::keyrate {

namespace {

constexpr double kNegativeTol = 1e-13;

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
}

// Perturbed eigenvalues (1 - eps) lambda + eps / d'. A value that is still
// negative beyond rounding means eps cannot regularise the spectrum.
RVector perturb(const RVector& lambda, double epsilon, int output_dim) {
  RVector mu = (1.0 - epsilon) * lambda.array() + epsilon / output_dim;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) < -kNegativeTol) {
      throw NumericalError("objective: eigenvalue " + std::to_string(mu(i)) +
                           " stays negative after the epsilon perturbation");
    }
  }
  return mu;
}

double xlogx(const RVector& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > 0.0) s += v(i) * std::log2(v(i));
  return s;
}

RVector log2_strict(const RVector& v) {
  RVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0.0)) {
      throw NumericalError("objective gradient: singular spectrum, increase epsilon");
    }
    out(i) = std::log2(v(i));
  }
  return out;
}

struct Spectra {
  Eigen::SelfAdjointEigenSolver<CMatrix> pass;
  std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> blocks;
  RVector pass_values;
  std::vector<RVector> block_values;
  double f = 0.0;
};

Spectra spectra(const CMatrix& rho, const ObjectiveMaps& maps, double epsilon, bool vectors) {
  check_epsilon(epsilon);
  if (rho.rows() != maps.dim() || rho.cols() != maps.dim()) {
    throw ParameterError("objective: state dimension does not match the maps");
  }
  const auto mode = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  const int d_out = maps.output_dim();
  Spectra s;
  CMatrix tau = maps.pass_sqrt * rho * maps.pass_sqrt;
  tau = 0.5 * (tau + tau.adjoint()).eval();
  s.pass.compute(tau, mode);
  s.pass_values = perturb(s.pass.eigenvalues(), epsilon, d_out);
  double f = xlogx(s.pass_values);
  if (epsilon > 0.0) {
    const double floor = epsilon / d_out;
    f += (d_out - maps.dim()) * floor * std::log2(floor);
  }
  for (const auto& root : maps.sqrt_regions) {
    CMatrix b = root * rho * root;
    b = 0.5 * (b + b.adjoint()).eval();
    s.blocks.emplace_back(b, mode);
    s.block_values.push_back(perturb(s.blocks.back().eigenvalues(), epsilon, d_out));
    f -= xlogx(s.block_values.back());
  }
  s.f = f;
  return s;
}

}  // namespace

ObjectiveMaps build_objective_maps(const detector::RegionOperatorSet& regions, int dim_a) {
  if (dim_a < 1) throw ParameterError("objective maps need dim_a >= 1");
  ObjectiveMaps maps;
  maps.dim_a = dim_a;
  maps.dim_b = static_cast<int>(regions.cutoff.dim());
  maps.symbols = static_cast<int>(regions.key.size());
  const CMatrix id_a = CMatrix::Identity(dim_a, dim_a);
  CMatrix pass = CMatrix::Zero(maps.dim_b, maps.dim_b);
  for (const auto& r : regions.key) {
    maps.sqrt_regions.push_back(Eigen::kroneckerProduct(id_a, protocol::psd_sqrt(r)).eval());
    pass += r;
  }
  maps.pass_sqrt = Eigen::kroneckerProduct(id_a, protocol::psd_sqrt(pass)).eval();
  return maps;
}

double objective(const CMatrix& rho, const ObjectiveMaps& maps, double epsilon) {
  return spectra(rho, maps, epsilon, false).f;
}

ObjectiveValue objective_and_gradient(const CMatrix& rho, const ObjectiveMaps& maps, double epsilon) {
  const Spectra s = spectra(rho, maps, epsilon, true);
  const double scale = 1.0 - epsilon;
  const CMatrix& w = s.pass.eigenvectors();
  CMatrix grad = maps.pass_sqrt * w * log2_strict(s.pass_values).cast<Complex>().asDiagonal() *
                 w.adjoint() * maps.pass_sqrt;
  for (size_t z = 0; z < maps.sqrt_regions.size(); ++z) {
    const CMatrix& v = s.blocks[z].eigenvectors();
    grad -= maps.sqrt_regions[z] * v * log2_strict(s.block_values[z]).cast<Complex>().asDiagonal() *
            v.adjoint() * maps.sqrt_regions[z];
  }
  grad *= scale;
  return {s.f, 0.5 * (grad + grad.adjoint())};
}

double objective_reference(const CMatrix& rho, const detector::RegionOperatorSet& regions, int dim_a,
                           double epsilon) {
  check_epsilon(epsilon);
  const int symbols = static_cast<int>(regions.key.size());
  CMatrix g = protocol::kraus_map_G(rho, regions, dim_a);
  const Eigen::Index d = g.rows();
  g = (1.0 - epsilon) * g + epsilon / static_cast<double>(d) * CMatrix::Identity(d, d);
  const CMatrix zg = protocol::pinching_Z(g, symbols);
  const RVector lg = Eigen::SelfAdjointEigenSolver<CMatrix>(g, Eigen::EigenvaluesOnly).eigenvalues();
  const RVector lz = Eigen::SelfAdjointEigenSolver<CMatrix>(zg, Eigen::EigenvaluesOnly).eigenvalues();
  return xlogx(lg) - xlogx(lz);
}

double perturbation_correction(double epsilon, int output_dim) {
  check_epsilon(epsilon);
  if (epsilon == 0.0) return 0.0;
  const double d = output_dim;
  return 2.0 * epsilon * (d - 1.0) * std::log2(d / (epsilon * (d - 1.0)));
}

}  // namespace tsqkd::keyrate
