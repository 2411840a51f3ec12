#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tsqkd/keyrate.hpp"
#include "tsqkd/objective.hpp"

using namespace tsqkd;
using namespace tsqkd::keyrate;

namespace {

channel::LinkModel fig8_link(double radius = 0.0) {
  channel::LinkModel link;
  link.constellation = protocol::build_constellation(0.65);
  link.source = {0.001};
  link.channel = {80.0, 0.2, 0.02};
  link.detector = {0.45, 0.297};
  link.regions = {radius, 4};
  return link;
}

detector::RegionOperatorSet regions_at(int n_max, double radius = 0.0) {
  const auto link = fig8_link(radius);
  return detector::region_operators(link.regions, link.detector, fock::Cutoff(n_max));
}

// Four orthogonal Fock projectors standing in for the key regions, so any
// state diagonal in that split has no coherence between key sectors.
detector::RegionOperatorSet projector_regions(int n_max) {
  detector::RegionOperatorSet set;
  set.cutoff = fock::Cutoff(n_max);
  const int dim = n_max + 1;
  set.key.assign(4, fock::FockOperator::Zero(dim, dim));
  for (int n = 0; n < dim; ++n) set.key[n % 4](n, n) = 1.0;
  set.discard = fock::FockOperator::Zero(dim, dim);
  return set;
}

double log2_trace_form(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  double s = 0.0;
  for (double v : es.eigenvalues()) s += v * std::log2(v);
  return s;
}

// Same sum over the support only: zero eigenvalues contribute 0 log 0 = 0.
double log2_trace_form_support(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  double s = 0.0;
  for (double v : es.eigenvalues())
    if (v > 1e-15) s += v * std::log2(v);
  return s;
}

}  // namespace

TEST(Objective, MatchesExplicitMaps) {
  std::mt19937_64 rng(11);
  for (double radius : {0.0, 0.6}) {
    const auto regions = regions_at(4, radius);
    const auto maps = build_objective_maps(regions, 4);
    for (int trial = 0; trial < 5; ++trial) {
      const CMatrix rho = oracle::random_density(maps.dim(), rng);
      for (double eps : {1e-12, 1e-6}) {
        EXPECT_NEAR(objective(rho, maps, eps), objective_reference(rho, regions, 4, eps), 1e-9)
            << "radius " << radius << " eps " << eps;
      }
    }
  }
}

TEST(Objective, IndependentSpectralOracle) {
  // Tr[G log G] - Tr[G log Z(G)] = Tr[G log G] - Tr[Z(G) log Z(G)], since
  // log Z(G) is block diagonal and G shares its diagonal blocks.
  std::mt19937_64 rng(12);
  const auto regions = regions_at(3);
  const CMatrix rho = oracle::random_density(16, rng);
  const CMatrix g = protocol::kraus_map_G(rho, regions, 4);
  const CMatrix z = protocol::pinching_Z(g, 4);
  const double eps = 1e-6;
  const CMatrix flat = CMatrix::Identity(g.rows(), g.cols()) / static_cast<double>(g.rows());
  const double oracle =
      log2_trace_form((1 - eps) * g + eps * flat) - log2_trace_form((1 - eps) * z + eps * flat);
  const auto maps = build_objective_maps(regions, 4);
  EXPECT_NEAR(objective(rho, maps, eps), oracle, 1e-10);
}

TEST(Objective, NonnegativeOnRandomStates) {
  std::mt19937_64 rng(13);
  const auto link = fig8_link();
  KeyRateOptions options;
  options.cutoff = 4;
  options.use_symmetry = false;
  const auto problem = build_keyrate_problem(link, options);
  int checked = 0;
  // Half are generic full-rank states, half are feasible extreme points
  // obtained from random linear objectives over the constraint set.
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix rho = oracle::random_density(problem.maps.dim(), rng);
    EXPECT_GE(objective(rho, problem.maps, problem.epsilon), 0.0);
    ++checked;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix c = oracle::random_hermitian(problem.maps.dim(), rng);
    const auto sol = sdp::solve(build_problem(problem.constraints, problem.basis, {c}));
    ASSERT_NE(sol.status, sdp::Status::kInfeasible);
    const CMatrix rho = problem.basis.expand(sol.x);
    EXPECT_GE(objective(rho, problem.maps, problem.epsilon), 0.0);
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(Objective, ZeroWithoutKeySectorCoherence) {
  std::mt19937_64 rng(14);
  const auto regions = projector_regions(7);
  const auto maps = build_objective_maps(regions, 4);
  for (int trial = 0; trial < 5; ++trial) {
    // rho_AB = sum_n tau_n (x) |n><n|: G(rho) is already block diagonal.
    CMatrix rho = CMatrix::Zero(maps.dim(), maps.dim());
    for (int n = 0; n < 8; ++n) {
      const CMatrix tau = oracle::random_density(4, rng);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho(a * 8 + n, b * 8 + n) = tau(a, b) / 8.0;
    }
    EXPECT_NEAR(objective(rho, maps, 1e-12), 0.0, 1e-10);
    EXPECT_NEAR(objective(rho, maps, 1e-6), 0.0, 1e-10);
  }
}

TEST(Objective, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(15);
  const auto regions = regions_at(4);
  const auto maps = build_objective_maps(regions, 4);
  const double eps = 1e-12;
  const CMatrix rho = oracle::random_density(maps.dim(), rng);
  const auto value = objective_and_gradient(rho, maps, eps);
  EXPECT_NEAR(value.f, objective(rho, maps, eps), 1e-12);
  EXPECT_LE((value.gradient - value.gradient.adjoint()).cwiseAbs().maxCoeff(), 1e-10);

  const double h = 1e-5;
  double worst = 0.0;
  for (int dir = 0; dir < 10; ++dir) {
    CMatrix d = oracle::random_hermitian(maps.dim(), rng);
    d /= d.norm();
    const double fd = (objective(CMatrix(rho + h * d), maps, eps) - objective(CMatrix(rho - h * d), maps, eps)) /
                      (2.0 * h);
    const double analytic = (value.gradient * d).trace().real();
    const double rel = std::abs(fd - analytic) / std::max(std::abs(fd), 1e-12);
    worst = std::max(worst, rel);
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Objective, PerturbationCorrection) {
  const double eps = 1e-9;
  const int d = 176;
  EXPECT_NEAR(perturbation_correction(eps, d), 2 * eps * (d - 1) * std::log2(d / (eps * (d - 1))), 1e-20);
  EXPECT_EQ(perturbation_correction(0.0, d), 0.0);

  // f_eps - zeta never exceeds the unperturbed value.
  std::mt19937_64 rng(16);
  const auto regions = regions_at(3);
  const auto maps = build_objective_maps(regions, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix rho = oracle::random_density(maps.dim(), rng);
    const CMatrix g = protocol::kraus_map_G(rho, regions, 4);
    const double exact = log2_trace_form_support(g) - log2_trace_form_support(protocol::pinching_Z(g, 4));
    for (double e : {1e-9, 1e-6, 1e-3}) {
      EXPECT_LE(objective(rho, maps, e) - perturbation_correction(e, maps.output_dim()), exact + 1e-12);
    }
  }
}

TEST(Objective, RejectsNonPsdState) {
  const auto regions = regions_at(3);
  const auto maps = build_objective_maps(regions, 4);
  CMatrix rho = CMatrix::Identity(maps.dim(), maps.dim()) / maps.dim();
  rho(0, 0) = -0.5;
  EXPECT_THROW(objective(rho, maps, 1e-12), NumericalError);
}
