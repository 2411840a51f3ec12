#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tsqkd/keyrate.hpp"

using namespace tsqkd;
using namespace tsqkd::keyrate;

namespace {

channel::LinkModel fig8_link() {
  channel::LinkModel link;
  link.constellation = protocol::build_constellation(0.65);
  link.source = {0.001};
  link.channel = {80.0, 0.2, 0.02};
  link.detector = {0.45, 0.297};
  return link;
}

channel::LinkModel noiseless_link() {
  channel::LinkModel link;
  link.constellation = protocol::build_constellation(0.6);
  link.source = {0.0};
  link.channel = {0.0, 0.2, 0.0};
  link.detector = {1.0, 0.0};
  return link;
}

KeyRateOptions at_cutoff(int n_max, bool symmetric = true) {
  KeyRateOptions o;
  o.cutoff = n_max;
  o.use_symmetry = symmetric;
  return o;
}

// U = shift_A (x) exp(i pi n / 2) with shift |x> = |x + 1>.
CMatrix rotation(int dim_b) {
  CMatrix shift = CMatrix::Zero(4, 4);
  for (int x = 0; x < 4; ++x) shift((x + 1) % 4, x) = 1.0;
  CMatrix phase = CMatrix::Zero(dim_b, dim_b);
  for (int n = 0; n < dim_b; ++n) phase(n, n) = std::pow(Complex(0, 1), n % 4);
  CMatrix u = CMatrix::Zero(4 * dim_b, 4 * dim_b);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) u.block(a * dim_b, b * dim_b, dim_b, dim_b) = shift(a, b) * phase;
  return u;
}

constexpr double kNoiselessBound = 1.9998607184052886;

}  // namespace

TEST(Constraints, LayoutAndRank) {
  const auto set = assemble_constraints(fig8_link(), fock::Cutoff(5));
  ASSERT_EQ(set.size(), 33);
  EXPECT_EQ(set.labels.front(), "normalization");
  // Rank of the constraint Gram matrix, computed independently of the
  // solver's pruning.
  const int n = set.size();
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = (set.operators[i].adjoint() * set.operators[j]).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double top = es.eigenvalues().maxCoeff();
  int rank = 0;
  for (double v : es.eigenvalues()) rank += v > 1e-10 * top;
  EXPECT_EQ(rank, 32);
}

TEST(Constraints, DensePruningKeepsThirtyTwo) {
  KeyRateOptions options = at_cutoff(5, false);
  const auto problem = build_keyrate_problem(fig8_link(), options);
  const auto sol = initial_point(problem, options.frank_wolfe.sdp);
  const auto direct = sdp::solve(build_problem(problem.constraints, problem.basis,
                                               {CMatrix::Zero(problem.constraints.dim(), problem.constraints.dim())}));
  EXPECT_EQ(problem.constraints.size() - static_cast<int>(direct.pruned.size()), 32);
  EXPECT_LE(problem.constraints.residual(problem.basis.expand(sol)), 1e-8);
}

TEST(Constraints, FirstMomentsVanishForVacuumInputs) {
  channel::LinkModel link;
  link.constellation = {{0, 0, 0, 0}, {0.25, 0.25, 0.25, 0.25}};
  link.source = {0.0};
  link.channel = {10.0, 0.2, 0.01};
  link.detector = {1.0, 0.0};
  const auto set = assemble_constraints(link, fock::Cutoff(4));
  for (int i = 0; i < set.size(); ++i) {
    if (set.labels[i].find(":F_") != std::string::npos) EXPECT_EQ(set.targets[i], 0.0) << set.labels[i];
  }
}

TEST(Constraints, MirrorSymmetricTargets) {
  const auto set = assemble_constraints(fig8_link(), fock::Cutoff(4));
  const auto target = [&set](const std::string& label) {
    for (int i = 0; i < set.size(); ++i)
      if (set.labels[i] == label) return set.targets[i];
    ADD_FAILURE() << "missing " << label;
    return 0.0;
  };
  EXPECT_GT(target("x0:F_Q"), 0.0);
  EXPECT_NEAR(target("x0:F_Q"), -target("x2:F_Q"), 1e-15);
  EXPECT_NEAR(target("x0:S_Q"), target("x2:S_Q"), 1e-15);
  EXPECT_NEAR(target("x0:S_P"), target("x2:S_P"), 1e-15);
  EXPECT_NEAR(target("x1:F_P"), -target("x3:F_P"), 1e-15);
}

TEST(Constraints, ResidualOfTargetsIsZeroOnlyWhenMatched) {
  const auto set = assemble_constraints(fig8_link(), fock::Cutoff(3));
  const CMatrix mixed = CMatrix::Identity(set.dim(), set.dim()) / set.dim();
  EXPECT_GT(set.residual(mixed), 1e-3);
}

TEST(SymmetryBasis, FourFoldIsEigenbasisOfRotation) {
  const int dim_b = 7;
  const auto basis = SymmetryBasis::four_fold(dim_b);
  const CMatrix u = rotation(dim_b);
  int total = 0;
  for (int c = 0; c < 4; ++c) {
    const CMatrix& t = basis.isometry(c);
    total += static_cast<int>(t.cols());
    EXPECT_LE((t.adjoint() * t - CMatrix::Identity(t.cols(), t.cols())).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((u * t - std::pow(Complex(0, 1), c) * t).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_EQ(total, 4 * dim_b);

  std::mt19937_64 rng(21);
  const CMatrix rho = oracle::random_density(4 * dim_b, rng);
  CMatrix twirl = CMatrix::Zero(rho.rows(), rho.cols());
  CMatrix uk = CMatrix::Identity(rho.rows(), rho.cols());
  for (int k = 0; k < 4; ++k, uk = (u * uk).eval()) twirl += uk * rho * uk.adjoint() / 4.0;
  EXPECT_LE((basis.expand(basis.reduce(twirl)) - twirl).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SymmetryBasis, ProblemIsRotationInvariant) {
  KeyRateOptions options = at_cutoff(4, false);
  const auto problem = build_keyrate_problem(fig8_link(), options);
  const CMatrix u = rotation(problem.constraints.dim_b);
  const CMatrix rho = problem.basis.expand(initial_point(problem, options.frank_wolfe.sdp));
  const CMatrix rotated = u * rho * u.adjoint();
  EXPECT_LE(problem.constraints.residual(rotated), 1e-7);
  EXPECT_NEAR(objective(rotated, problem.maps, problem.epsilon), objective(rho, problem.maps, problem.epsilon),
              1e-10);
}

TEST(SymmetryBasis, FourFoldAgreesWithDense) {
  const auto link = fig8_link();
  const auto dense = key_rate(link, at_cutoff(4, false));
  const auto folded = key_rate(link, at_cutoff(4, true));
  // Both bounds are valid for the same minimum.
  EXPECT_LE(dense.lower_bound, folded.primal_f + 1e-9);
  EXPECT_LE(folded.lower_bound, dense.primal_f + 1e-9);
  EXPECT_NEAR(dense.lower_bound, folded.lower_bound, 2e-5);
}

TEST(FrankWolfe, ObjectiveTraceIsMonotone) {
  for (int n_max : {4, 6}) {
    const auto report = key_rate(fig8_link(), at_cutoff(n_max));
    ASSERT_FALSE(report.trace.empty());
    for (size_t k = 1; k < report.trace.size(); ++k) {
      EXPECT_LE(report.trace[k].f, report.trace[k - 1].f) << "step " << k;
    }
    EXPECT_LE(report.primal_f, report.trace.back().f);
  }
}

TEST(FrankWolfe, StopsAtKnownOptimum) {
  // Regions are orthogonal Fock projectors and only Tr rho = 1 is imposed,
  // so the maximally mixed state has no key-sector coherence: f = 0 there,
  // the gradient vanishes and the first step must already certify it.
  const int dim_b = 8;
  detector::RegionOperatorSet regions;
  regions.cutoff = fock::Cutoff(dim_b - 1);
  regions.key.assign(4, fock::FockOperator::Zero(dim_b, dim_b));
  for (int n = 0; n < dim_b; ++n) regions.key[n % 4](n, n) = 1.0;
  regions.discard = fock::FockOperator::Zero(dim_b, dim_b);

  KeyRateProblem problem;
  problem.constraints.dim_a = 4;
  problem.constraints.dim_b = dim_b;
  problem.constraints.operators = {CMatrix::Identity(4 * dim_b, 4 * dim_b)};
  problem.constraints.targets = {1.0};
  problem.constraints.labels = {"normalization"};
  problem.basis = SymmetryBasis::dense(4 * dim_b);
  problem.maps = build_objective_maps(regions, 4);

  const std::vector<CMatrix> start{CMatrix::Identity(4 * dim_b, 4 * dim_b) / (4.0 * dim_b)};
  const auto state = frank_wolfe(problem, start, FrankWolfeOptions{});
  EXPECT_TRUE(state.converged);
  ASSERT_EQ(state.trace.size(), 1u);
  EXPECT_EQ(state.trace[0].step, 0.0);
  EXPECT_NEAR(state.f, 0.0, 1e-10);
  EXPECT_LE((state.rho - start[0]).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FrankWolfe, CutoffStability) {
  const auto coarse = key_rate(fig8_link(), at_cutoff(6));
  const auto fine = key_rate(fig8_link(), at_cutoff(10));
  EXPECT_NEAR(coarse.primal_f, fine.primal_f, 0.02 * fine.primal_f);
}

TEST(FrankWolfe, RecomputedObjectiveMatchesState) {
  KeyRateOptions options = at_cutoff(6);
  const auto problem = build_keyrate_problem(fig8_link(), options);
  const auto state = frank_wolfe(problem, options.frank_wolfe);
  const auto fresh = objective_and_gradient(problem.basis.expand(state.blocks), problem.maps, problem.epsilon);
  EXPECT_NEAR(fresh.f, state.f, 1e-12);
  EXPECT_LE((fresh.gradient - state.gradient).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(problem.constraints.residual(state.rho), options.frank_wolfe.max_residual);
}

TEST(Bound, BelowPrimalAcrossScenarios) {
  std::vector<channel::LinkModel> links{fig8_link(), noiseless_link()};
  auto far = fig8_link();
  far.channel = {200.0, 0.2, 0.01};
  links.push_back(far);
  auto trusted_source = fig8_link();
  trusted_source.source = {0.02};
  trusted_source.detector = {1.0, 0.0};
  trusted_source.constellation = protocol::build_constellation(0.6);
  links.push_back(trusted_source);
  auto post = fig8_link();
  post.regions = {0.7, 4};
  links.push_back(post);
  for (size_t k = 0; k < links.size(); ++k) {
    const auto report = key_rate(links[k], at_cutoff(8));
    EXPECT_LE(report.lower_bound, report.primal_f) << "scenario " << k;
    EXPECT_GE(report.gap, 0.0) << "scenario " << k;
  }
}

TEST(Bound, GapShrinksWithTighterTolerances) {
  KeyRateOptions loose = at_cutoff(6);
  loose.frank_wolfe.improvement_tol = 1e-6;
  loose.frank_wolfe.certified_gap_tol = 1e-6;
  loose.frank_wolfe.sdp.feasibility_tol = 1e-7;
  loose.frank_wolfe.sdp.gap_tol = 1e-7;
  KeyRateOptions tight = loose;
  tight.frank_wolfe.improvement_tol = 1e-7;
  tight.frank_wolfe.certified_gap_tol = 1e-7;
  tight.frank_wolfe.sdp.feasibility_tol = 1e-8;
  tight.frank_wolfe.sdp.gap_tol = 1e-8;
  const auto a = key_rate(fig8_link(), loose);
  const auto b = key_rate(fig8_link(), tight);
  EXPECT_LT(b.gap, a.gap);
}

TEST(Bound, EpsilonHalvingWithinCorrection) {
  KeyRateOptions options = at_cutoff(6);
  options.epsilon = 1e-9;
  const auto problem = build_keyrate_problem(fig8_link(), options);
  const auto state = frank_wolfe(problem, options.frank_wolfe);
  const double zeta = perturbation_correction(options.epsilon, problem.maps.output_dim());

  auto halved_problem = problem;
  halved_problem.epsilon = 0.5 * options.epsilon;
  ObjectiveState halved = state;
  auto value = objective_and_gradient(state.rho, problem.maps, halved_problem.epsilon);
  halved.f = value.f;
  halved.gradient = value.gradient;
  halved.epsilon = halved_problem.epsilon;

  const auto full = reliable_lower_bound(state, problem, options.bound_sdp);
  const auto half = reliable_lower_bound(halved, halved_problem, options.bound_sdp);
  EXPECT_LT(std::abs(full.bound - half.bound), zeta);
}

TEST(KeyRate, GlobalPhaseCovariance) {
  const auto link = fig8_link();
  auto rotated = link;
  for (auto& a : rotated.constellation.amplitudes) a *= Complex(0, 1);
  const auto a = key_rate(link, at_cutoff(8));
  const auto b = key_rate(rotated, at_cutoff(8));
  EXPECT_NEAR(a.rate, b.rate, 1e-6);
}

TEST(KeyRate, HugeExcessNoiseGivesZero) {
  auto link = fig8_link();
  link.channel.excess_noise = 1.0;
  const auto report = key_rate(link, at_cutoff(6));
  EXPECT_EQ(report.rate, 0.0);
  EXPECT_LT(report.raw_rate, 0.0);
}

TEST(KeyRate, NoiselessRegression) {
  const auto report = key_rate(noiseless_link(), at_cutoff(10));
  EXPECT_GT(report.lower_bound, 0.0);
  EXPECT_GT(report.rate, 0.0);
  // Four equiprobable key symbols: D <= H(Z) = 2 bits.
  EXPECT_LT(report.primal_f, 2.0);
  // Frozen after the first validated run.
  EXPECT_NEAR(report.lower_bound, kNoiselessBound, 1e-8);
}

TEST(KeyRate, ReportFields) {
  const auto report = key_rate(fig8_link(), at_cutoff(6));
  EXPECT_EQ(report.cutoff, 6);
  EXPECT_EQ(report.epsilon, 1e-12);
  EXPECT_NEAR(report.raw_rate, report.lower_bound - report.pass_probability * report.delta_ec, 1e-15);
  EXPECT_EQ(report.pass_probability, 1.0);
  EXPECT_GT(report.iterations, 0);
  EXPECT_FALSE(report.pruned.empty());
  EXPECT_GT(report.correction, 0.0);
}
