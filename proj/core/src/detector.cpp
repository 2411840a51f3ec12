#include "tsqkd/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tsqkd/quadrature.hpp"

namespace tsqkd::detector {

using std::numbers::pi;

void DetectorParams::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ParameterError("detector efficiency must lie in (0, 1]");
  }
  if (!(electronic_noise >= 0.0)) throw ParameterError("electronic noise must be >= 0");
}

int povm_thermal_terms(const DetectorParams& detector, Cutoff cutoff, int override_terms) {
  if (override_terms > 0) return override_terms;
  if (detector.thermal_mean() == 0.0) return 1;
  return 3 * cutoff.n_max() + 10;
}

FockOperator povm_element(Complex y, const DetectorParams& detector, Cutoff cutoff,
                          int thermal_terms) {
  detector.validate();
  const int terms = povm_thermal_terms(detector, cutoff, thermal_terms);
  const CMatrix d = fock::displacement_elements(y / std::sqrt(detector.efficiency),
                                                static_cast<int>(cutoff.dim()), terms);
  const RVector w = fock::thermal_weights(detector.thermal_mean(), terms);
  return d * w.cast<Complex>().asDiagonal() * d.adjoint() / (detector.efficiency * pi);
}

ObservableSet observables(const DetectorParams& detector, Cutoff cutoff) {
  detector.validate();
  const auto quads = fock::quadratures(cutoff);
  const double gain = detector.efficiency;
  const double offset = 1.0 - 0.5 * gain + detector.electronic_noise;
  const CMatrix id = CMatrix::Identity(cutoff.dim(), cutoff.dim());
  return {std::sqrt(gain) * quads.q, std::sqrt(gain) * quads.p,
          gain * fock::q_squared(cutoff) + offset * id,
          gain * fock::p_squared(cutoff) + offset * id};
}

Complex sector_phase_integral(int k, int z, int symbols) {
  const double width = 2.0 * pi / symbols;
  if (k == 0) return width;
  const double center = width * z;
  return std::polar(2.0 * std::sin(0.5 * k * width) / k, k * center);
}

FockOperator RegionOperatorSet::completeness() const {
  FockOperator sum = discard;
  for (const auto& r : key) sum += r;
  return sum;
}

namespace {

// Real symmetric radial profile g(r) = <m|G_r|n> for real r >= 0, packed as
// the upper triangle (row-major, m <= n).
class RadialProfile {
 public:
  RadialProfile(const DetectorParams& detector, Cutoff cutoff, int terms)
      : scale_(1.0 / std::sqrt(detector.efficiency)),
        norm_(1.0 / (detector.efficiency * pi)),
        dim_(static_cast<int>(cutoff.dim())),
        terms_(terms),
        weights_(fock::thermal_weights(detector.thermal_mean(), terms)) {}

  int packed_size() const { return dim_ * (dim_ + 1) / 2; }

  RMatrix matrix(double r) const {
    const RMatrix d = fock::displacement_elements(Complex(r * scale_, 0.0), dim_, terms_).real();
    return norm_ * (d * weights_.asDiagonal() * d.transpose());
  }

  RVector packed(double r) const {
    const RMatrix g = matrix(r);
    RVector v(packed_size());
    int idx = 0;
    for (int m = 0; m < dim_; ++m)
      for (int n = m; n < dim_; ++n) v(idx++) = r * g(m, n);
    return v;
  }

  RVector diagonal(double r) const { return r * matrix(r).diagonal(); }

 private:
  double scale_;
  double norm_;
  int dim_;
  int terms_;
  RVector weights_;
};

double radial_limit(const RadialProfile& profile, double start) {
  double peak = 0.0;
  for (double r = 0.25; r < 400.0; r += 0.25) {
    const double v = profile.diagonal(r).cwiseAbs().maxCoeff();
    peak = std::max(peak, v);
    if (r > start && r > 2.0 && v < 1e-17 * peak) return r;
  }
  throw NumericalError("region operators: radial integrand does not decay");
}

}  // namespace

RegionOperatorSet region_operators(const protocol::KeyMapRegions& regions,
                                   const DetectorParams& detector, Cutoff cutoff,
                                   const RegionOptions& options) {
  regions.validate();
  detector.validate();
  const int terms = povm_thermal_terms(detector, cutoff, options.thermal_terms);
  const RadialProfile profile(detector, cutoff, terms);
  const int dim = static_cast<int>(cutoff.dim());
  const double radius = regions.postselection_radius;
  const double r_max = radial_limit(profile, radius);

  quadrature::Options qopt;
  qopt.abs_tol = options.abs_tol;
  qopt.rel_tol = options.rel_tol;
  qopt.max_intervals = 4000;

  const auto outer = quadrature::integrate(
      [&profile](double r) { return profile.packed(r); }, radius, r_max, qopt);
  if (!outer.converged) throw NumericalError("region operators: radial quadrature failed");

  RegionOperatorSet set;
  set.regions = regions;
  set.detector = detector;
  set.cutoff = cutoff;
  set.radial_limit = r_max;
  set.thermal_terms = terms;
  set.key.assign(regions.symbols, FockOperator::Zero(dim, dim));
  int idx = 0;
  for (int m = 0; m < dim; ++m) {
    for (int n = m; n < dim; ++n) {
      const double radial = outer.value(idx++);
      for (int z = 0; z < regions.symbols; ++z) {
        const Complex v = radial * sector_phase_integral(m - n, z, regions.symbols);
        set.key[z](m, n) = v;
        set.key[z](n, m) = std::conj(v);
      }
    }
  }

  set.discard = FockOperator::Zero(dim, dim);
  if (radius > 0.0) {
    const auto inner = quadrature::integrate(
        [&profile](double r) { return profile.diagonal(r); }, 0.0, radius, qopt);
    if (!inner.converged) throw NumericalError("region operators: disk quadrature failed");
    for (int m = 0; m < dim; ++m) set.discard(m, m) = 2.0 * pi * inner.value(m);
  }

  set.completeness_deficit =
      fock::max_abs(set.completeness() - FockOperator::Identity(dim, dim));
  return set;
}

}  // namespace tsqkd::detector
