#include "tsqkd/channel.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "tsqkd/quadrature.hpp"

namespace tsqkd::channel {

using std::numbers::pi;

void ChannelParams::validate() const {
  if (!(length_km >= 0.0)) throw ParameterError("channel length must be >= 0");
  if (!(attenuation_db_per_km >= 0.0)) throw ParameterError("attenuation must be >= 0");
  if (!(excess_noise >= 0.0)) throw ParameterError("excess noise must be >= 0");
}

double transmittance(double length_km, double attenuation_db_per_km) {
  if (!(length_km >= 0.0)) throw ParameterError("channel length must be >= 0");
  return std::pow(10.0, -attenuation_db_per_km * length_km / 10.0);
}

double ChannelParams::transmittance() const {
  return channel::transmittance(length_km, attenuation_db_per_km);
}

void LinkModel::validate() const {
  constellation.validate();
  source.validate();
  channel.validate();
  detector.validate();
  regions.validate();
  if (!(folded_efficiency > 0.0 && folded_efficiency <= 1.0)) {
    throw ParameterError("folded detector efficiency must lie in (0, 1]");
  }
}

double LinkModel::total_gain() const {
  return detector.efficiency * channel_transmittance() * source.coupling_transmittance;
}

Complex LinkModel::outcome_mean(int x) const {
  return std::sqrt(total_gain()) * protocol::effective_amplitude(constellation.amplitudes.at(x), source);
}

double LinkModel::outcome_variance() const {
  return 1.0 + 0.5 * total_gain() * channel.excess_noise + detector.electronic_noise;
}

double outcome_density(Complex y, int x, const LinkModel& link) {
  const double v = link.outcome_variance();
  return std::exp(-std::norm(y - link.outcome_mean(x)) / v) / (pi * v);
}

Expectations constraint_expectations(int x, const LinkModel& link) {
  const double gain = link.total_gain();
  const Complex a = protocol::effective_amplitude(link.constellation.amplitudes.at(x), link.source);
  const double noise = 1.0 + 0.5 * gain * link.channel.excess_noise + link.detector.electronic_noise;
  return {std::sqrt(2.0 * gain) * a.real(), std::sqrt(2.0 * gain) * a.imag(),
          2.0 * gain * a.real() * a.real() + noise, 2.0 * gain * a.imag() * a.imag() + noise};
}

fock::FockOperator conditional_state(int x, const LinkModel& link, fock::Cutoff cutoff) {
  const double eta = link.channel_transmittance() * link.source.coupling_transmittance;
  const Complex mean =
      std::sqrt(eta) * protocol::effective_amplitude(link.constellation.amplitudes.at(x), link.source);
  const double photons = 0.5 * eta * link.channel.excess_noise;
  const int terms = photons == 0.0 ? 1 : 3 * cutoff.n_max() + 30;
  const CMatrix d = fock::displacement_elements(mean, static_cast<int>(cutoff.dim()), terms);
  const RVector w = fock::thermal_weights(photons, terms);
  return d * w.cast<Complex>().asDiagonal() * d.adjoint();
}

double JointDistribution::pass_probability() const {
  return 1.0 - p.col(p.cols() - 1).sum();
}

void JointDistribution::validate(double tol) const {
  if ((p.array() < -tol).any()) throw NumericalError("joint distribution has negative entries");
  if (std::abs(p.sum() - 1.0) > tol) throw NumericalError("joint distribution does not sum to 1");
}

JointDistribution joint_distribution(const LinkModel& link) {
  link.validate();
  const int inputs = link.constellation.size();
  const int symbols = link.regions.symbols;
  const double radius = link.regions.postselection_radius;
  const double v = link.outcome_variance();
  const double width = 2.0 * pi / symbols;
  using Angular = boost::math::quadrature::gauss<double, 30>;

  JointDistribution dist;
  dist.p = RMatrix::Zero(inputs, symbols + 1);
  quadrature::Options qopt;
  qopt.abs_tol = 1e-15;
  qopt.rel_tol = 1e-13;

  for (int x = 0; x < inputs; ++x) {
    const Complex mu = link.outcome_mean(x);
    const double r_max = std::abs(mu) + std::sqrt(v * 80.0);
    // Sector masses of the radial shell at r; the Gaussian is entire in
    // theta so a fixed 30-point rule per quarter arc is exact to rounding.
    const auto shell = [&](double r) {
      RVector out(symbols);
      for (int z = 0; z < symbols; ++z) {
        const double lo = (z - 0.5) * width;
        out(z) = r * Angular::integrate(
                         [&](double theta) {
                           return std::exp(-std::norm(std::polar(r, theta) - mu) / v) / (pi * v);
                         },
                         lo, lo + width);
      }
      return out;
    };
    const auto key = quadrature::integrate(shell, radius, r_max, qopt);
    if (!key.converged) throw NumericalError("joint distribution: radial quadrature failed");
    for (int z = 0; z < symbols; ++z) dist.p(x, z) = link.constellation.probabilities[x] * key.value(z);

    if (radius > 0.0) {
      const auto disk = quadrature::integrate(
          [&](double r) {
            RVector out(1);
            out(0) = shell(r).sum();
            return out;
          },
          0.0, radius, qopt);
      if (!disk.converged) throw NumericalError("joint distribution: disk quadrature failed");
      dist.p(x, symbols) = link.constellation.probabilities[x] * disk.value(0);
    }
  }
  return dist;
}

namespace {

double entropy_bits(const RVector& probs) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) h -= probs(i) * std::log2(probs(i));
  }
  return h;
}

}  // namespace

ECReport ec_cost(const JointDistribution& dist, double efficiency, ECConditioning conditioning) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ParameterError("reconciliation efficiency must lie in [0, 1]");
  }
  ECReport report;
  report.efficiency = efficiency;
  report.pass_probability = dist.pass_probability();
  if (!(report.pass_probability > 0.0)) {
    throw NumericalError("ec_cost: every round is discarded by postselection");
  }

  RMatrix joint = conditioning == ECConditioning::kPassOnly
                      ? RMatrix(dist.p.leftCols(dist.symbols()) / report.pass_probability)
                      : dist.p;
  const RVector px = joint.rowwise().sum();
  const RVector pz = joint.colwise().sum().transpose();
  const RVector flat = Eigen::Map<const RVector>(joint.data(), joint.size());
  report.entropy_z = entropy_bits(pz);
  report.mutual_information = std::max(0.0, entropy_bits(px) + report.entropy_z - entropy_bits(flat));
  report.delta_ec = report.entropy_z - efficiency * report.mutual_information;
  return report;
}

}  // namespace tsqkd::channel
