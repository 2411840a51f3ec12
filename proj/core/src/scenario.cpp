#include "tsqkd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsqkd::scenario {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const auto& issue : issues) out << "\n  " << issue;
  return out.str();
}

std::string show(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const char* to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kIdeal: return "ideal";
    case NoiseMode::kTrusted: return "trusted";
    case NoiseMode::kUntrusted: return "untrusted";
  }
  return "?";
}

NoiseMode noise_mode_from_string(const std::string& name) {
  if (name == "ideal") return NoiseMode::kIdeal;
  if (name == "trusted") return NoiseMode::kTrusted;
  if (name == "untrusted") return NoiseMode::kUntrusted;
  throw ParameterError("unknown noise mode '" + name + "' (ideal, trusted, untrusted)");
}

std::vector<std::string> Scenario::issues() const {
  std::vector<std::string> out;
  auto need = [&](bool ok, const std::string& field, const std::string& rule, double got) {
    if (!ok) out.push_back(field + ": " + rule + " (got " + show(got) + ")");
  };
  need(amplitude > 0.0 && std::isfinite(amplitude), "constellation.amplitude", "must be positive", amplitude);
  need(channel.length_km >= 0.0 && std::isfinite(channel.length_km), "channel.length_km", "must be >= 0",
       channel.length_km);
  need(channel.attenuation_db_per_km >= 0.0, "channel.attenuation_db_per_km", "must be >= 0",
       channel.attenuation_db_per_km);
  need(channel.excess_noise >= 0.0, "channel.excess_noise", "must be >= 0", channel.excess_noise);
  need(source.noise >= 0.0, "source.noise", "must be >= 0", source.noise);
  need(source.coupling_transmittance > 0.0 && source.coupling_transmittance < 1.0,
       "source.coupling_transmittance", "must lie in (0, 1)", source.coupling_transmittance);
  if (source.device) {
    const auto& d = *source.device;
    if (source.noise != 0.0) {
      out.push_back("source.noise: give either a direct noise value or device parameters, not both");
    }
    need(d.modulation_variance >= 0.0, "source.device.modulation_variance", "must be >= 0",
         d.modulation_variance);
    need(d.rin_per_hz >= 0.0, "source.device.rin_per_hz", "must be >= 0", d.rin_per_hz);
    need(d.linewidth_hz >= 0.0, "source.device.linewidth_hz", "must be >= 0", d.linewidth_hz);
    need(d.extinction_ratio_db >= 0.0, "source.device.extinction_ratio_db", "must be >= 0",
         d.extinction_ratio_db);
    need(d.dac_voltage > 0.0, "source.device.dac_voltage", "must be positive", d.dac_voltage);
    need(d.dac_deviation >= 0.0, "source.device.dac_deviation", "must be >= 0", d.dac_deviation);
  }
  need(detector.efficiency > 0.0 && detector.efficiency <= 1.0, "detector.efficiency",
       "must lie in (0, 1]", detector.efficiency);
  need(detector.electronic_noise >= 0.0, "detector.electronic_noise", "must be >= 0",
       detector.electronic_noise);
  need(postselection_radius >= 0.0, "postselection.radius", "must be >= 0", postselection_radius);
  need(reconciliation_efficiency > 0.0 && reconciliation_efficiency <= 1.0,
       "reconciliation.efficiency", "must lie in (0, 1]", reconciliation_efficiency);
  need(numerics.cutoff >= 1 && numerics.cutoff <= 40, "numerics.cutoff", "must lie in [1, 40]",
       numerics.cutoff);
  need(numerics.epsilon >= 0.0 && numerics.epsilon < 1.0, "numerics.epsilon", "must lie in [0, 1)",
       numerics.epsilon);
  need(numerics.sdp_feasibility_tol > 0.0, "numerics.sdp.feasibility_tol", "must be positive",
       numerics.sdp_feasibility_tol);
  need(numerics.sdp_gap_tol > 0.0, "numerics.sdp.gap_tol", "must be positive", numerics.sdp_gap_tol);
  need(numerics.sdp_max_iterations >= 1, "numerics.sdp.max_iterations", "must be >= 1",
       numerics.sdp_max_iterations);
  need(numerics.fw_max_iterations >= 1, "numerics.frank_wolfe.max_iterations", "must be >= 1",
       numerics.fw_max_iterations);
  need(numerics.fw_improvement_tol > 0.0, "numerics.frank_wolfe.improvement_tol", "must be positive",
       numerics.fw_improvement_tol);
  need(numerics.fw_certified_gap_tol > 0.0, "numerics.frank_wolfe.certified_gap_tol", "must be positive",
       numerics.fw_certified_gap_tol);
  if (detector.mode == NoiseMode::kUntrusted && out.empty()) {
    need(channel.transmittance() > 0.0, "channel.length_km",
         "an untrusted detector needs a nonzero channel transmittance", channel.length_km);
  }
  return out;
}

void Scenario::validate() const {
  auto found = issues();
  if (!found.empty()) throw ConfigError(std::move(found));
}

double Scenario::source_noise() const {
  if (!source.device) return source.noise;
  const auto budget = noise::assemble_budget(*source.device, source.device_trust);
  return budget.rin + budget.modulator + budget.dac;
}

std::pair<double, double> Scenario::source_split() const {
  switch (source.mode) {
    case NoiseMode::kIdeal: return {0.0, 0.0};
    case NoiseMode::kUntrusted: return {0.0, source_noise()};
    case NoiseMode::kTrusted: break;
  }
  if (!source.device) return {source.noise, 0.0};
  const auto budget = noise::assemble_budget(*source.device, source.device_trust);
  const double trusted = budget.trusted_part();
  return {trusted, budget.rin + budget.modulator + budget.dac - trusted};
}

channel::LinkModel resolve(const Scenario& s) {
  s.validate();
  channel::LinkModel link;
  link.constellation = protocol::build_constellation(s.amplitude);
  const auto [trusted, untrusted] = s.source_split();
  link.source = {trusted, s.source.coupling_transmittance, noise::kShotNoiseVariance};
  link.channel = s.channel;
  link.channel.excess_noise += untrusted;
  link.regions = {s.postselection_radius, 4};
  switch (s.detector.mode) {
    case NoiseMode::kIdeal:
      link.detector = {1.0, 0.0};
      break;
    case NoiseMode::kTrusted:
      link.detector = {s.detector.efficiency, s.detector.electronic_noise};
      break;
    case NoiseMode::kUntrusted:
      link.detector = {1.0, 0.0};
      link.folded_efficiency = s.detector.efficiency;
      link.channel.excess_noise += s.detector.electronic_noise / s.channel.transmittance();
      break;
  }
  link.validate();
  return link;
}

keyrate::KeyRateOptions keyrate_options(const Scenario& s) {
  keyrate::KeyRateOptions o;
  o.cutoff = s.numerics.cutoff;
  o.epsilon = s.numerics.epsilon;
  o.reconciliation_efficiency = s.reconciliation_efficiency;
  o.use_symmetry = s.numerics.use_symmetry;
  o.conditioning = s.numerics.conditioning;
  o.scale_bound_by_pass = s.numerics.scale_bound_by_pass;
  o.stop_when_zero = s.numerics.stop_when_zero;
  o.frank_wolfe.max_iterations = s.numerics.fw_max_iterations;
  o.frank_wolfe.improvement_tol = s.numerics.fw_improvement_tol;
  o.frank_wolfe.certified_gap_tol = s.numerics.fw_certified_gap_tol;
  o.frank_wolfe.sdp.feasibility_tol = s.numerics.sdp_feasibility_tol;
  o.frank_wolfe.sdp.gap_tol = s.numerics.sdp_gap_tol;
  o.frank_wolfe.sdp.max_iterations = s.numerics.sdp_max_iterations;
  return o;
}

keyrate::KeyRateReport run(const Scenario& s) { return keyrate::key_rate(resolve(s), keyrate_options(s)); }

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::kLength: return "L";
    case Axis::kAmplitude: return "alpha";
    case Axis::kPostselection: return "delta_a";
    case Axis::kSourceNoise: return "nu_s";
    case Axis::kExcessNoise: return "xi";
  }
  return "?";
}

Axis axis_from_string(const std::string& name) {
  if (name == "L" || name == "length" || name == "length_km") return Axis::kLength;
  if (name == "alpha" || name == "amplitude") return Axis::kAmplitude;
  if (name == "delta_a" || name == "postselection" || name == "radius") return Axis::kPostselection;
  if (name == "nu_s" || name == "source_noise") return Axis::kSourceNoise;
  if (name == "xi" || name == "excess_noise") return Axis::kExcessNoise;
  throw ParameterError("unknown sweep axis '" + name + "' (L, alpha, delta_a, nu_s, xi)");
}

Scenario with_axis(const Scenario& s, Axis axis, double value) {
  Scenario out = s;
  switch (axis) {
    case Axis::kLength: out.channel.length_km = value; break;
    case Axis::kAmplitude: out.amplitude = value; break;
    case Axis::kPostselection: out.postselection_radius = value; break;
    case Axis::kExcessNoise: out.channel.excess_noise = value; break;
    case Axis::kSourceNoise:
      if (s.source.device) throw ParameterError("nu_s sweeps need a direct source noise, not device parameters");
      out.source.noise = value;
      break;
  }
  return out;
}

double axis_value(const Scenario& s, Axis axis) {
  switch (axis) {
    case Axis::kLength: return s.channel.length_km;
    case Axis::kAmplitude: return s.amplitude;
    case Axis::kPostselection: return s.postselection_radius;
    case Axis::kSourceNoise: return s.source_noise();
    case Axis::kExcessNoise: return s.channel.excess_noise;
  }
  return 0.0;
}

void SweepSpec::validate() const {
  std::vector<std::string> found;
  if (values.empty()) found.push_back("sweep.values: must not be empty");
  if (axis == Axis::kSourceNoise && base.source.device) {
    found.push_back("sweep.axis: nu_s sweeps need source.noise, not source.device");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      found.push_back("sweep.values[" + std::to_string(i) + "]: must be finite");
      continue;
    }
    if (axis == Axis::kSourceNoise && base.source.device) continue;
    for (const auto& issue : with_axis(base, axis, values[i]).issues()) {
      found.push_back("sweep.values[" + std::to_string(i) + "] -> " + issue);
    }
  }
  if (!found.empty()) throw ConfigError(std::move(found));
}

std::vector<double> range_values(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw ParameterError("range needs finite bounds and a positive step");
  }
  if (stop < start) throw ParameterError("range stop must be >= start");
  std::vector<double> out;
  const double slack = step * 1e-9;
  for (long k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + slack) break;
    out.push_back(std::min(v, stop));
    if (out.size() > 100000) throw ParameterError("range has more than 1e5 points");
  }
  return out;
}

}  // namespace tsqkd::scenario
