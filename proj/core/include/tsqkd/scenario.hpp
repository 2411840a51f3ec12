#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsqkd/keyrate.hpp"

// A full experiment description and its reduction to the link model the
// key-rate machinery runs on.
namespace tsqkd::scenario {

// Schema or consistency violations; the message lists every offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// ideal: the noise is absent. trusted: modelled inside the devices.
// untrusted: handed to the eavesdropper as excess noise.
enum class NoiseMode { kIdeal, kTrusted, kUntrusted };

const char* to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(const std::string& name);

struct SourceSpec {
  NoiseMode mode = NoiseMode::kTrusted;
  double noise = 0.0;  // nu_s in SNU, used when no device parameters are given
  std::optional<noise::DeviceParams> device;
  noise::TrustFlags device_trust;  // which budget components are trusted
  double coupling_transmittance = noise::kSourceCouplingTransmittance;
};

struct DetectorSpec {
  NoiseMode mode = NoiseMode::kTrusted;
  double efficiency = 1.0;
  double electronic_noise = 0.0;
};

struct Numerics {
  int cutoff = 10;
  double epsilon = 1e-12;
  bool use_symmetry = true;
  double sdp_feasibility_tol = 1e-8;
  double sdp_gap_tol = 1e-8;
  int sdp_max_iterations = 200;
  int fw_max_iterations = 300;
  double fw_improvement_tol = 1e-7;
  double fw_certified_gap_tol = 1e-7;
  channel::ECConditioning conditioning = channel::ECConditioning::kPassOnly;
  bool scale_bound_by_pass = false;
  bool stop_when_zero = true;
  std::uint64_t seed = 0;
};

struct Scenario {
  double amplitude = 0.6;
  channel::ChannelParams channel{0.0, 0.2, 0.0};
  SourceSpec source;
  DetectorSpec detector;
  double postselection_radius = 0.0;
  double reconciliation_efficiency = 0.956;
  Numerics numerics;

  // Throws ConfigError naming each invalid field.
  void validate() const;
  std::vector<std::string> issues() const;

  // Source noise before the trust split: nu_s, or the device budget total.
  double source_noise() const;
  // (trusted, untrusted) parts of the source noise under the current mode.
  std::pair<double, double> source_split() const;
};

// Untrusted source noise joins xi; an untrusted detector becomes an ideal
// heterodyne behind extra channel loss eta_d and extra excess noise
// nu_el / eta_t.
channel::LinkModel resolve(const Scenario& s);
keyrate::KeyRateOptions keyrate_options(const Scenario& s);
keyrate::KeyRateReport run(const Scenario& s);

// Sweep axes.
enum class Axis { kLength, kAmplitude, kPostselection, kSourceNoise, kExcessNoise };

const char* to_string(Axis axis);
Axis axis_from_string(const std::string& name);
// Copy of s with the axis field set to value.
Scenario with_axis(const Scenario& s, Axis axis, double value);
double axis_value(const Scenario& s, Axis axis);

struct SweepSpec {
  Axis axis = Axis::kLength;
  std::vector<double> values;
  Scenario base;

  void validate() const;
};

// start, start + step, ... up to stop inclusive (within step * 1e-9).
std::vector<double> range_values(double start, double stop, double step);

}  // namespace tsqkd::scenario
