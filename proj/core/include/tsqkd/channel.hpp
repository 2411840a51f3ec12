#pragma once

#include <array>

#include "tsqkd/detector.hpp"
#include "tsqkd/noise_budget.hpp"
#include "tsqkd/protocol.hpp"

// Simulated phase-invariant Gaussian channel: Bob's conditional states,
// heterodyne outcome densities, constraint targets and the classical
// error-correction cost.
namespace tsqkd::channel {

struct ChannelParams {
  double length_km = 0.0;
  double attenuation_db_per_km = 0.2;
  double excess_noise = 0.0;  // xi, source-referred SNU

  void validate() const;
  double transmittance() const;
};

double transmittance(double length_km, double attenuation_db_per_km = 0.2);

// The physical model a simulation runs on, after deciding which noise is
// trusted. Untrusted contributions have already been folded into the
// channel's excess noise and transmittance.
struct LinkModel {
  protocol::Constellation constellation;
  noise::TrustedSourceModel source;
  ChannelParams channel;
  detector::DetectorParams detector;
  protocol::KeyMapRegions regions;
  double folded_efficiency = 1.0;  // detector loss treated as channel loss

  void validate() const;
  double channel_transmittance() const { return channel.transmittance() * folded_efficiency; }
  // eta_d * eta_t * eta_s
  double total_gain() const;
  // Mean heterodyne outcome sqrt(eta_d eta_t eta_s) alpha'_x.
  Complex outcome_mean(int x) const;
  // E|y - mean|^2 = 1 + eta_d eta_t eta_s xi / 2 + nu_el.
  double outcome_variance() const;
};

double outcome_density(Complex y, int x, const LinkModel& link);

struct Expectations {
  double first_q = 0.0;
  double first_p = 0.0;
  double second_q = 0.0;
  double second_p = 0.0;
};

Expectations constraint_expectations(int x, const LinkModel& link);

// Bob's conditional state: a displaced thermal state with mean
// sqrt(eta_t eta_s) alpha'_x and (eta_t eta_s xi)/2 thermal photons,
// compressed onto the cutoff.
fock::FockOperator conditional_state(int x, const LinkModel& link, fock::Cutoff cutoff);

// p(x, z) with z = 0..symbols-1 in the first columns and the discard symbol
// in the last column.
struct JointDistribution {
  RMatrix p;

  int inputs() const { return static_cast<int>(p.rows()); }
  int symbols() const { return static_cast<int>(p.cols()) - 1; }
  double pass_probability() const;
  void validate(double tol = 1e-9) const;
};

JointDistribution joint_distribution(const LinkModel& link);

enum class ECConditioning {
  kPassOnly,       // H, I on the distribution conditioned on passing
  kWithDiscarded,  // discard kept as a fifth symbol
};

struct ECReport {
  double pass_probability = 0.0;
  double delta_ec = 0.0;  // bits per kept round
  double entropy_z = 0.0;
  double mutual_information = 0.0;
  double efficiency = 0.0;
};

ECReport ec_cost(const JointDistribution& dist, double efficiency,
                 ECConditioning conditioning = ECConditioning::kPassOnly);

}  // namespace tsqkd::channel
