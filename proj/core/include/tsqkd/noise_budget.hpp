#pragma once

// Source excess-noise budget: laser relative intensity noise, modulator
// extinction, and DAC conversion error, plus the equivalent thermal photon
// number used to model the trusted part of the source noise.
namespace tsqkd::noise {

// Vacuum quadrature variance. All noise variances are in shot-noise units.
inline constexpr double kShotNoiseVariance = 0.5;

// Default transmittance of the fictitious beam splitter that injects the
// trusted thermal noise.
inline constexpr double kSourceCouplingTransmittance = 0.9999;

struct DeviceParams {
  double modulation_variance = 0.0;   // V_M, SNU
  double rin_per_hz = 0.0;            // relative intensity noise, 1/Hz
  double linewidth_hz = 0.0;          // laser linewidth
  double extinction_ratio_db = 0.0;   // modulator extinction ratio
  double dac_voltage = 1.0;           // U_DAC, volts
  double dac_deviation = 0.0;         // delta U_DAC, volts

  void validate() const;
};

double rin_noise(const DeviceParams& params);
double modulator_noise(const DeviceParams& params);

// Upper bound V_M [pi r + (pi r)^2 / 2]^2, r = dU/U.
double dac_noise(const DeviceParams& params);

struct TrustFlags {
  bool rin = true;
  bool modulator = true;
  bool dac = true;
};

struct NoiseBudget {
  double rin = 0.0;
  double modulator = 0.0;
  double dac = 0.0;
  TrustFlags trusted;

  double total() const { return rin + modulator + dac; }
  double trusted_part() const;
  double untrusted_part() const { return total() - trusted_part(); }

  NoiseBudget& operator+=(const NoiseBudget& other);
};

NoiseBudget assemble_budget(const DeviceParams& params, TrustFlags flags = {});

// n_s = nu_s / ((1 - eta_s) N0).
double thermal_photon_number(double trusted_noise,
                             double coupling_transmittance = kSourceCouplingTransmittance,
                             double shot_noise = kShotNoiseVariance);

struct TrustedSourceModel {
  double trusted_noise = 0.0;  // nu_s
  double coupling_transmittance = kSourceCouplingTransmittance;
  double shot_noise = kShotNoiseVariance;

  double mean_photons() const {
    return thermal_photon_number(trusted_noise, coupling_transmittance, shot_noise);
  }
  void validate() const;
};

}  // namespace tsqkd::noise
