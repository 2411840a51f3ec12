#include "tsqkd/noise_budget.hpp"

#include <cmath>
#include <numbers>

#include "tsqkd/types.hpp"

namespace tsqkd::noise {

void DeviceParams::validate() const {
  if (modulation_variance < 0 || rin_per_hz < 0 || linewidth_hz < 0 ||
      extinction_ratio_db < 0 || dac_deviation < 0) {
    throw ParameterError("device parameters must be nonnegative");
  }
  if (!(dac_voltage > 0)) throw ParameterError("DAC signal voltage must be positive");
}

double rin_noise(const DeviceParams& params) {
  const double product = params.rin_per_hz * params.linewidth_hz;
  if (params.modulation_variance < 0 || !(product >= 0)) {
    throw ParameterError("RIN noise needs V_M >= 0 and RIN * linewidth >= 0");
  }
  return params.modulation_variance * std::sqrt(product);
}

double modulator_noise(const DeviceParams& params) {
  if (params.modulation_variance < 0 || params.extinction_ratio_db < 0) {
    throw ParameterError("modulator noise needs V_M >= 0 and d_dB >= 0");
  }
  return params.modulation_variance * std::pow(10.0, -params.extinction_ratio_db / 10.0);
}

double dac_noise(const DeviceParams& params) {
  if (!(params.dac_voltage > 0)) throw ParameterError("DAC signal voltage must be positive");
  if (params.modulation_variance < 0 || params.dac_deviation < 0) {
    throw ParameterError("DAC noise needs V_M >= 0 and dU >= 0");
  }
  const double x = std::numbers::pi * params.dac_deviation / params.dac_voltage;
  const double inner = x + 0.5 * x * x;
  return params.modulation_variance * inner * inner;
}

double NoiseBudget::trusted_part() const {
  return (trusted.rin ? rin : 0.0) + (trusted.modulator ? modulator : 0.0) +
         (trusted.dac ? dac : 0.0);
}

NoiseBudget& NoiseBudget::operator+=(const NoiseBudget& other) {
  rin += other.rin;
  modulator += other.modulator;
  dac += other.dac;
  return *this;
}

NoiseBudget assemble_budget(const DeviceParams& params, TrustFlags flags) {
  params.validate();
  return {rin_noise(params), modulator_noise(params), dac_noise(params), flags};
}

double thermal_photon_number(double trusted_noise, double coupling_transmittance,
                             double shot_noise) {
  if (!(coupling_transmittance > 0.0 && coupling_transmittance < 1.0)) {
    throw ParameterError("source coupling transmittance must lie in (0, 1)");
  }
  if (!(trusted_noise >= 0.0)) throw ParameterError("trusted source noise must be >= 0");
  if (!(shot_noise > 0.0)) throw ParameterError("shot-noise variance must be positive");
  return trusted_noise / ((1.0 - coupling_transmittance) * shot_noise);
}

void TrustedSourceModel::validate() const { (void)mean_photons(); }

}  // namespace tsqkd::noise
