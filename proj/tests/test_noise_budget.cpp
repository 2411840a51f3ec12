#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tsqkd/noise_budget.hpp"
#include "tsqkd/types.hpp"

using namespace tsqkd;
using namespace tsqkd::noise;

TEST(NoiseBudget, RinNoise) {
  DeviceParams p;
  p.modulation_variance = 1.0;
  EXPECT_EQ(rin_noise(p), 0.0);
  p.rin_per_hz = 1e-10;
  p.linewidth_hz = 1e4;
  EXPECT_NEAR(rin_noise(p), 1e-3, 1e-18);
  p.modulation_variance = 0.72;
  p.rin_per_hz = 1e-14;
  p.linewidth_hz = 1e4;
  EXPECT_NEAR(rin_noise(p), 0.72 * 1e-5, 1e-20);
}

TEST(NoiseBudget, ModulatorNoise) {
  DeviceParams p;
  p.modulation_variance = 1.0;
  p.extinction_ratio_db = 400.0;
  EXPECT_LT(modulator_noise(p), 1e-39);
  p.extinction_ratio_db = 30.0;
  EXPECT_NEAR(modulator_noise(p), 1e-3, 1e-17);
  p.modulation_variance = 0.72;
  p.extinction_ratio_db = 25.0;
  EXPECT_NEAR(modulator_noise(p), 0.72 * std::pow(10.0, -2.5), 1e-17);
}

TEST(NoiseBudget, DacNoise) {
  DeviceParams p;
  p.modulation_variance = 1.0;
  EXPECT_EQ(dac_noise(p), 0.0);
  p.dac_deviation = 0.01;
  const long double x = 3.14159265358979323846264338327950288L * 0.01L;
  const long double expected = (x + x * x / 2) * (x + x * x / 2);
  EXPECT_NEAR(dac_noise(p), static_cast<double>(expected), 1e-17);
  const double once = dac_noise(p);
  p.modulation_variance = 2.0;
  EXPECT_NEAR(dac_noise(p), 2.0 * once, 1e-17);
  p.dac_voltage = 0.0;
  EXPECT_THROW(dac_noise(p), ParameterError);
}

TEST(NoiseBudget, ComponentsAreMonotone) {
  DeviceParams p{0.7, 1e-12, 1e5, 20.0, 1.0, 0.005};
  const auto base = assemble_budget(p);
  DeviceParams q = p;
  q.rin_per_hz *= 2;
  q.linewidth_hz *= 2;
  q.dac_deviation *= 2;
  q.modulation_variance *= 2;
  const auto bigger = assemble_budget(q);
  EXPECT_GT(bigger.rin, base.rin);
  EXPECT_GT(bigger.dac, base.dac);
  EXPECT_GT(bigger.modulator, base.modulator);
  // A larger extinction ratio suppresses more.
  q = p;
  q.extinction_ratio_db = 30.0;
  EXPECT_LT(modulator_noise(q), base.modulator);
}

TEST(NoiseBudget, AssembleAndPartition) {
  DeviceParams zero;
  EXPECT_EQ(assemble_budget(zero).total(), 0.0);

  NoiseBudget b{1e-3, 1e-3, 1e-3, {}};
  EXPECT_NEAR(b.total(), 3e-3, 1e-18);
  b.trusted.modulator = false;
  EXPECT_NEAR(b.trusted_part(), 2e-3, 1e-18);
  EXPECT_NEAR(b.untrusted_part(), 1e-3, 1e-18);

  NoiseBudget other{2e-3, 0.0, 5e-4, {}};
  b += other;
  EXPECT_NEAR(b.total(), 5.5e-3, 1e-18);

  DeviceParams bad;
  bad.rin_per_hz = -1.0;
  EXPECT_THROW(assemble_budget(bad), ParameterError);
}

TEST(NoiseBudget, ThermalPhotonNumber) {
  EXPECT_EQ(thermal_photon_number(0.0), 0.0);
  EXPECT_NEAR(thermal_photon_number(0.01), 200.0, 1e-9);
  EXPECT_NEAR(thermal_photon_number(0.02), 400.0, 1e-9);
  for (double nu : {1e-3, 0.013, 0.5}) {
    const double n = thermal_photon_number(nu, 0.9999, 0.5);
    EXPECT_NEAR(n * (1 - 0.9999) * 0.5, nu, 1e-15);
  }
  EXPECT_THROW(thermal_photon_number(0.01, 1.0), ParameterError);
  EXPECT_THROW(thermal_photon_number(-0.01), ParameterError);
  TrustedSourceModel m{0.01};
  EXPECT_NEAR(m.mean_photons(), 200.0, 1e-9);
}
