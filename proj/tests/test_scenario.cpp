#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "tsqkd/scenario_io.hpp"
#include "tsqkd/sweep.hpp"

using namespace tsqkd;
using namespace tsqkd::scenario;

namespace {

bool mentions(const ConfigError& e, const std::string& field) {
  return std::any_of(e.issues().begin(), e.issues().end(),
                     [&](const std::string& s) { return s.rfind(field, 0) == 0; });
}

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

Scenario small(double length_km, NoiseMode source_mode, double nu_s) {
  Scenario s;
  s.amplitude = 0.6;
  s.channel = {length_km, 0.2, 0.02};
  s.source.mode = source_mode;
  s.source.noise = nu_s;
  s.detector = {NoiseMode::kIdeal, 1.0, 0.0};
  s.numerics.cutoff = 6;
  return s;
}

}  // namespace

TEST(Config, MinimalConfigGivesDefaults) {
  const Config c = parse_config("{}");
  EXPECT_EQ(to_json(c.scenario), to_json(Scenario{}));
  EXPECT_FALSE(c.sweep.has_value());
  EXPECT_DOUBLE_EQ(c.scenario.reconciliation_efficiency, 0.956);
  EXPECT_EQ(c.scenario.numerics.cutoff, 10);
}

TEST(Config, DetectorEfficiencyAboveOneNamesField) {
  try {
    parse_config(R"({"detector": {"efficiency": 1.3}})");
    FAIL() << "expected a schema error";
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_TRUE(mentions(e, "detector.efficiency"));
    EXPECT_NE(std::string(e.what()).find("1.3"), std::string::npos);
  }
}

TEST(Config, UnknownKeysAreErrors) {
  const auto issues = issues_of(R"({"channel": {"lenght_km": 5}, "extra": 1})");
  ASSERT_EQ(issues.size(), 2u);
  EXPECT_NE(std::find(issues.begin(), issues.end(), "channel.lenght_km: unknown key"), issues.end());
  EXPECT_NE(std::find(issues.begin(), issues.end(), "extra: unknown key"), issues.end());
}

TEST(Config, EveryViolationIsListed) {
  const auto issues = issues_of(R"({
    "constellation": {"amplitude": "big"},
    "source": {"mode": "sometimes"},
    "numerics": {"cutoff": 2.5, "sdp": {"gap_tol": true}}
  })");
  ASSERT_EQ(issues.size(), 4u);
  EXPECT_EQ(issues[0].rfind("constellation.amplitude", 0), 0u);
  EXPECT_EQ(issues[1].rfind("source.mode", 0), 0u);
  EXPECT_EQ(issues[2].rfind("numerics.cutoff", 0), 0u);
  EXPECT_EQ(issues[3].rfind("numerics.sdp.gap_tol", 0), 0u);
}

TEST(Config, SemanticIssuesNameFields) {
  const auto issues = issues_of(R"({"channel": {"length_km": -1, "excess_noise": -0.1},
                                    "postselection": {"radius": -2}})");
  ASSERT_EQ(issues.size(), 3u);
  EXPECT_EQ(issues[0].rfind("channel.length_km", 0), 0u);
  EXPECT_EQ(issues[1].rfind("channel.excess_noise", 0), 0u);
  EXPECT_EQ(issues[2].rfind("postselection.radius", 0), 0u);
}

TEST(Config, MalformedJsonIsReported) {
  const auto issues = issues_of("{\"channel\": ");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rfind("config: not valid JSON", 0), 0u);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, DeviceAndDirectNoiseConflict) {
  const auto issues = issues_of(R"({"source": {"noise": 0.01, "device": {"modulation_variance": 1.0}}})");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rfind("source.noise", 0), 0u);
  EXPECT_FALSE(issues_of(R"({"source": {"trusted_components": {"rin": false}}})").empty());
}

TEST(Config, RoundTrip) {
  Scenario s;
  s.amplitude = 0.65;
  s.channel = {123.5, 0.19, 0.013};
  s.source.mode = NoiseMode::kUntrusted;
  s.source.device = noise::DeviceParams{1.2, 1e-13, 1e5, 40.0, 2.0, 0.001};
  s.source.device_trust = {true, false, true};
  s.detector = {NoiseMode::kTrusted, 0.45, 0.297};
  s.postselection_radius = 0.7;
  s.reconciliation_efficiency = 0.95;
  s.numerics.cutoff = 12;
  s.numerics.epsilon = 1e-10;
  s.numerics.use_symmetry = false;
  s.numerics.seed = 42;
  s.numerics.conditioning = channel::ECConditioning::kWithDiscarded;
  s.numerics.fw_max_iterations = 77;
  const std::string text = to_json(s);
  EXPECT_EQ(to_json(parse_config(text).scenario), text);
}

TEST(Config, SweepSection) {
  const Config c = parse_config(R"({"sweep": {"axis": "L", "range": {"start": 40, "stop": 160, "step": 40}}})");
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->axis, Axis::kLength);
  EXPECT_EQ(c.sweep->values, (std::vector<double>{40, 80, 120, 160}));
  EXPECT_FALSE(issues_of(R"({"sweep": {"axis": "beta"}})").empty());
  EXPECT_FALSE(issues_of(R"({"sweep": {"values": [1], "range": {"start": 0, "stop": 1, "step": 1}}})").empty());
  EXPECT_FALSE(issues_of(R"({"sweep": {"range": {"start": 0, "stop": 1}}})").empty());
}

TEST(Config, RangeValues) {
  const auto v = range_values(0.5, 0.8, 0.05);
  ASSERT_EQ(v.size(), 7u);
  EXPECT_DOUBLE_EQ(v.front(), 0.5);
  EXPECT_DOUBLE_EQ(v.back(), 0.8);
  EXPECT_EQ(range_values(1, 1, 0.1).size(), 1u);
  EXPECT_THROW(range_values(0, 1, 0), ParameterError);
  EXPECT_THROW(range_values(1, 0, 0.1), ParameterError);
}

TEST(Resolve, UntrustedSourceNoiseJoinsExcessNoise) {
  Scenario s = small(50.0, NoiseMode::kUntrusted, 0.02);
  auto link = resolve(s);
  EXPECT_EQ(link.source.trusted_noise, 0.0);
  EXPECT_EQ(link.source.mean_photons(), 0.0);
  EXPECT_NEAR(link.channel.excess_noise, 0.04, 1e-15);

  s.source.mode = NoiseMode::kTrusted;
  link = resolve(s);
  EXPECT_EQ(link.source.trusted_noise, 0.02);
  EXPECT_NEAR(link.source.mean_photons(), 400.0, 1e-8);
  EXPECT_EQ(link.channel.excess_noise, 0.02);

  s.source.mode = NoiseMode::kIdeal;
  link = resolve(s);
  EXPECT_EQ(link.source.trusted_noise, 0.0);
  EXPECT_EQ(link.channel.excess_noise, 0.02);
}

TEST(Resolve, DeviceBudgetSplitsByTrustFlags) {
  Scenario s = small(10.0, NoiseMode::kTrusted, 0.0);
  noise::DeviceParams d{1.0, 0.0, 0.0, 30.0, 1.0, 0.001};
  s.source.device = d;
  s.source.device_trust = {true, false, true};
  const double mod = noise::modulator_noise(d);
  const double dac = noise::dac_noise(d);
  auto link = resolve(s);
  EXPECT_NEAR(link.source.trusted_noise, dac, 1e-18);
  EXPECT_NEAR(link.channel.excess_noise, 0.02 + mod, 1e-15);
  EXPECT_NEAR(s.source_noise(), mod + dac, 1e-18);

  s.source.mode = NoiseMode::kUntrusted;
  link = resolve(s);
  EXPECT_EQ(link.source.trusted_noise, 0.0);
  EXPECT_NEAR(link.channel.excess_noise, 0.02 + mod + dac, 1e-15);
}

TEST(Resolve, DetectorModes) {
  Scenario s = small(20.0, NoiseMode::kTrusted, 0.001);
  s.detector = {NoiseMode::kTrusted, 0.45, 0.297};
  auto link = resolve(s);
  EXPECT_EQ(link.detector.efficiency, 0.45);
  EXPECT_EQ(link.detector.electronic_noise, 0.297);
  EXPECT_EQ(link.folded_efficiency, 1.0);

  s.detector.mode = NoiseMode::kUntrusted;
  link = resolve(s);
  const double eta_t = channel::transmittance(20.0);
  EXPECT_TRUE(link.detector.ideal());
  EXPECT_EQ(link.folded_efficiency, 0.45);
  EXPECT_NEAR(link.channel_transmittance(), 0.45 * eta_t, 1e-15);
  EXPECT_NEAR(link.channel.excess_noise, 0.02 + 0.297 / eta_t, 1e-14);

  s.detector.mode = NoiseMode::kIdeal;
  link = resolve(s);
  EXPECT_TRUE(link.detector.ideal());
  EXPECT_EQ(link.folded_efficiency, 1.0);
}

TEST(Resolve, OptionsFollowNumerics) {
  Scenario s;
  s.numerics.cutoff = 7;
  s.numerics.epsilon = 1e-11;
  s.numerics.sdp_gap_tol = 1e-9;
  s.numerics.fw_max_iterations = 12;
  s.reconciliation_efficiency = 0.9;
  const auto o = keyrate_options(s);
  EXPECT_EQ(o.cutoff, 7);
  EXPECT_EQ(o.epsilon, 1e-11);
  EXPECT_EQ(o.frank_wolfe.sdp.gap_tol, 1e-9);
  EXPECT_EQ(o.frank_wolfe.max_iterations, 12);
  EXPECT_EQ(o.reconciliation_efficiency, 0.9);
}

TEST(Trust, ModesCoincideWithoutSourceNoise) {
  const auto trusted = run(small(40.0, NoiseMode::kTrusted, 0.0));
  const auto untrusted = run(small(40.0, NoiseMode::kUntrusted, 0.0));
  EXPECT_GT(trusted.rate, 0.0);
  EXPECT_NEAR(trusted.rate, untrusted.rate, 1e-6);
}

TEST(Trust, TrustedAtLeastUntrusted) {
  for (double nu : {0.005, 0.02}) {
    const auto trusted = run(small(30.0, NoiseMode::kTrusted, nu));
    const auto untrusted = run(small(30.0, NoiseMode::kUntrusted, nu));
    EXPECT_GE(trusted.rate, untrusted.rate) << "nu_s " << nu;
    EXPECT_GT(trusted.rate, untrusted.rate) << "nu_s " << nu;
  }
}

TEST(Sweep, AxisNames) {
  for (Axis a : {Axis::kLength, Axis::kAmplitude, Axis::kPostselection, Axis::kSourceNoise, Axis::kExcessNoise}) {
    EXPECT_EQ(axis_from_string(to_string(a)), a);
  }
  EXPECT_THROW(axis_from_string("beta"), ParameterError);
  Scenario s;
  EXPECT_EQ(axis_value(with_axis(s, Axis::kAmplitude, 0.7), Axis::kAmplitude), 0.7);
  EXPECT_EQ(axis_value(with_axis(s, Axis::kPostselection, 0.3), Axis::kPostselection), 0.3);
}

TEST(Sweep, RejectsEmptyOrInvalidValues) {
  SweepSpec spec;
  spec.base = small(10.0, NoiseMode::kTrusted, 0.01);
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values = {10.0, -5.0};
  try {
    spec.validate();
    FAIL() << "expected a sweep error";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "sweep.values[1]"));
  }
}

TEST(Sweep, RowsInAxisOrderAndDeterministic) {
  SweepSpec spec;
  spec.axis = Axis::kLength;
  spec.values = {60.0, 20.0, 40.0};
  spec.base = small(0.0, NoiseMode::kTrusted, 0.01);
  spec.base.numerics.cutoff = 5;
  const auto serial = run_sweep(spec, 1);
  const auto parallel = run_sweep(spec, 3);
  ASSERT_EQ(serial.size(), 3u);
  EXPECT_EQ(serial[0].value, 20.0);
  EXPECT_EQ(serial[1].value, 40.0);
  EXPECT_EQ(serial[2].value, 60.0);
  for (const auto& p : serial) ASSERT_TRUE(p.ok()) << p.error;
  EXPECT_GT(serial[0].report->rate, serial[2].report->rate);

  std::ostringstream a, b;
  write_csv(a, spec.axis, serial, {false});
  write_csv(b, spec.axis, parallel, {false});
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, CsvLayout) {
  SweepPoint failed;
  failed.value = 12.5;
  failed.scenario = small(12.5, NoiseMode::kTrusted, 0.01);
  failed.error = "solver broke, badly\nreally";
  std::ostringstream out;
  write_csv(out, Axis::kLength, {failed}, {false});
  std::istringstream lines(out.str());
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(header.rfind("axis,value,rate,lower_bound_D,delta_ec,p_pass,N_c,gap,runtime_s,seed", 0), 0u);
  const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(count(row), count(header));
  EXPECT_NE(row.find("failed: solver broke; badly;really"), std::string::npos);
  EXPECT_EQ(row.rfind("L,12.5,,,,,6,,0,0,failed", 0), 0u);
  EXPECT_NE(row.find(version_string()), std::string::npos);
}

TEST(Sweep, DefaultWorkersFromEnvironment) {
  ::setenv("TSQKD_WORKERS", "3", 1);
  EXPECT_EQ(default_workers(), 3);
  ::setenv("TSQKD_WORKERS", "zero", 1);
  EXPECT_EQ(default_workers(), 1);
  ::unsetenv("TSQKD_WORKERS");
  EXPECT_EQ(default_workers(), 1);
}
