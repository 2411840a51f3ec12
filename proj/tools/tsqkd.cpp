// tsqkd: run, sweep, validate and convergence-check key-rate scenarios.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tsqkd/scenario_io.hpp"
#include "tsqkd/sweep.hpp"

using namespace tsqkd;
using namespace tsqkd::scenario;

namespace {

constexpr int kConfigFailure = 1;
constexpr int kRunFailure = 2;
constexpr int kPartialFailure = 3;

void print_report(std::ostream& out, const Scenario& s, const keyrate::KeyRateReport& r) {
  char line[160];
  auto row = [&](const char* key, double v) {
    std::snprintf(line, sizeof line, "%-22s %.10g\n", key, v);
    out << line;
  };
  out << "source_mode            " << to_string(s.source.mode) << "\n";
  out << "detector_mode          " << to_string(s.detector.mode) << "\n";
  row("length_km", s.channel.length_km);
  row("alpha", s.amplitude);
  row("rate", r.rate);
  row("raw_rate", r.raw_rate);
  row("lower_bound_D", r.lower_bound);
  row("primal_f", r.primal_f);
  row("gap", r.gap);
  row("delta_ec", r.delta_ec);
  row("p_pass", r.pass_probability);
  row("epsilon_correction", r.correction);
  row("completeness_deficit", r.completeness_deficit);
  row("N_c", r.cutoff);
  row("iterations", r.iterations);
  out << "converged              " << (r.converged ? "yes" : "no") << "\n";
}

void write_trace(const std::string& path, const keyrate::KeyRateReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  out << "iteration,f,step,fw_gap,bound,sdp_iterations,sdp_status\n";
  out.precision(12);
  for (const auto& t : r.trace) {
    out << t.iteration << ',' << t.f << ',' << t.step << ',' << t.gap << ',' << t.bound << ','
        << t.sdp_iterations << ',' << sdp::to_string(t.sdp_status) << '\n';
  }
}

// "start:stop:step"
std::vector<double> parse_range(const std::string& text) {
  std::istringstream in(text);
  double start, stop, step;
  char c1, c2;
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw ConfigError({"--range: expected start:stop:step (got '" + text + "')"});
  }
  return range_values(start, stop, step);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key rates of discrete-modulated CV-QKD with trusted source and detector noise"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  int cutoff = 0;

  auto* run_cmd = app.add_subcommand("run", "Compute the key rate of one scenario");
  run_cmd->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--cutoff", cutoff, "Override the Fock cutoff N_c")->check(CLI::Range(1, 40));
  bool as_csv = false;
  std::string trace_path;
  run_cmd->add_flag("--csv", as_csv, "Print the result as a CSV header and row");
  run_cmd->add_option("--trace", trace_path, "Write the Frank-Wolfe iteration trace to this CSV file");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one axis and write a CSV dataset");
  sweep_cmd->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  std::string axis_name, out_path, values_text, range_text;
  int workers = default_workers();
  std::uint64_t seed = 0;
  bool no_timing = false, quiet = false;
  sweep_cmd->add_option("--axis", axis_name, "L, alpha, delta_a, nu_s or xi (default: config sweep.axis)");
  auto* values_opt = sweep_cmd->add_option("--values", values_text, "Comma separated axis values");
  sweep_cmd->add_option("--range", range_text, "start:stop:step, stop inclusive")->excludes(values_opt);
  sweep_cmd->add_option("--out", out_path, "Output CSV path (default: stdout)");
  sweep_cmd->add_option("--workers", workers, "Parallel points (default: TSQKD_WORKERS or 1)")
      ->check(CLI::Range(1, 1023));
  auto* seed_opt = sweep_cmd->add_option("--seed", seed, "Seed recorded with every row (default: config)");
  sweep_cmd->add_option("--cutoff", cutoff, "Override the Fock cutoff N_c")->check(CLI::Range(1, 40));
  sweep_cmd->add_flag("--no-timing", no_timing, "Write runtime_s as 0 for byte-identical reruns");
  sweep_cmd->add_flag("--quiet", quiet, "No progress lines on stderr");

  auto* validate_cmd = app.add_subcommand("validate", "Check a config and print the resolved scenario");
  validate_cmd->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);

  auto* conv_cmd = app.add_subcommand("convergence", "Compare the rate at N_c and N_c + 2");
  conv_cmd->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  conv_cmd->add_option("--cutoff", cutoff, "Base cutoff (default: config)")->check(CLI::Range(1, 38));

  CLI11_PARSE(app, argc, argv);

  Config config;
  try {
    config = load_config(config_path);
    if (cutoff > 0) config.scenario.numerics.cutoff = cutoff;
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kConfigFailure;
  }
  Scenario& s = config.scenario;

  try {
    if (*validate_cmd) {
      const auto link = resolve(s);
      std::cout << to_json(s) << "\n";
      std::printf("resolved: xi %.10g, trusted nu_s %.10g (n_s %.10g), eta_t %.10g, eta_d %.10g, nu_el %.10g, "
                  "folded eta %.10g\n",
                  link.channel.excess_noise, link.source.trusted_noise, link.source.mean_photons(),
                  link.channel.transmittance(), link.detector.efficiency, link.detector.electronic_noise,
                  link.folded_efficiency);
      if (config.sweep) {
        std::printf("sweep: axis %s, %zu values\n", config.sweep->axis ? to_string(*config.sweep->axis) : "(unset)",
                    config.sweep->values.size());
      }
      return 0;
    }

    if (*run_cmd) {
      const SweepPoint point = run_point(s, s.channel.length_km);
      if (!point.ok()) {
        std::cerr << "run failed: " << point.error << "\n";
        return kRunFailure;
      }
      if (!trace_path.empty()) write_trace(trace_path, *point.report);
      if (as_csv) write_csv(std::cout, Axis::kLength, {point});
      else print_report(std::cout, s, *point.report);
      return 0;
    }

    if (*conv_cmd) {
      const int base = s.numerics.cutoff;
      const auto low = run(s);
      Scenario higher = s;
      higher.numerics.cutoff = base + 2;
      const auto high = run(higher);
      std::printf("N_c      rate              lower_bound_D     gap\n");
      std::printf("%-8d %-17.10g %-17.10g %.3g\n", base, low.rate, low.lower_bound, low.gap);
      std::printf("%-8d %-17.10g %-17.10g %.3g\n", base + 2, high.rate, high.lower_bound, high.gap);
      const double drift = high.rate - low.rate;
      std::printf("drift    %.6g absolute, %.6g relative\n", drift,
                  low.rate > 0 ? drift / low.rate : (drift == 0 ? 0.0 : INFINITY));
      return 0;
    }

    // sweep
    SweepSpec spec;
    spec.base = s;
    if (*seed_opt) spec.base.numerics.seed = seed;
    if (!axis_name.empty()) spec.axis = axis_from_string(axis_name);
    else if (config.sweep && config.sweep->axis) spec.axis = *config.sweep->axis;
    else throw ConfigError({"sweep.axis: give --axis or a sweep.axis entry in the config"});
    if (!values_text.empty()) {
      for (const auto& item : CLI::detail::split(values_text, ',')) spec.values.push_back(std::stod(item));
    } else if (!range_text.empty()) {
      spec.values = parse_range(range_text);
    } else if (config.sweep) {
      spec.values = config.sweep->values;
    }
    spec.validate();

    const auto points = run_sweep(spec, workers, [&](const SweepPoint& p, std::size_t done, std::size_t total) {
      if (quiet) return;
      if (p.ok()) {
        std::fprintf(stderr, "[%zu/%zu] %s = %g: rate %.6g (%.1f s)\n", done, total, to_string(spec.axis), p.value,
                     p.report->rate, p.runtime_s);
      } else {
        std::fprintf(stderr, "[%zu/%zu] %s = %g: FAILED %s\n", done, total, to_string(spec.axis), p.value,
                     p.error.c_str());
      }
    });
    const CsvOptions options{!no_timing};
    if (out_path.empty()) {
      write_csv(std::cout, spec.axis, points, options);
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
      write_csv(out, spec.axis, points, options);
    }
    for (const auto& p : points)
      if (!p.ok()) return kPartialFailure;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailure;
  }
}
