#include "tsqkd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "tsqkd/scenario_io.hpp"

namespace tsqkd::scenario {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Keeps a diagnostic on one CSV field.
std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return text;
}

}  // namespace

SweepPoint run_point(const Scenario& s, double value) {
  SweepPoint point;
  point.value = value;
  point.scenario = s;
  const auto start = std::chrono::steady_clock::now();
  try {
    point.report = run(s);
  } catch (const std::exception& e) {
    point.error = e.what();
  }
  point.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return point;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, int workers, const SweepProgress& progress) {
  spec.validate();
  const std::size_t total = spec.values.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.values[a] < spec.values[b]; });

  std::vector<SweepPoint> points(total);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex report_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      const double value = spec.values[order[i]];
      points[i] = run_point(with_axis(spec.base, spec.axis, value), value);
      std::lock_guard<std::mutex> lock(report_mutex);
      ++done;
      if (progress) progress(points[i], done, total);
    }
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return points;
}

int default_workers() {
  if (const char* env = std::getenv("TSQKD_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 1024) return static_cast<int>(v);
  }
  return 1;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "axis", "value", "rate", "lower_bound_D", "delta_ec", "p_pass", "N_c", "gap", "runtime_s", "seed",
      "status", "raw_rate", "primal_f", "iterations", "converged", "alpha", "length_km",
      "attenuation_db_per_km", "xi", "source_mode", "nu_s", "detector_mode", "eta_d", "nu_el", "delta_a",
      "beta", "epsilon", "sdp_feasibility_tol", "sdp_gap_tol", "fw_improvement_tol",
      "fw_certified_gap_tol", "symmetry", "version"};
  return columns;
}

void write_csv_header(std::ostream& out) {
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, Axis axis, const SweepPoint& point, const CsvOptions& options) {
  const Scenario& s = point.scenario;
  const auto& r = point.report;
  const auto& n = s.numerics;
  std::vector<std::string> f;
  f.push_back(to_string(axis));
  f.push_back(num(point.value));
  f.push_back(r ? num(r->rate) : "");
  f.push_back(r ? num(r->lower_bound) : "");
  f.push_back(r ? num(r->delta_ec) : "");
  f.push_back(r ? num(r->pass_probability) : "");
  f.push_back(std::to_string(n.cutoff));
  f.push_back(r ? num(r->gap) : "");
  f.push_back(options.timing ? num(point.runtime_s) : "0");
  f.push_back(std::to_string(n.seed));
  f.push_back(r ? "ok" : "failed: " + sanitize(point.error));
  f.push_back(r ? num(r->raw_rate) : "");
  f.push_back(r ? num(r->primal_f) : "");
  f.push_back(r ? std::to_string(r->iterations) : "");
  f.push_back(r ? (r->converged ? "1" : "0") : "");
  f.push_back(num(s.amplitude));
  f.push_back(num(s.channel.length_km));
  f.push_back(num(s.channel.attenuation_db_per_km));
  f.push_back(num(s.channel.excess_noise));
  f.push_back(to_string(s.source.mode));
  f.push_back(s.source.device ? num(s.source_noise()) : num(s.source.noise));
  f.push_back(to_string(s.detector.mode));
  f.push_back(num(s.detector.efficiency));
  f.push_back(num(s.detector.electronic_noise));
  f.push_back(num(s.postselection_radius));
  f.push_back(num(s.reconciliation_efficiency));
  f.push_back(num(n.epsilon));
  f.push_back(num(n.sdp_feasibility_tol));
  f.push_back(num(n.sdp_gap_tol));
  f.push_back(num(n.fw_improvement_tol));
  f.push_back(num(n.fw_certified_gap_tol));
  f.push_back(n.use_symmetry ? "1" : "0");
  f.push_back(version_string());
  for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
  out << '\n';
}

void write_csv(std::ostream& out, Axis axis, const std::vector<SweepPoint>& points, const CsvOptions& options) {
  write_csv_header(out);
  for (const auto& p : points) write_csv_row(out, axis, p, options);
}

}  // namespace tsqkd::scenario
