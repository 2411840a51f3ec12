#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsqkd/scenario.hpp"

// Parameter sweeps over one scenario axis and their CSV datasets.
namespace tsqkd::scenario {

struct SweepPoint {
  double value = 0.0;
  Scenario scenario;
  std::optional<keyrate::KeyRateReport> report;  // empty when the point failed
  std::string error;
  double runtime_s = 0.0;

  bool ok() const { return report.has_value(); }
};

using SweepProgress = std::function<void(const SweepPoint&, std::size_t done, std::size_t total)>;

// Runs every point on up to `workers` threads. Points are returned sorted
// by axis value whatever order they finish in; a failing point is recorded
// and the sweep continues.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, int workers = 1, const SweepProgress& progress = {});

// Evaluates a single scenario with timing and error capture.
SweepPoint run_point(const Scenario& s, double value);

// Default worker count: TSQKD_WORKERS if set to a positive integer, else 1.
int default_workers();

struct CsvOptions {
  // runtime_s is the only column that varies between identical runs; with
  // timing off it is written as 0 and datasets are byte-identical.
  bool timing = true;
};

// Frozen column list, comma separated.
const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, Axis axis, const SweepPoint& point, const CsvOptions& options = {});
void write_csv(std::ostream& out, Axis axis, const std::vector<SweepPoint>& points, const CsvOptions& options = {});

}  // namespace tsqkd::scenario
