#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prds/confidence.hpp"
#include "prds/reduct.hpp"
#include "prds/table.hpp"

#include <json.hpp>

namespace prds {

struct EvalMode {
  QualityMode kind = QualityMode::kExact;
  std::uint64_t sample_size = 10000;  // for sampled evaluation
};

// Grid of (run length, tolerance) cells with repeated seeded runs per cell.
struct ExperimentPlan {
  std::vector<std::uint64_t> run_length_grid;
  std::vector<double> tolerance_grid;
  std::uint32_t runs = 1;
  std::uint64_t base_seed = 0;  // run r uses seed base_seed + r
  EvalMode eval{};
  ConfidenceParams confidence{};
  AttrStrategy strategy = AttrStrategy::kRandom;
  unsigned jobs = 1;
};

struct RunRecord {
  std::uint64_t run_length = 0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string message;
  double quality = 0.0;
  std::uint64_t draws = 0;
  std::uint32_t reduct_size = 0;
  double time_s = 0.0;
  std::string terminal;
  bool trivial = false;
};

struct ReportRow {
  std::uint64_t run_length = 0;
  double tolerance = 0.0;
  std::uint32_t runs = 0;  // successful runs aggregated
  double dq_mean = 0.0, dq_min = 0.0, dq_max = 0.0;
  double draws_mean = 0.0;
  double redlen_mean = 0.0;
  double time_mean_s = 0.0;
  double bound = 0.0;  // confidence lower bound for this run length
  double frac_above_bound = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<RunRecord> records;  // grouped by cell, runs in order
};

ExperimentReport run_experiment(const DecisionTable& table, const ExperimentPlan& plan);

// CSV: fixed header
// I,IR,runs,dq_mean,dq_min,dq_max,draws_mean,redlen_mean,time_mean_s,bound,frac_above_bound
void write_report_csv(const ExperimentReport& report, std::ostream& out);

// Full per-run detail; aggregates are recomputable from the records.
nlohmann::json report_to_json(const ExperimentReport& report, const ExperimentPlan& plan);

}  // namespace prds
