#include "prds/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>

#include "prds/error.hpp"
#include "prds/quality.hpp"
#include "prds/regions.hpp"

namespace prds {

namespace {

RunRecord execute_run(const DecisionTable& table, const Partition& part, const RegionIndex& reg,
                      const ExperimentPlan& plan, std::uint64_t run_length, double tolerance,
                      std::uint64_t seed) {
  RunRecord rec;
  rec.run_length = run_length;
  rec.tolerance = tolerance;
  rec.seed = seed;
  try {
    ReductConfig config;
    config.run_length = run_length;
    config.tolerance = tolerance;
    config.confidence = plan.confidence;
    config.seed = seed;
    config.strategy = plan.strategy;

    const auto start = std::chrono::steady_clock::now();
    auto result = find_reduct(table, config);
    const auto stop = std::chrono::steady_clock::now();
    rec.time_s = std::chrono::duration<double>(stop - start).count();
    rec.draws = result.draws;
    rec.reduct_size = static_cast<std::uint32_t>(result.attributes.size());
    rec.terminal = result.terminal == Terminal::kRunComplete ? "run-complete" : "exhausted-universe";
    rec.trivial = result.trivial;

    QualityEstimate quality;
    if (plan.eval.kind == QualityMode::kExact) {
      quality = quality_exact(table, part, reg, result.attributes);
    } else {
      quality = quality_sampled(table, part, reg, result.attributes, plan.eval.sample_size,
                                mix_seed(seed, 1000));
    }
    rec.quality = quality.value;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.message = e.what();
  }
  return rec;
}

}  // namespace

ExperimentReport run_experiment(const DecisionTable& table, const ExperimentPlan& plan) {
  if (plan.run_length_grid.empty() || plan.tolerance_grid.empty()) {
    throw ConfigError("experiment grids must be non-empty");
  }
  if (plan.runs < 1) throw ConfigError("experiment needs at least one run per cell");

  const auto conds = table.schema().condition_indices();
  const auto part = partition_by(table, conds);
  const auto reg = label_regions(table, part);

  struct Task {
    std::uint64_t run_length;
    double tolerance;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (auto I : plan.run_length_grid) {
    for (auto ir : plan.tolerance_grid) {
      for (std::uint32_t r = 0; r < plan.runs; ++r) {
        tasks.push_back({I, ir, plan.base_seed + r});
      }
    }
  }

  std::vector<RunRecord> records(tasks.size());
  const unsigned jobs = std::max(1u, plan.jobs);
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      records[t] = execute_run(table, part, reg, plan, tasks[t].run_length, tasks[t].tolerance,
                               tasks[t].seed);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) break;
          records[t] = execute_run(table, part, reg, plan, tasks[t].run_length,
                                   tasks[t].tolerance, tasks[t].seed);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  ExperimentReport report;
  report.records = records;
  std::size_t offset = 0;
  for (auto I : plan.run_length_grid) {
    for (auto ir : plan.tolerance_grid) {
      ReportRow row;
      row.run_length = I;
      row.tolerance = ir;
      row.bound = quality_lower_bound(I, plan.confidence, /*allow_short_run=*/true);
      row.dq_min = 1.0;
      std::uint64_t above = 0;
      for (std::uint32_t r = 0; r < plan.runs; ++r) {
        const auto& rec = records[offset + r];
        if (rec.failed) continue;
        ++row.runs;
        row.dq_mean += rec.quality;
        row.dq_min = std::min(row.dq_min, rec.quality);
        row.dq_max = std::max(row.dq_max, rec.quality);
        row.draws_mean += static_cast<double>(rec.draws);
        row.redlen_mean += rec.reduct_size;
        row.time_mean_s += rec.time_s;
        if (rec.quality >= row.bound) ++above;
      }
      if (row.runs > 0) {
        row.dq_mean /= row.runs;
        row.draws_mean /= row.runs;
        row.redlen_mean /= row.runs;
        row.time_mean_s /= row.runs;
        row.frac_above_bound = static_cast<double>(above) / row.runs;
      } else {
        row.dq_min = 0.0;
      }
      report.rows.push_back(row);
      offset += plan.runs;
    }
  }
  return report;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "I,IR,runs,dq_mean,dq_min,dq_max,draws_mean,redlen_mean,time_mean_s,bound,"
         "frac_above_bound\n";
  const auto prev = out.precision(10);
  for (const auto& row : report.rows) {
    out << row.run_length << ',' << row.tolerance << ',' << row.runs << ',' << row.dq_mean << ','
        << row.dq_min << ',' << row.dq_max << ',' << row.draws_mean << ',' << row.redlen_mean
        << ',' << row.time_mean_s << ',' << row.bound << ',' << row.frac_above_bound << '\n';
  }
  out.precision(prev);
}

nlohmann::json report_to_json(const ExperimentReport& report, const ExperimentPlan& plan) {
  nlohmann::json j;
  j["plan"] = {
      {"run_lengths", plan.run_length_grid},
      {"tolerances", plan.tolerance_grid},
      {"runs", plan.runs},
      {"base_seed", plan.base_seed},
      {"evaluation", plan.eval.kind == QualityMode::kExact ? "exact" : "sampled"},
      {"sample_size", plan.eval.sample_size},
      {"alpha", plan.confidence.alpha},
      {"convention",
       plan.confidence.convention == QuantileConvention::kTwoSided ? "two-sided" : "one-sided"},
      {"strategy", plan.strategy == AttrStrategy::kMaxCover ? "max-cover" : "random"},
  };
  nlohmann::json cells = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& row : report.rows) {
    nlohmann::json cell;
    cell["I"] = row.run_length;
    cell["IR"] = row.tolerance;
    cell["bound"] = row.bound;
    nlohmann::json runs = nlohmann::json::array();
    for (std::uint32_t r = 0; r < plan.runs; ++r) {
      const auto& rec = report.records[offset + r];
      nlohmann::json run;
      run["seed"] = rec.seed;
      if (rec.failed) {
        run["error"] = rec.message;
      } else {
        run["dq"] = rec.quality;
        run["draws"] = rec.draws;
        run["reduct_len"] = rec.reduct_size;
        run["time_s"] = rec.time_s;
        run["terminal"] = rec.terminal;
        run["trivial"] = rec.trivial;
      }
      runs.push_back(std::move(run));
    }
    cell["runs"] = std::move(runs);
    cell["aggregates"] = {
        {"runs", row.runs},
        {"dq_mean", row.dq_mean},
        {"dq_min", row.dq_min},
        {"dq_max", row.dq_max},
        {"draws_mean", row.draws_mean},
        {"redlen_mean", row.redlen_mean},
        {"time_mean_s", row.time_mean_s},
        {"frac_above_bound", row.frac_above_bound},
    };
    cells.push_back(std::move(cell));
    offset += plan.runs;
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace prds
