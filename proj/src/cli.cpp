#include "prds/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "prds/confidence.hpp"
#include "prds/discretize.hpp"
#include "prds/error.hpp"
#include "prds/experiment.hpp"
#include "prds/quality.hpp"
#include "prds/reduct.hpp"
#include "prds/regions.hpp"
#include "prds/reshape.hpp"
#include "prds/table.hpp"

namespace prds {

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

// Attribute selector: a name from the schema, or a decimal 0-based index.
std::uint32_t resolve_attribute(const Schema& schema, const std::string& token) {
  if (auto idx = schema.find_attribute(token)) return *idx;
  if (!token.empty() &&
      std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const auto idx = static_cast<std::uint32_t>(std::stoul(token));
    if (idx < schema.attribute_count()) return idx;
  }
  throw ConfigError("unknown attribute: " + token);
}

std::vector<std::uint32_t> resolve_attributes(const Schema& schema, const std::string& list) {
  std::vector<std::uint32_t> out;
  for (const auto& token : split_list(list)) {
    const auto attr = resolve_attribute(schema, token);
    if (attr == schema.decision_index()) {
      throw ConfigError("the decision attribute cannot be evaluated: " + token);
    }
    out.push_back(attr);
  }
  return out;
}

json attribute_names(const Schema& schema, const std::vector<std::uint32_t>& attrs) {
  json names = json::array();
  for (auto a : attrs) names.push_back(schema.attribute_name(a));
  return names;
}

ConfidenceParams make_confidence(double alpha, const std::string& convention) {
  ConfidenceParams params;
  params.alpha = alpha;
  if (convention == "one-sided") {
    params.convention = QuantileConvention::kOneSided;
  } else if (convention == "two-sided") {
    params.convention = QuantileConvention::kTwoSided;
  } else {
    throw ConfigError("convention must be one-sided or two-sided");
  }
  return params;
}

AttrStrategy make_strategy(const std::string& name) {
  if (name == "random") return AttrStrategy::kRandom;
  if (name == "max-cover") return AttrStrategy::kMaxCover;
  throw ConfigError("strategy must be random or max-cover");
}

EvalMode parse_eval(const std::string& text) {
  EvalMode mode;
  if (text == "exact") {
    mode.kind = QualityMode::kExact;
    return mode;
  }
  if (text.rfind("sampled:", 0) == 0) {
    mode.kind = QualityMode::kSampled;
    mode.sample_size = std::stoull(text.substr(8));
    if (mode.sample_size < 2) throw ConfigError("sample size must be at least 2");
    return mode;
  }
  if (text == "sampled") {
    mode.kind = QualityMode::kSampled;
    return mode;
  }
  throw ConfigError("evaluation mode must be exact, sampled or sampled:<m>");
}

unsigned default_jobs() {
  if (const char* env = std::getenv("PRDS_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

void emit(std::ostream& out, const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file: " + out_path);
    f << j.dump(2) << '\n';
  }
}

struct IngestFlags {
  std::string input;
  std::string delimiter = ",";
  bool no_header = false;
  std::string decision;
  std::string merge_labels;
  std::string continuous;

  IngestOptions options() const {
    IngestOptions opt;
    if (delimiter == "\\t" || delimiter == "tab") {
      opt.delimiter = '\t';
    } else if (delimiter.size() == 1) {
      opt.delimiter = delimiter[0];
    } else {
      throw ConfigError("delimiter must be a single character");
    }
    opt.has_header = !no_header;
    opt.decision = decision;
    opt.label_columns = split_list(merge_labels);
    opt.continuous = split_list(continuous);
    return opt;
  }
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
  cmd->add_option("input", flags.input, "delimited text file")->required();
  cmd->add_option("--delimiter", flags.delimiter, "field delimiter (default ,)");
  cmd->add_flag("--no-header", flags.no_header, "input has no header row");
  cmd->add_option("--decision", flags.decision, "decision column (name or index; default last)");
  cmd->add_option("--merge-labels", flags.merge_labels,
                  "label columns to merge into one decision attribute");
  cmd->add_option("--continuous", flags.continuous, "columns to parse as decimal numbers");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

namespace {

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"positive-region feature selection toolkit"};
  app.require_subcommand(1);

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "load delimited text into a store");
  IngestFlags ingest_flags;
  add_ingest_flags(ingest_cmd, ingest_flags);
  std::string ingest_out;
  ingest_cmd->add_option("--out", ingest_out, "store file to write")->required();

  // discretize
  auto* disc_cmd = app.add_subcommand("discretize", "entropy-minimizing cuts, then store");
  IngestFlags disc_flags;
  add_ingest_flags(disc_cmd, disc_flags);
  std::string disc_out, disc_cuts_out, disc_cuts_in;
  disc_cmd->add_option("--out", disc_out, "store file to write")->required();
  disc_cmd->add_option("--cuts-out", disc_cuts_out, "write fitted cuts to this sidecar file");
  disc_cmd->add_option("--cuts", disc_cuts_in, "apply cuts from a sidecar instead of fitting");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "positive/boundary structure of a store");
  std::string stats_store;
  stats_cmd->add_option("store", stats_store, "store file")->required();

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "run length needed for a target quality");
  double plan_target = 0.95, plan_alpha = 0.05;
  std::string plan_convention = "one-sided";
  plan_cmd->add_option("--target-dq", plan_target, "target discernibility quality")->required();
  plan_cmd->add_option("--alpha", plan_alpha, "significance level (default 0.05)");
  plan_cmd->add_option("--convention", plan_convention, "one-sided|two-sided (default one-sided)");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "find an approximate reduct");
  std::string reduce_store;
  std::uint64_t reduce_run = 150, reduce_seed = 0;
  double reduce_tol = 0.0, reduce_alpha = 0.05;
  std::string reduce_convention = "one-sided", reduce_strategy = "random";
  std::string reduce_eval = "exact", reduce_trace;
  bool reduce_allow_small = false;
  reduce_cmd->add_option("store", reduce_store, "store file")->required();
  reduce_cmd->add_option("--I", reduce_run, "clean-run length (default 150)");
  reduce_cmd->add_option("--IR", reduce_tol, "flip tolerance in [0,0.05] (default 0)");
  reduce_cmd->add_option("--alpha", reduce_alpha, "significance level (default 0.05)");
  reduce_cmd->add_option("--convention", reduce_convention, "one-sided|two-sided");
  reduce_cmd->add_option("--seed", reduce_seed, "random seed (default 0)");
  reduce_cmd->add_option("--strategy", reduce_strategy, "random|max-cover (default random)");
  reduce_cmd->add_option("--evaluate", reduce_eval, "exact|sampled:<m> (default exact)");
  reduce_cmd->add_option("--trace", reduce_trace, "write the full draw trace to this file");
  reduce_cmd->add_flag("--allow-small-I", reduce_allow_small,
                       "permit run lengths below the statistical regime (50)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "discernibility quality of an attribute set");
  std::string eval_store, eval_attrs, eval_mode = "exact";
  std::uint64_t eval_m = 10000, eval_seed = 0;
  eval_cmd->add_option("store", eval_store, "store file")->required();
  eval_cmd->add_option("--attrs", eval_attrs, "attribute names or indices")->required();
  eval_cmd->add_option("--mode", eval_mode, "exact|sampled (default exact)");
  eval_cmd->add_option("--m", eval_m, "sample size for sampled mode (default 10000)");
  eval_cmd->add_option("--seed", eval_seed, "sample seed (default 0)");

  // reshape
  auto* reshape_cmd = app.add_subcommand("reshape", "structure-reform transforms");
  std::string reshape_store, reshape_strategy_name_, reshape_out;
  std::uint64_t reshape_seed = 0;
  reshape_cmd->add_option("store", reshape_store, "store file")->required();
  reshape_cmd
      ->add_option("--strategy", reshape_strategy_name_,
                   "ten-times|half-border|half-pos|minimal-pos|minimal-border")
      ->required();
  reshape_cmd->add_option("--seed", reshape_seed, "random seed (default 0)");
  reshape_cmd->add_option("--out", reshape_out, "store file to write")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "repeated runs over a parameter grid");
  std::string bench_store, bench_I = "150", bench_IR = "0", bench_eval = "exact";
  std::string bench_convention = "one-sided", bench_strategy = "random";
  std::string bench_csv, bench_json;
  std::uint32_t bench_runs = 10;
  std::uint64_t bench_seed = 0;
  double bench_alpha = 0.05;
  unsigned bench_jobs = default_jobs();
  bench_cmd->add_option("store", bench_store, "store file")->required();
  bench_cmd->add_option("--I", bench_I, "run-length grid, e.g. 50,150,300 (default 150)");
  bench_cmd->add_option("--IR", bench_IR, "tolerance grid, e.g. 0,0.02 (default 0)");
  bench_cmd->add_option("--runs", bench_runs, "runs per grid cell (default 10)");
  bench_cmd->add_option("--seed", bench_seed, "base seed; run r uses seed+r (default 0)");
  bench_cmd->add_option("--alpha", bench_alpha, "significance level (default 0.05)");
  bench_cmd->add_option("--convention", bench_convention, "one-sided|two-sided");
  bench_cmd->add_option("--strategy", bench_strategy, "random|max-cover");
  bench_cmd->add_option("--eval", bench_eval, "exact|sampled:<m> (default exact)");
  bench_cmd->add_option("--jobs", bench_jobs, "parallel runs (default $PRDS_JOBS or 1)");
  bench_cmd->add_option("--out-csv", bench_csv, "write the report table to this CSV file");
  bench_cmd->add_option("--out-json", bench_json, "write per-run detail to this JSON file");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("prds");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  if (*ingest_cmd) {
    auto table = ingest_delimited(ingest_flags.input, ingest_flags.options());
    if (!table.fully_categorical()) {
      throw ConfigError("input has continuous columns; use the discretize command");
    }
    save_store(table, ingest_out);
    json j;
    j["rows"] = table.row_count();
    j["attributes"] = table.schema().attribute_count();
    j["decision"] = table.schema().attribute_name(table.schema().decision_index());
    j["decision_values"] = table.schema().decision_value_count();
    j["store"] = ingest_out;
    emit(out, j, "");
    return 0;
  }

  if (*disc_cmd) {
    auto table = ingest_delimited(disc_flags.input, disc_flags.options());
    CutSet cuts = disc_cuts_in.empty() ? fit_cuts(table) : load_cuts(disc_cuts_in);
    auto discrete = apply_cuts(table, cuts);
    save_store(discrete, disc_out);
    if (!disc_cuts_out.empty()) save_cuts(cuts, disc_cuts_out);
    json j;
    j["rows"] = discrete.row_count();
    j["store"] = disc_out;
    json per_attr = json::object();
    for (const auto& [name, thresholds] : cuts.entries) per_attr[name] = thresholds.size();
    j["cuts"] = per_attr;
    emit(out, j, "");
    return 0;
  }

  if (*stats_cmd) {
    auto table = load_store(stats_store);
    if (table.row_count() == 0) throw EmptyUniverseError("store has no rows");
    const auto stats = structure_stats(table);
    json j;
    j["nop"] = stats.nop;
    j["nob"] = stats.nob;
    j["rop"] = stats.rop;
    emit(out, j, "");
    return 0;
  }

  if (*plan_cmd) {
    const auto params = make_confidence(plan_alpha, plan_convention);
    const auto need = required_run_length(plan_target, params);
    json j;
    j["I"] = need.value;
    j["bound"] = quality_lower_bound(need.value, params, /*allow_short_run=*/true);
    j["out_of_regime"] = need.out_of_regime;
    j["alpha"] = plan_alpha;
    j["convention"] = plan_convention;
    if (need.out_of_regime) {
      j["note"] = "below the normal-approximation regime; consider I >= 50";
    }
    emit(out, j, "");
    return 0;
  }

  if (*reduce_cmd) {
    if (reduce_run < 50 && !reduce_allow_small) {
      throw ConfigError("--I below 50 leaves the statistical regime; pass --allow-small-I");
    }
    auto table = load_store(reduce_store);
    ReductConfig config;
    config.run_length = reduce_run;
    config.tolerance = reduce_tol;
    config.confidence = make_confidence(reduce_alpha, reduce_convention);
    config.seed = reduce_seed;
    config.strategy = make_strategy(reduce_strategy);
    if (config.tolerance < 0.0 || config.tolerance > 0.05) {
      throw ConfigError("tolerance must lie in [0, 0.05]");
    }
    const bool consistent = is_consistent(table);
    if (consistent) config.tolerance = 0.0;  // no class can flip anyway

    auto result = find_reduct(table, config);

    const auto conds = table.schema().condition_indices();
    const auto part = partition_by(table, conds);
    const auto reg = label_regions(table, part);
    const auto eval = parse_eval(reduce_eval);
    json j;
    try {
      QualityEstimate quality;
      if (eval.kind == QualityMode::kExact) {
        quality = quality_exact(table, part, reg, result.attributes);
      } else {
        quality = quality_sampled(table, part, reg, result.attributes, eval.sample_size,
                                  mix_seed(reduce_seed, 1000));
      }
      result.quality = quality;
      j["dq"] = quality.value;
      j["dq_mode"] = quality.mode == QualityMode::kExact ? "exact" : "sampled";
      if (quality.mode == QualityMode::kSampled) j["dq_sample"] = quality.sample_size;
    } catch (const UndefinedMeasureError& e) {
      j["dq"] = nullptr;
      j["dq_note"] = e.what();
    }

    j["reduct"] = attribute_names(table.schema(), result.attributes);
    j["reduct_indices"] = result.attributes;
    j["draws"] = result.draws;
    j["terminal"] =
        result.terminal == Terminal::kRunComplete ? "run-complete" : "exhausted-universe";
    j["trivial"] = result.trivial;
    j["guarantee"] = result.guarantee;
    j["expected_bound"] = result.expected_bound;
    j["consistent"] = consistent;
    json summary;
    std::uint64_t cases[5] = {0, 0, 0, 0, 0};
    for (auto c : result.case_trace) ++cases[c];
    summary["case_counts"] = {{"positive_member", cases[1]},
                              {"boundary_member", cases[2]},
                              {"new_class", cases[3]},
                              {"flip", cases[4]}};
    summary["resets"] = result.resets;
    summary["events"] = result.events.size();
    j["trace_summary"] = std::move(summary);
    emit(out, j, "");

    if (!reduce_trace.empty()) {
      json trace;
      std::string cases_text(result.case_trace.size(), '0');
      for (std::size_t i = 0; i < result.case_trace.size(); ++i) {
        cases_text[i] = static_cast<char>('0' + result.case_trace[i]);
      }
      trace["cases"] = cases_text;
      json events = json::array();
      for (const auto& ev : result.events) {
        events.push_back({{"draw", ev.draw},
                          {"case", ev.draw_case},
                          {"added", ev.added},
                          {"removed", ev.removed},
                          {"reset", ev.reset}});
      }
      trace["events"] = std::move(events);
      emit(out, trace, reduce_trace);
    }
    return 0;
  }

  if (*eval_cmd) {
    auto table = load_store(eval_store);
    const auto attrs = resolve_attributes(table.schema(), eval_attrs);
    json j;
    if (eval_mode == "exact") {
      const auto q = quality_exact(table, attrs);
      j["dq"] = q.value;
      j["mode"] = "exact";
      j["m"] = nullptr;
      j["seed"] = nullptr;
    } else if (eval_mode == "sampled") {
      const auto conds = table.schema().condition_indices();
      const auto part = partition_by(table, conds);
      const auto reg = label_regions(table, part);
      const auto q = quality_sampled(table, part, reg, attrs, eval_m, eval_seed);
      j["dq"] = q.value;
      j["mode"] = "sampled";
      j["m"] = q.sample_size;
      j["seed"] = eval_seed;
    } else {
      throw ConfigError("mode must be exact or sampled");
    }
    emit(out, j, "");
    return 0;
  }

  if (*reshape_cmd) {
    auto table = load_store(reshape_store);
    const auto strategy = parse_reshape_strategy(reshape_strategy_name_);
    auto reformed = reshape(table, strategy, reshape_seed);
    save_store(reformed, reshape_out);
    const auto stats = structure_stats(reformed);
    json j;
    j["rows"] = reformed.row_count();
    j["nop"] = stats.nop;
    j["nob"] = stats.nob;
    j["rop"] = stats.rop;
    j["strategy"] = reshape_strategy_name(strategy);
    j["store"] = reshape_out;
    emit(out, j, "");
    return 0;
  }

  if (*bench_cmd) {
    auto table = load_store(bench_store);
    ExperimentPlan plan;
    for (const auto& token : split_list(bench_I)) plan.run_length_grid.push_back(std::stoull(token));
    for (const auto& token : split_list(bench_IR)) plan.tolerance_grid.push_back(std::stod(token));
    plan.runs = bench_runs;
    plan.base_seed = bench_seed;
    plan.eval = parse_eval(bench_eval);
    plan.confidence = make_confidence(bench_alpha, bench_convention);
    plan.strategy = make_strategy(bench_strategy);
    plan.jobs = bench_jobs;
    for (double t : plan.tolerance_grid) {
      if (t < 0.0 || t > 0.05) throw ConfigError("tolerance must lie in [0, 0.05]");
    }

    const auto report = run_experiment(table, plan);
    if (!bench_csv.empty()) {
      std::ofstream f(bench_csv, std::ios::trunc);
      if (!f) throw ConfigError("cannot open output file: " + bench_csv);
      write_report_csv(report, f);
    }
    if (!bench_json.empty()) {
      emit(out, report_to_json(report, plan), bench_json);
    }
    write_report_csv(report, out);
    return 0;
  }

  err << "usage error: no command given\n";
  return 2;
}

}  // namespace

}  // namespace prds
