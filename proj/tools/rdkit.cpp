/*
 * Copyright 2026 the rdkit authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rdkit/core.hpp"
#include "rdkit/csv.hpp"
#include "rdkit/data_io.hpp"
#include "rdkit/distill.hpp"
#include "rdkit/harness.hpp"
#include "rdkit/manifest.hpp"
#include "rdkit/metrics.hpp"
#include "rdkit/random.hpp"
#include "rdkit/student.hpp"

namespace fs = std::filesystem;
using namespace rdkit;

namespace {

int run_cli(const std::vector<std::string>& args);

struct CommonOpts {
  std::string out_dir = ".";
  uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out-dir,-o", opts.out_dir, "Directory for output files")
      ->envname("RDKIT_OUT_DIR");
  cmd->add_option("--seed", opts.seed, "Root seed; all randomness derives from it");
  cmd->add_option("--jobs", opts.jobs, "Worker threads for sweeps");
}

// Raw subcommand arguments of the current invocation, kept for the manifest.
std::vector<std::string> g_raw_args;

std::vector<std::string> manifest_argv(const std::vector<std::string>& raw) {
  // Strip the subcommand name and any --out-dir so reruns can redirect.
  std::vector<std::string> out;
  for (size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] == "--out-dir" || raw[i] == "-o") {
      ++i;
      continue;
    }
    if (raw[i].rfind("--out-dir=", 0) == 0) continue;
    out.push_back(raw[i]);
  }
  return out;
}

void write_manifest(const CommonOpts& opts, const std::string& command,
                    const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& output_names) {
  RunManifest m;
  m.command = command;
  m.argv = manifest_argv(g_raw_args);
  m.seed = opts.seed;
  m.version = kVersion;
  for (const std::string& p : input_paths) m.inputs.emplace_back(p, fnv1a64_file(p));
  m.outputs = output_names;
  m.save((fs::path(opts.out_dir) / (command + "_manifest.json")).string());
}

std::ofstream open_output(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void check_dataset(const Dataset& ds, const std::string& what) {
  const std::vector<Violation> v = validate_dataset(ds);
  if (v.empty()) return;
  std::ostringstream msg;
  msg << what << " failed validation (" << v.size() << " violations):";
  for (size_t i = 0; i < v.size() && i < 5; ++i)
    msg << "\n  query " << v[i].query_id << " [" << v[i].field << "]: " << v[i].message;
  throw std::runtime_error(msg.str());
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split_csv_line(text))
    if (!tok.empty()) out.push_back(parse_double(tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// ---------------------------------------------------------------------------
// Dataset loading shared by train / sweep.

struct DataOpts {
  std::string format = "libsvm";  // libsvm | trec | synthetic
  std::string train_path, val_path, test_path;
  std::string train_qrels, val_qrels, test_qrels;
  std::string train_run, val_run, test_run;
  int synth_train = 200, synth_val = 100, synth_test = 100;
  std::string synth_len = "10:20";
  int synth_dim = 10;
  double teacher_quality = 0.9;
  double label_sparsity = 0.1;
};

void add_data_opts(CLI::App* cmd, DataOpts& d, bool with_test) {
  cmd->add_option("--format", d.format, "Dataset format: libsvm, trec, or synthetic")
      ->check(CLI::IsMember({"libsvm", "trec", "synthetic"}));
  cmd->add_option("--train", d.train_path, "Training data (libsvm file, or run file for trec)");
  cmd->add_option("--val", d.val_path, "Validation data");
  cmd->add_option("--train-qrels", d.train_qrels, "Qrels for trec-format training data");
  cmd->add_option("--val-qrels", d.val_qrels, "Qrels for trec-format validation data");
  cmd->add_option("--train-teacher-run", d.train_run, "Teacher run file for the training split");
  cmd->add_option("--val-teacher-run", d.val_run, "Teacher run file for the validation split");
  if (with_test) {
    cmd->add_option("--test", d.test_path, "Test data");
    cmd->add_option("--test-qrels", d.test_qrels, "Qrels for trec-format test data");
    cmd->add_option("--test-teacher-run", d.test_run, "Teacher run file for the test split");
  }
  cmd->add_option("--synth-train", d.synth_train, "Synthetic: training query count");
  cmd->add_option("--synth-val", d.synth_val, "Synthetic: validation query count");
  if (with_test) cmd->add_option("--synth-test", d.synth_test, "Synthetic: test query count");
  cmd->add_option("--synth-len", d.synth_len, "Synthetic: list length range min:max");
  cmd->add_option("--synth-dim", d.synth_dim, "Synthetic: feature dimension");
  cmd->add_option("--teacher-quality", d.teacher_quality, "Synthetic: teacher quality in [0,1]");
  cmd->add_option("--label-sparsity", d.label_sparsity, "Synthetic: positive fraction per list");
}

std::pair<int, int> parse_len_range(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos)
    return {static_cast<int>(parse_double(text)), static_cast<int>(parse_double(text))};
  return {static_cast<int>(parse_double(text.substr(0, colon))),
          static_cast<int>(parse_double(text.substr(colon + 1)))};
}

Dataset load_split(const DataOpts& d, const std::string& split, const std::string& path,
                   const std::string& qrels, const std::string& run, uint64_t seed,
                   int synth_queries, std::vector<std::string>& inputs) {
  Dataset ds;
  if (d.format == "synthetic") {
    SyntheticSpec spec;
    spec.n_queries = synth_queries;
    std::tie(spec.list_len_min, spec.list_len_max) = parse_len_range(d.synth_len);
    spec.feature_dim = d.synth_dim;
    spec.teacher_quality = d.teacher_quality;
    spec.label_sparsity = d.label_sparsity;
    spec.seed = derive_seed(seed, "synth-" + split);
    ds = generate_synthetic(spec);
    ds.name = "synthetic-" + split;
  } else if (d.format == "libsvm") {
    if (path.empty()) throw std::runtime_error("missing --" + split + " path");
    ds = load_libsvm_ranking(path);
    ds.name = fs::path(path).stem().string();
    inputs.push_back(path);
    if (!run.empty()) {
      attach_teacher_scores(ds, load_trec_run(run));
      inputs.push_back(run);
    }
  } else {  // trec
    if (path.empty() || qrels.empty())
      throw std::runtime_error("trec format needs --" + split + " (run) and --" + split +
                               "-qrels");
    const JoinResult joined = join_run_qrels(load_trec_run(path), load_qrels(qrels));
    ds = joined.dataset;
    ds.name = fs::path(path).stem().string();
    inputs.push_back(path);
    inputs.push_back(qrels);
  }
  check_dataset(ds, split + " dataset");
  return ds;
}

// ---------------------------------------------------------------------------
// Config flags shared by train / sweep.

struct ConfigOpts {
  std::string rel_loss = "softmax";
  std::string distill_loss = "none";
  double alpha = 1.0;
  std::string transform = "off";
  double temperature = 1.0;
  int top_k = 10;
  int num_samples = 8;
  double lr = 1.0;
  int batch_lists = 128;
  int steps = 2000;
  int eval_every = 0;
  std::string task;
  std::string policy = "ignore";
  std::optional<double> binarize_threshold;
};

void add_config_opts(CLI::App* cmd, ConfigOpts& c) {
  cmd->add_option("--rel-loss", c.rel_loss, "Relevance loss: softmax or lambdaloss");
  cmd->add_option("--distill-loss", c.distill_loss,
                  "Distillation loss: none, rd, rankdistil, mse, pairlog, pairmse, gumbelndcg, "
                  "softmax, lambdaloss");
  cmd->add_option("--alpha", c.alpha, "Relevance weight in [0,1]");
  cmd->add_option("--transform", c.transform, "Teacher softmax transform: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--temperature", c.temperature, "Transform temperature");
  cmd->add_option("--top-k", c.top_k, "Top-K for RD / RankDistil");
  cmd->add_option("--num-samples", c.num_samples, "Sample count for sampled losses");
  cmd->add_option("--lr", c.lr, "Adagrad learning rate");
  cmd->add_option("--batch-lists", c.batch_lists, "Lists per training step");
  cmd->add_option("--steps", c.steps, "Training steps");
  cmd->add_option("--eval-every", c.eval_every, "Trace interval (0 = steps/20)");
  cmd->add_option("--task", c.task, "Task kind: t1, t2, t3, or t4");
  cmd->add_option("--policy", c.policy, "Empty-query policy: perfect, zero, or ignore")
      ->check(CLI::IsMember({"perfect", "zero", "ignore"}));
  cmd->add_option("--binarize-threshold", c.binarize_threshold,
                  "Label threshold for MRR on graded data");
}

DistillConfig config_from(const ConfigOpts& c, uint64_t seed) {
  DistillConfig cfg;
  cfg.relevance_loss = loss_kind_from_string(c.rel_loss);
  if (c.distill_loss != "none") cfg.distill_loss = loss_kind_from_string(c.distill_loss);
  cfg.alpha = c.alpha;
  cfg.transform_on = c.transform == "on";
  cfg.temperature = c.temperature;
  cfg.top_k = c.top_k;
  cfg.num_permutation_samples = c.num_samples;
  cfg.learning_rate = c.lr;
  cfg.batch_lists = c.batch_lists;
  cfg.train_steps = c.steps;
  cfg.eval_every = c.eval_every;
  cfg.seed = derive_seed(seed, "train");
  if (!c.task.empty()) cfg = derive_task_constraints(task_kind_from_string(c.task), cfg);
  cfg.validate();
  return cfg;
}

EvalSettings eval_settings_from(const ConfigOpts& c) {
  EvalSettings eval;
  eval.policy = policy_from_string(c.policy);
  eval.binarize_threshold = c.binarize_threshold;
  return eval;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const CommonOpts& opts, const std::string& run_path,
                 const std::string& qrel_path, const std::string& policy,
                 std::optional<double> threshold, const std::string& metric, int cutoff) {
  const std::vector<TrecRunRecord> run = load_trec_run(run_path);
  const std::vector<TrecQrelRecord> qrels = load_qrels(qrel_path);
  const JoinResult joined = join_run_qrels(run, qrels);
  for (const std::string& q : joined.unjudged_queries)
    std::cerr << "warning: query " << q << " has no qrel entries; treated as empty\n";
  if (joined.dropped_qrel_only_docs > 0)
    std::cerr << "warning: " << joined.dropped_qrel_only_docs
              << " judged documents missing from the run were dropped\n";

  const std::vector<ScoredList> lists = scored_lists_from(joined.dataset);
  std::vector<std::string> metrics;
  if (metric.empty()) {
    metrics = kStandardMetrics;
  } else if (metric == "ndcg") {
    metrics = {cutoff > 0 ? "NDCG@" + std::to_string(cutoff) : "NDCG"};
  } else if (metric == "mrr") {
    metrics = {cutoff > 0 ? "MRR@" + std::to_string(cutoff) : "MRR"};
  } else {
    throw std::runtime_error("unknown --metric (use ndcg or mrr)");
  }

  std::ofstream agg = open_output(opts, "evaluate_aggregates.csv");
  std::ofstream pq = open_output(opts, "evaluate_per_query.csv");
  agg << "metric,aggregate,retained,dropped\n";
  pq << "metric,query_id,value\n";
  std::printf("%-8s %10s %9s %8s\n", "metric", "aggregate", "retained", "dropped");
  for (const std::string& name : metrics) {
    MetricSpec spec;
    spec.policy = policy_from_string(policy);
    if (name.rfind("MRR", 0) == 0) {
      spec.kind = MetricKind::kMRR;
      spec.binarize_threshold = threshold;
    } else {
      spec.kind = MetricKind::kNDCG;
    }
    const size_t at = name.find('@');
    spec.cutoff = at == std::string::npos ? 0 : std::stoi(name.substr(at + 1));
    const EvalReport report = evaluate(lists, spec);
    agg << name << ',' << format_double(report.aggregate) << ',' << report.retained_count << ','
        << report.dropped_count << '\n';
    for (const auto& [qid, v] : report.per_query)
      pq << name << ',' << qid << ',' << format_double(v) << '\n';
    std::printf("%-8s %10.2f %9zu %8zu\n", name.c_str(), report.aggregate,
                report.retained_count, report.dropped_count);
  }
  agg.close();
  pq.close();
  write_manifest(opts, "evaluate", {run_path, qrel_path},
                 {"evaluate_aggregates.csv", "evaluate_per_query.csv"});
  return 0;
}

// ---------------------------------------------------------------------------
// train

void write_model_csv(std::ostream& out, const TrainResult& result) {
  const auto put_row = [&](const char* name, const LinearModel& m) {
    out << name;
    for (double w : m.weights) out << ',' << format_double(w);
    out << ',' << format_double(m.bias);
    for (double a : m.adagrad_accum) out << ',' << format_double(a);
    out << '\n';
  };
  const size_t d = result.final_model.dim();
  out << "checkpoint";
  for (size_t i = 0; i < d; ++i) out << ",w" << i;
  out << ",bias";
  for (size_t i = 0; i <= d; ++i) out << ",accum" << i;
  out << '\n';
  put_row("best", result.best_model);
  put_row("final", result.final_model);
}

int cmd_train(const CommonOpts& opts, const DataOpts& data, const ConfigOpts& conf) {
  std::vector<std::string> inputs;
  const Dataset ds_train = load_split(data, "train", data.train_path, data.train_qrels,
                                      data.train_run, opts.seed, data.synth_train, inputs);
  Dataset ds_val;
  if (data.format == "synthetic" || !data.val_path.empty())
    ds_val = load_split(data, "val", data.val_path, data.val_qrels, data.val_run, opts.seed,
                        data.synth_val, inputs);

  const DistillConfig cfg = config_from(conf, opts.seed);
  const TrainResult result = train(ds_train, ds_val, cfg);

  std::ofstream model_csv = open_output(opts, "model.csv");
  write_model_csv(model_csv, result);
  model_csv.close();
  std::ofstream trace_csv = open_output(opts, "trace.csv");
  export_learning_dynamics(trace_csv, result.trace);
  trace_csv.close();
  write_manifest(opts, "train", inputs, {"model.csv", "trace.csv"});

  std::printf("trained %d steps on %zu lists\n", cfg.train_steps, ds_train.lists.size());
  if (!result.trace.empty()) {
    const TrainTrace& last = result.trace.back();
    std::printf("final:  step %-6d val NDCG@5 vs relevance %.2f  vs teacher %.2f\n", last.step,
                last.val_ndcg5_relevance, last.val_ndcg5_teacher);
    std::printf("best:   step %-6d val NDCG@5 vs relevance %.2f\n", result.best_step,
                result.best_val_ndcg5);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct GridOpts {
  std::string lrs = "0.1,1,10";
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::string temps = "0.1,1,2,5,10";
  std::string top_ks = "1,5,10";
  std::string transforms = "on,off";
  std::string losses = "none,rd,rankdistil,mse,pairlog,pairmse,gumbelndcg,softmax,lambdaloss";
};

int cmd_sweep(const CommonOpts& opts, const DataOpts& data, const ConfigOpts& conf,
              const GridOpts& g) {
  std::vector<std::string> inputs;
  const Dataset ds_train = load_split(data, "train", data.train_path, data.train_qrels,
                                      data.train_run, opts.seed, data.synth_train, inputs);
  const Dataset ds_val = load_split(data, "val", data.val_path, data.val_qrels, data.val_run,
                                    opts.seed, data.synth_val, inputs);
  const Dataset ds_test = load_split(data, "test", data.test_path, data.test_qrels, data.test_run,
                                     opts.seed, data.synth_test, inputs);

  SweepGrid grid;
  grid.learning_rates = parse_double_list(g.lrs);
  grid.alphas = parse_double_list(g.alphas);
  grid.temperatures = parse_double_list(g.temps);
  grid.top_ks = parse_int_list(g.top_ks);
  grid.transform_modes.clear();
  for (const std::string& t : split_csv_line(g.transforms))
    grid.transform_modes.push_back(t == "on");
  grid.losses.clear();
  for (const std::string& name : split_csv_line(g.losses)) {
    if (name == "none")
      grid.losses.push_back(std::nullopt);
    else
      grid.losses.push_back(loss_kind_from_string(name));
  }

  const DistillConfig base = config_from(conf, opts.seed);
  const EvalSettings eval = eval_settings_from(conf);
  const ResultTable table = run_sweep(ds_train, ds_val, ds_test, grid, base, eval, opts.jobs);

  std::ofstream results = open_output(opts, "sweep_results.csv");
  results << "method,config,transform,val_ndcg5,seed";
  for (const std::string& m : kStandardMetrics) results << ',' << m << ',' << m << "_sig";
  results << '\n';
  const MethodResult* baseline = nullptr;
  for (const MethodResult& row : table.rows)
    if (row.method == "RelevanceOnly") baseline = &row;
  std::printf("%-14s %-9s", "method", "transform");
  for (const std::string& m : kStandardMetrics) std::printf(" %9s", m.c_str());
  std::printf("\n");
  for (const MethodResult& row : table.rows) {
    results << row.method << ',' << row.config_id << ',' << (row.transform_on ? "on" : "off")
            << ',' << format_double(row.val_ndcg5) << ',' << opts.seed;
    std::printf("%-14s %-9s", row.method.c_str(), row.transform_on ? "on" : "off");
    for (const std::string& m : kStandardMetrics) {
      std::string sig;
      if (baseline && &row != baseline) {
        const TTestResult t = paired_ttest(row.per_query.at(m), baseline->per_query.at(m));
        sig = t.significant_at_001 ? "1" : "0";
      }
      results << ',' << format_double(row.aggregate.at(m)) << ',' << sig;
      std::printf(" %8.2f%s", row.aggregate.at(m), sig == "1" ? "*" : " ");
    }
    results << '\n';
    std::printf("\n");
  }
  results.close();

  std::ofstream pq = open_output(opts, "sweep_per_query.csv");
  pq << "method,metric,query_index,value\n";
  for (const MethodResult& row : table.rows)
    for (const std::string& m : kStandardMetrics) {
      const std::vector<double>& v = row.per_query.at(m);
      for (size_t i = 0; i < v.size(); ++i)
        pq << row.method << ',' << m << ',' << i << ',' << format_double(v[i]) << '\n';
    }
  pq.close();

  std::ofstream failed = open_output(opts, "sweep_failed.csv");
  failed << "config,error\n";
  for (const FailedPoint& f : table.failed) {
    std::string msg = f.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failed << f.config_id << ',' << msg << '\n';
  }
  failed.close();
  if (!table.failed.empty())
    std::cerr << "warning: " << table.failed.size()
              << " grid points failed (see sweep_failed.csv)\n";

  write_manifest(opts, "sweep", inputs,
                 {"sweep_results.csv", "sweep_per_query.csv", "sweep_failed.csv"});
  return 0;
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const CommonOpts& opts, const std::string& run_path) {
  const std::vector<TrecRunRecord> run = load_trec_run(run_path);
  const JoinResult joined = join_run_qrels(run, {});
  const ScoreStats st = teacher_score_stats(joined.dataset);
  std::printf("%10s %10s %10s %10s %10s %10s %10s\n", "Mean", "Std", "Min", "25%", "50%", "75%",
              "Max");
  std::printf("%10.2f %10.2f %10.2f %10.2f %10.2f %10.2f %10.2f\n", st.mean, st.std_dev, st.min,
              st.p25, st.p50, st.p75, st.max);
  std::ofstream out = open_output(opts, "teacher_stats.csv");
  out << "mean,std,min,p25,p50,p75,max\n";
  out << format_double(st.mean) << ',' << format_double(st.std_dev) << ','
      << format_double(st.min) << ',' << format_double(st.p25) << ',' << format_double(st.p50)
      << ',' << format_double(st.p75) << ',' << format_double(st.max) << '\n';
  out.close();
  write_manifest(opts, "stats", {run_path}, {"teacher_stats.csv"});
  return 0;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const CommonOpts& opts, int queries, const std::string& len, int dim,
              double quality, double sparsity, const std::string& prefix) {
  SyntheticSpec spec;
  spec.n_queries = queries;
  std::tie(spec.list_len_min, spec.list_len_max) = parse_len_range(len);
  spec.feature_dim = dim;
  spec.teacher_quality = quality;
  spec.label_sparsity = sparsity;
  spec.seed = derive_seed(opts.seed, "synth-" + prefix);
  const Dataset ds = generate_synthetic(spec);

  std::ofstream libsvm = open_output(opts, prefix + ".libsvm");
  write_libsvm_ranking(libsvm, ds);
  libsvm.close();
  std::ofstream run = open_output(opts, prefix + "_run.txt");
  write_trec_run(run, run_records_from(ds, prefix + "_teacher"));
  run.close();
  std::ofstream qrels = open_output(opts, prefix + "_qrels.txt");
  write_qrels(qrels, qrel_records_from(ds));
  qrels.close();
  write_manifest(opts, "synth", {},
                 {prefix + ".libsvm", prefix + "_run.txt", prefix + "_qrels.txt"});
  std::printf("wrote %d synthetic queries (dim %d) under prefix %s\n", queries, dim,
              prefix.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// report

MetricTable table_from_sweep_csv(const std::string& path, const std::string& metric) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const std::vector<std::string> header = split_csv_line(line);
  size_t col = header.size();
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == metric) col = i;
  if (col == header.size()) throw std::runtime_error(path + ": no column " + metric);
  MetricTable table;
  table.name = fs::path(path).stem().string();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() <= col) throw std::runtime_error(path + ": short row");
    if (f[0] == "RelevanceOnly") continue;  // ranks compare distillation methods
    table.method_metric.emplace_back(f[0], parse_double(f[col]));
  }
  return table;
}

int cmd_report(const CommonOpts& opts, const std::vector<std::string>& table_paths,
               const std::string& published, const std::string& metric) {
  std::vector<MetricTable> tables;
  std::vector<std::string> inputs;
  if (!published.empty()) {
    std::ifstream in(published);
    if (!in) throw std::runtime_error("cannot open " + published);
    tables = load_metric_tables_csv(in);
    inputs.push_back(published);
  }
  for (const std::string& p : table_paths) {
    tables.push_back(table_from_sweep_csv(p, metric));
    inputs.push_back(p);
  }
  if (tables.empty()) throw std::runtime_error("report needs --tables and/or --published");

  std::vector<RankSummary> ranks = aggregate_ranks(tables);
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const RankSummary& a, const RankSummary& b) {
                     return a.mean_rank < b.mean_rank;
                   });
  std::printf("%-14s %10s %11s %10s %7s\n", "method", "best rank", "worst rank", "mean rank",
              "tables");
  std::ofstream out = open_output(opts, "ranks.csv");
  out << "method,best_rank,worst_rank,mean_rank,tables\n";
  for (const RankSummary& r : ranks) {
    std::printf("%-14s %10.1f %11.1f %10.1f %7zu\n", r.method.c_str(), r.best_rank, r.worst_rank,
                r.mean_rank, r.tables);
    out << r.method << ',' << format_double(r.best_rank) << ',' << format_double(r.worst_rank)
        << ',' << format_double(r.mean_rank) << ',' << r.tables << '\n';
  }
  out.close();
  write_manifest(opts, "report", inputs, {"ranks.csv"});
  return 0;
}

// ---------------------------------------------------------------------------
// rerun

int cmd_rerun(const CommonOpts& opts, const std::string& manifest_path) {
  const RunManifest m = RunManifest::load(manifest_path);
  for (const auto& [path, digest] : m.inputs) {
    const std::string now = fnv1a64_file(path);
    if (now != digest)
      throw std::runtime_error("input " + path + " changed since the original run (digest " +
                               now + " != " + digest + "); rerun would not reproduce");
  }
  std::vector<std::string> args;
  args.push_back(m.command);
  for (const std::string& a : m.argv) args.push_back(a);
  args.push_back("--out-dir");
  args.push_back(opts.out_dir);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"rdkit: learning-to-rank distillation toolkit"};
  app.require_subcommand(1);

  // evaluate
  CommonOpts eval_common;
  std::string eval_run, eval_qrels, eval_metric;
  std::string eval_policy = "ignore";
  std::optional<double> eval_threshold;
  int eval_cutoff = 0;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score a run file against qrels");
  add_common(evaluate_cmd, eval_common);
  evaluate_cmd->add_option("--run", eval_run, "TREC run file")->required();
  evaluate_cmd->add_option("--qrels", eval_qrels, "TREC qrel file")->required();
  evaluate_cmd->add_option("--policy", eval_policy, "Empty-query policy")
      ->check(CLI::IsMember({"perfect", "zero", "ignore"}));
  evaluate_cmd->add_option("--binarize-threshold", eval_threshold,
                           "Label threshold for MRR on graded data");
  evaluate_cmd->add_option("--metric", eval_metric, "Restrict to one metric: ndcg or mrr");
  evaluate_cmd->add_option("--cutoff", eval_cutoff, "Cutoff for --metric (0 = unbounded)");

  // train
  CommonOpts train_common;
  DataOpts train_data;
  ConfigOpts train_conf;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a linear student");
  add_common(train_cmd, train_common);
  add_data_opts(train_cmd, train_data, /*with_test=*/false);
  add_config_opts(train_cmd, train_conf);

  // sweep
  CommonOpts sweep_common;
  DataOpts sweep_data;
  ConfigOpts sweep_conf;
  GridOpts sweep_grid;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter sweep with test report");
  add_common(sweep_cmd, sweep_common);
  add_data_opts(sweep_cmd, sweep_data, /*with_test=*/true);
  add_config_opts(sweep_cmd, sweep_conf);
  sweep_cmd->add_option("--lrs", sweep_grid.lrs, "Learning rate grid");
  sweep_cmd->add_option("--alphas", sweep_grid.alphas, "Alpha grid");
  sweep_cmd->add_option("--temps", sweep_grid.temps, "Temperature grid");
  sweep_cmd->add_option("--top-ks", sweep_grid.top_ks, "Top-K grid (RD / RankDistil)");
  sweep_cmd->add_option("--transforms", sweep_grid.transforms, "Transform modes: on,off");
  sweep_cmd->add_option("--losses", sweep_grid.losses, "Methods to sweep (none = baseline)");

  // stats
  CommonOpts stats_common;
  std::string stats_run;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Teacher score statistics of a run file");
  add_common(stats_cmd, stats_common);
  stats_cmd->add_option("--run", stats_run, "TREC run file")->required();

  // synth
  CommonOpts synth_common;
  int synth_queries = 100;
  std::string synth_len = "10:20", synth_prefix = "synth";
  int synth_dim = 10;
  double synth_quality = 0.9, synth_sparsity = 0.1;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_common(synth_cmd, synth_common);
  synth_cmd->add_option("--queries", synth_queries, "Query count");
  synth_cmd->add_option("--list-len", synth_len, "List length range min:max");
  synth_cmd->add_option("--dim", synth_dim, "Feature dimension");
  synth_cmd->add_option("--teacher-quality", synth_quality, "Teacher quality in [0,1]");
  synth_cmd->add_option("--label-sparsity", synth_sparsity, "Positive fraction per list");
  synth_cmd->add_option("--prefix", synth_prefix, "Output file prefix");

  // report
  CommonOpts report_common;
  std::vector<std::string> report_tables;
  std::string report_published, report_metric = "NDCG@5";
  CLI::App* report_cmd = app.add_subcommand("report", "Aggregate method ranks across tables");
  add_common(report_cmd, report_common);
  report_cmd->add_option("--tables", report_tables, "Sweep result CSVs")->delimiter(',');
  report_cmd->add_option("--published", report_published,
                         "Long-format CSV (table,method,value)");
  report_cmd->add_option("--metric", report_metric, "Metric column for sweep tables");

  // rerun
  CommonOpts rerun_common;
  std::string rerun_manifest;
  CLI::App* rerun_cmd = app.add_subcommand("rerun", "Re-execute a command from its manifest");
  add_common(rerun_cmd, rerun_common);
  rerun_cmd->add_option("--manifest", rerun_manifest, "Manifest file")->required();

  std::vector<const char*> argv;
  argv.push_back("rdkit");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  g_raw_args = args;
  if (*evaluate_cmd)
    return cmd_evaluate(eval_common, eval_run, eval_qrels, eval_policy, eval_threshold,
                        eval_metric, eval_cutoff);
  if (*train_cmd) return cmd_train(train_common, train_data, train_conf);
  if (*sweep_cmd) return cmd_sweep(sweep_common, sweep_data, sweep_conf, sweep_grid);
  if (*stats_cmd) return cmd_stats(stats_common, stats_run);
  if (*synth_cmd)
    return cmd_synth(synth_common, synth_queries, synth_len, synth_dim, synth_quality,
                     synth_sparsity, synth_prefix);
  if (*report_cmd)
    return cmd_report(report_common, report_tables, report_published, report_metric);
  if (*rerun_cmd) return cmd_rerun(rerun_common, rerun_manifest);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
