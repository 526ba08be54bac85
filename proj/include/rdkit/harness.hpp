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
#ifndef RDKIT_HARNESS_HPP_
#define RDKIT_HARNESS_HPP_

#include <iosfwd>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdkit/metrics.hpp"
#include "rdkit/student.hpp"

namespace rdkit {

/*!
 * \brief Hyperparameter grid. The defaults mirror the tabular search space:
 *        alpha in {0, .25, .5, .75, 1}, T in {.1, 1, 2, 5, 10}, transform
 *        on/off, lr in {.1, 1, 10}, and K in {1, 5, 10} for the top-K losses.
 */
struct SweepGrid {
  std::vector<double> learning_rates{0.1, 1.0, 10.0};
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> temperatures{0.1, 1.0, 2.0, 5.0, 10.0};
  std::vector<int> top_ks{1, 5, 10};
  std::vector<bool> transform_modes{true, false};
  // Methods to sweep; nullopt is the relevance-only baseline.
  std::vector<std::optional<LossKind>> losses;
};

/*! \brief Evaluation conventions shared by every harness report. */
struct EvalSettings {
  EmptyQueryPolicy policy = EmptyQueryPolicy::kIgnore;
  std::optional<double> binarize_threshold;  // needed by MRR on graded labels
};

/*! \brief The five standard report columns. */
extern const std::vector<std::string> kStandardMetrics;  // MRR@10 MRR NDCG@1 NDCG@5 NDCG

struct MethodResult {
  std::string method;
  std::string config_id;  // winning grid point, e.g. "alpha=0.5;lr=1;transform=on;T=1"
  bool transform_on = false;
  double val_ndcg5 = 0.0;                            // selection metric, x100
  std::map<std::string, double> aggregate;           // metric -> x100
  std::map<std::string, std::vector<double>> per_query;  // metric -> retained values
  LinearModel model;
};

struct FailedPoint {
  std::string config_id;
  std::string error;
};

struct ResultTable {
  std::string dataset;
  std::vector<MethodResult> rows;
  std::vector<FailedPoint> failed;  // diverged grid points, never silently dropped
};

/*!
 * \brief Trains one model per grid point, selects per method the point with
 *        the best validation NDCG@5, and reports test metrics for the winner.
 *
 * Grid points run on a bounded worker pool; results are merged in
 * enumeration order so the outcome is independent of thread timing.
 */
ResultTable run_sweep(const Dataset& train, const Dataset& val, const Dataset& test,
                      const SweepGrid& grid, const DistillConfig& base_cfg,
                      const EvalSettings& eval, int jobs = 1);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant_at_001 = false;
};

/*!
 * \brief Paired two-tailed Student's t-test on per-query metric vectors.
 *
 * The p-value comes from the t CDF with n-1 degrees of freedom, evaluated
 * through the regularized incomplete beta function. Zero-variance
 * differences give t = 0 (p = 1) when the mean is zero, and p = 0 otherwise.
 */
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

/*! \brief One benchmark configuration's aggregate metric per method. */
struct MetricTable {
  std::string name;
  std::vector<std::pair<std::string, double>> method_metric;
};

struct RankSummary {
  std::string method;
  double best_rank = 0.0;
  double worst_rank = 0.0;
  double mean_rank = 0.0;
  size_t tables = 0;
};

/*!
 * \brief Ranks methods within each table (descending metric, average-rank
 *        ties) and reports min/max/mean rank per method. Methods absent from
 *        a table are skipped for that table.
 */
std::vector<RankSummary> aggregate_ranks(const std::vector<MetricTable>& tables);

/*! \brief Parses a long-format CSV with header table,method,value. */
std::vector<MetricTable> load_metric_tables_csv(std::istream& in);

/*! \brief Builds a MetricTable from a sweep result, keyed by one metric column. */
MetricTable metric_table_from(const ResultTable& table, const std::string& metric,
                              bool include_baseline = false);

struct AlphaCurvePoint {
  LossKind loss;
  double alpha = 0.0;
  double mrr10 = 0.0;  // x100, on the validation split
};

/*!
 * \brief One training run per (loss, alpha); reports validation MRR@10.
 *        alpha = 1 rows are identical across losses by construction.
 */
std::vector<AlphaCurvePoint> alpha_sensitivity(const Dataset& train, const Dataset& val,
                                               const std::vector<LossKind>& losses,
                                               const std::vector<double>& alphas,
                                               const DistillConfig& base_cfg,
                                               const EvalSettings& eval, int jobs = 1);

/*! \brief CSV export of training traces: step,train_loss,ndcg5_vs_relevance,ndcg5_vs_teacher. */
void export_learning_dynamics(std::ostream& out, const std::vector<TrainTrace>& traces);
std::vector<TrainTrace> parse_learning_dynamics(std::istream& in);

/*! \brief Runs fn(0..n-1) on up to jobs worker threads; fn must not throw. */
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

/*! \brief Evaluates a model on a labeled feature dataset under the standard five metrics. */
MethodResult evaluate_model(const LinearModel& model, const Dataset& test,
                            const EvalSettings& eval);

}  // namespace rdkit

#endif  // RDKIT_HARNESS_HPP_
