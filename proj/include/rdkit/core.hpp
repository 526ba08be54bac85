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
#ifndef RDKIT_CORE_HPP_
#define RDKIT_CORE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rdkit {

inline constexpr const char* kVersion = "0.1.0";

/*! \brief Dense row-major matrix; rows == 0 means absent. */
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  const double* row(size_t r) const { return data.data() + r * cols; }
  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
  bool empty() const { return rows == 0; }
};

/*!
 * \brief One query's candidate list.
 *
 * All present per-document sequences share the same length. Lists are kept
 * at natural length; there is no padding anywhere in the toolkit.
 */
struct RankList {
  std::string query_id;
  std::vector<std::string> doc_ids;
  Matrix features;  // n x d, absent when rows == 0
  std::optional<std::vector<double>> relevance;
  std::optional<std::vector<double>> teacher_scores;

  size_t size() const { return doc_ids.size(); }
  bool has_features() const { return !features.empty(); }
};

struct Dataset {
  std::vector<RankList> lists;
  size_t feature_dim = 0;  // 0 if no features
  std::string name;
};

/*! \brief The ranking losses available as relevance or distillation objectives. */
enum class LossKind {
  kMSE,
  kPairLog,
  kPairMSE,
  kSoftmax,
  kGumbelNDCG,
  kLambdaLoss,
  kRD,
  kRankDistil,
};

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

/*! \brief Benchmark task families; they differ in teacher domain and label availability. */
enum class TaskKind {
  kT1InDomain,
  kT2Transfer,
  kT3TransferZeroshot,
  kT4Tabular,
};

/*!
 * \brief Full configuration of one student training run.
 *
 * The objective is alpha * relevance_loss + (1 - alpha) * distill_loss;
 * distill_loss empty means relevance-only (and then alpha must be 1).
 */
struct DistillConfig {
  LossKind relevance_loss = LossKind::kSoftmax;
  std::optional<LossKind> distill_loss;
  double alpha = 1.0;
  bool transform_on = false;
  double temperature = 1.0;
  int top_k = 10;                    // RD / RankDistil only
  int num_permutation_samples = 8;   // sample count for RankDistil and GumbelNDCG
  double learning_rate = 1.0;
  int batch_lists = 128;
  int train_steps = 2000;
  int eval_every = 0;                // 0 -> train_steps / 20, minimum 1
  uint64_t seed = 0;

  /*! \brief Throws std::invalid_argument on the first violated invariant. */
  void validate() const;
};

struct Violation {
  std::string query_id;
  std::string field;
  std::string message;
};

/*!
 * \brief Checks every type invariant of a dataset.
 *
 * Violations are data, not failures: the result lists one entry per broken
 * invariant with the offending query and field, and is empty iff the
 * dataset is well formed. Idempotent and side-effect free.
 */
std::vector<Violation> validate_dataset(const Dataset& ds);

/*!
 * \brief Applies task-specific constraints to a config.
 *
 * T3 (zeroshot transfer) has no target-domain relevance labels: alpha is
 * forced to 0 and RD is rejected because its objective needs labels.
 * T1/T2/T4 pass through unchanged. Idempotent.
 */
DistillConfig derive_task_constraints(TaskKind kind, const DistillConfig& cfg);

const char* to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& name);

}  // namespace rdkit

#endif  // RDKIT_CORE_HPP_
