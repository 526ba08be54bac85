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
#ifndef RDKIT_STUDENT_HPP_
#define RDKIT_STUDENT_HPP_

#include <span>
#include <vector>

#include "rdkit/core.hpp"

namespace rdkit {

/*! \brief Linear student ranker with per-parameter Adagrad state. */
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> adagrad_accum;  // d + 1 entries, bias last

  static LinearModel zeros(size_t dim);
  size_t dim() const { return weights.size(); }
};

/*! \brief Scores one list: s_i = w . x_i + b. */
std::vector<double> score_list(const LinearModel& model, const RankList& rl);

/*!
 * \brief One Adagrad update: accum += g^2, param -= lr * g / (sqrt(accum) + 1e-7).
 *
 * Gradient layout matches the model: d weight entries then the bias. Throws
 * on non-finite gradients (training diverged).
 */
LinearModel adagrad_step(const LinearModel& model, std::span<const double> gradient,
                         double learning_rate);

/*! \brief Validation snapshot taken every eval_every steps. */
struct TrainTrace {
  int step = 0;
  double train_loss = 0.0;
  double val_ndcg5_relevance = 0.0;  // x100; NaN when the split has no usable labels
  double val_ndcg5_teacher = 0.0;    // x100, identity-gain NDCG on raw teacher scores
};

struct TrainResult {
  LinearModel best_model;   // best validation NDCG@5 checkpoint (the default choice)
  LinearModel final_model;  // weights after the last step
  int best_step = 0;
  double best_val_ndcg5 = 0.0;  // x100
  std::vector<TrainTrace> trace;
  // Objective-side label reads on the training split, for the alpha
  // degeneracy contracts: alpha == 1 never touches teacher scores and
  // alpha == 0 never touches relevance labels.
  uint64_t relevance_reads = 0;
  uint64_t teacher_reads = 0;
};

/*!
 * \brief Trains the linear student on mini-batches of lists.
 *
 * Lists are visited by a seeded shuffle-and-cycle policy; each step averages
 * the combined-objective gradient over batch_lists lists and applies one
 * Adagrad update. Deterministic given (data, cfg, cfg.seed). Throws when the
 * loss or gradient leaves the finite range.
 */
TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const DistillConfig& cfg);

}  // namespace rdkit

#endif  // RDKIT_STUDENT_HPP_
