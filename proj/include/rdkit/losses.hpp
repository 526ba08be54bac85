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
#ifndef RDKIT_LOSSES_HPP_
#define RDKIT_LOSSES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rdkit/core.hpp"

namespace rdkit {

/*! \brief Loss value together with its gradient w.r.t. the score vector. */
struct LossResult {
  double value = 0.0;
  std::vector<double> gradient;
};

/*!
 * \brief Parameters of the stochastic smooth-NDCG loss.
 *
 * gumbel_scale == 0 selects the deterministic noise-free mode used by
 * gradient tests; any positive value draws that many independent Gumbel
 * perturbations per evaluation. Fully deterministic given the seed.
 */
struct NoiseSpec {
  int num_samples = 8;
  double gumbel_scale = 1.0;
  double smoothing_tau = 0.1;
  uint64_t seed = 0;
};

// Every loss below maps (labels, scores) of equal length n >= 1 to a
// LossResult. "labels" is either graded relevance or (transformed) teacher
// scores; the same code path serves both sides of the training objective.

/*! \brief Pointwise squared error: sum_i (s_i - y_i)^2. */
LossResult loss_mse(std::span<const double> labels, std::span<const double> scores);

/*! \brief Pairwise logistic loss: -sum_{y_i > y_j} ln sigmoid(s_i - s_j). */
LossResult loss_pair_logistic(std::span<const double> labels, std::span<const double> scores);

/*!
 * \brief Pairwise squared error over ordered pairs:
 *        sum_{i != j} ((s_i - s_j) - (y_i - y_j))^2.
 *
 * Each unordered pair contributes twice.
 */
LossResult loss_pair_mse(std::span<const double> labels, std::span<const double> scores);

/*! \brief Listwise softmax cross entropy: -sum_i y_i ln softmax_i(s). */
LossResult loss_softmax(std::span<const double> labels, std::span<const double> scores);

/*!
 * \brief Smooth NDCG under Gumbel-perturbed scores.
 *
 * Per sample the scores are perturbed, each document's rank is replaced by
 * the sigmoid-smoothed rank r_i = 1 + sum_{j != i} sigmoid((s~_j - s~_i)/tau),
 * and the loss is -(1/idealDCG) sum_i (2^{y_i}-1)/log2(1+r_i), averaged over
 * samples. Requires at least one positive label.
 */
LossResult loss_gumbel_ndcg(std::span<const double> labels, std::span<const double> scores,
                            const NoiseSpec& noise);

/*!
 * \brief Pairwise logistic loss weighted by the NDCG swap delta.
 *
 * delta_ij = |2^{y_i} - 2^{y_j}| * |1/log2(1+rank_i) - 1/log2(1+rank_j)| / idealDCG
 * with ranks induced by the current scores (ties broken by ascending index).
 * The delta is held constant when differentiating, the usual lambda-gradient
 * convention.
 */
LossResult loss_lambda(std::span<const double> labels, std::span<const double> scores);

/*!
 * \brief Top-K sigmoid cross entropy on the teacher's ordering:
 *        -sum_{i<=K} ln sigmoid(s_{pi(i)}).
 *
 * The gradient is supported exactly on the teacher's top-K index set.
 */
LossResult loss_rd(const std::vector<int>& teacher_order, std::span<const double> scores,
                   int top_k);

/*!
 * \brief Log probability of a length-K prefix under the Plackett-Luce model.
 *
 * ln P = -ln((L-K)!) + sum_{j=1..K} [ s_{pi(j)} - ln sum_{remaining} exp(s) ],
 * where the step-j denominator sums over the item placed at j and everything
 * not yet placed. Computed with log-sum-exp stabilization.
 */
double plackett_luce_log_prob(const std::vector<int>& perm_prefix, std::span<const double> scores);

/*!
 * \brief Samples K distinct indices without replacement, proportional to the
 *        remaining probability mass (Plackett-Luce sampling).
 *
 * teacher_probs must be a probability simplex. When the remaining mass hits
 * zero the tail is drawn uniformly from the surviving indices. Deterministic
 * given the seed.
 */
std::vector<int> sample_top_k_permutation(std::span<const double> teacher_probs, int top_k,
                                          uint64_t seed);

/*!
 * \brief Expected negative Plackett-Luce log likelihood of student scores over
 *        top-K permutations sampled from the teacher distribution.
 *
 * The permutations are sampled from teacher_probs (so the softmax transform is
 * mandatory upstream); value and gradient are averaged over the same fixed
 * sample set. Deterministic given the seed.
 */
LossResult loss_rankdistil(std::span<const double> teacher_probs, std::span<const double> scores,
                           int top_k, int num_samples, uint64_t seed);

/*! \brief Indices sorted by descending label, ties broken by ascending index. */
std::vector<int> teacher_order_from(std::span<const double> labels);

/*! \brief Extra knobs consumed by the sampled / top-K losses. */
struct LossParams {
  int top_k = 10;
  int num_samples = 8;
  double gumbel_scale = 1.0;
  double smoothing_tau = 0.1;
  uint64_t seed = 0;
};

/*! \brief Dispatches to the loss implementation named by kind. */
LossResult eval_list_loss(LossKind kind, std::span<const double> labels,
                          std::span<const double> scores, const LossParams& params);

}  // namespace rdkit

#endif  // RDKIT_LOSSES_HPP_
