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
#ifndef RDKIT_DISTILL_HPP_
#define RDKIT_DISTILL_HPP_

#include <optional>
#include <span>
#include <vector>

#include "rdkit/losses.hpp"

namespace rdkit {

/*! \brief Temperature-softmax transform of raw teacher scores, per list. */
struct TransformSpec {
  bool enabled = false;
  double temperature = 1.0;
};

/*!
 * \brief Maps unconstrained teacher scores to positive, order-preserving labels.
 *
 * When enabled, returns softmax(scores / T) computed with max subtraction:
 * the output sums to 1, every entry is positive, and the argsort equals the
 * input's. When disabled, returns the scores unchanged.
 */
std::vector<double> transform_teacher_scores(std::span<const double> teacher_scores,
                                             const TransformSpec& spec);

/*! \brief RankDistil samples from a distribution, so the transform is mandatory. */
bool transform_forced_on(LossKind distill);

/*! \brief Order-only losses (RD, PairLog) never look at label values. */
bool transform_irrelevant(LossKind distill);

/*!
 * \brief Two-term training objective on one list:
 *        alpha * rel_loss(y, s) + (1 - alpha) * distill_loss(yt, s).
 *
 * The inert side is never evaluated: alpha == 1 does not touch teacher
 * labels and alpha == 0 does not touch relevance labels. The gradient is the
 * same affine combination of the component gradients.
 */
LossResult combined_loss(std::optional<std::span<const double>> relevance,
                         std::optional<std::span<const double>> teacher_labels,
                         std::span<const double> scores, double alpha, LossKind relevance_loss,
                         std::optional<LossKind> distill_loss, const LossParams& params);

}  // namespace rdkit

#endif  // RDKIT_DISTILL_HPP_
