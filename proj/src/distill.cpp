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
#include "rdkit/distill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdkit {

std::vector<double> transform_teacher_scores(std::span<const double> teacher_scores,
                                             const TransformSpec& spec) {
  if (teacher_scores.empty()) throw std::invalid_argument("teacher score list is empty");
  for (double s : teacher_scores)
    if (!std::isfinite(s)) throw std::invalid_argument("teacher scores must be finite");
  if (!(spec.temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");

  std::vector<double> out(teacher_scores.begin(), teacher_scores.end());
  if (!spec.enabled) return out;

  for (double& s : out) s /= spec.temperature;
  const double m = *std::max_element(out.begin(), out.end());
  double z = 0.0;
  for (double& s : out) {
    s = std::exp(s - m);
    z += s;
  }
  for (double& s : out) s /= z;
  return out;
}

bool transform_forced_on(LossKind distill) { return distill == LossKind::kRankDistil; }

bool transform_irrelevant(LossKind distill) {
  return distill == LossKind::kRD || distill == LossKind::kPairLog;
}

LossResult combined_loss(std::optional<std::span<const double>> relevance,
                         std::optional<std::span<const double>> teacher_labels,
                         std::span<const double> scores, double alpha, LossKind relevance_loss,
                         std::optional<LossKind> distill_loss, const LossParams& params) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0,1]");
  if (alpha > 0.0 && !relevance)
    throw std::invalid_argument("alpha > 0 requires relevance labels");
  if (alpha < 1.0 && !distill_loss)
    throw std::invalid_argument("alpha < 1 requires a distillation loss");
  if (alpha < 1.0 && !teacher_labels)
    throw std::invalid_argument("alpha < 1 requires teacher labels");

  if (alpha == 1.0) return eval_list_loss(relevance_loss, *relevance, scores, params);
  if (alpha == 0.0) return eval_list_loss(*distill_loss, *teacher_labels, scores, params);

  const LossResult rel = eval_list_loss(relevance_loss, *relevance, scores, params);
  const LossResult dis = eval_list_loss(*distill_loss, *teacher_labels, scores, params);
  LossResult out;
  out.value = alpha * rel.value + (1.0 - alpha) * dis.value;
  out.gradient.resize(scores.size());
  for (size_t i = 0; i < scores.size(); ++i)
    out.gradient[i] = alpha * rel.gradient[i] + (1.0 - alpha) * dis.gradient[i];
  return out;
}

}  // namespace rdkit
