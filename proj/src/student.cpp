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
#include "rdkit/student.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rdkit/distill.hpp"
#include "rdkit/metrics.hpp"
#include "rdkit/random.hpp"

namespace rdkit {
namespace {

constexpr double kAdagradEps = 1e-7;

struct ValMetrics {
  double ndcg5_relevance = std::numeric_limits<double>::quiet_NaN();
  double ndcg5_teacher = std::numeric_limits<double>::quiet_NaN();
};

ValMetrics eval_validation(const LinearModel& model, const Dataset& val) {
  double rel_sum = 0.0, teach_sum = 0.0;
  size_t rel_n = 0, teach_n = 0;
  for (const RankList& rl : val.lists) {
    const std::vector<double> s = score_list(model, rl);
    if (rl.relevance &&
        std::any_of(rl.relevance->begin(), rl.relevance->end(), [](double y) { return y > 0; })) {
      rel_sum += ndcg_at_k(*rl.relevance, s, 5);
      rel_n += 1;
    }
    if (rl.teacher_scores) {
      // Raw teacher scores as identity gains; lists whose ideal DCG is not
      // positive carry no usable ordering signal and are skipped.
      const auto v = ndcg_identity_gain_at_k(*rl.teacher_scores, s, 5);
      if (v) {
        teach_sum += *v;
        teach_n += 1;
      }
    }
  }
  ValMetrics out;
  if (rel_n > 0) out.ndcg5_relevance = 100.0 * rel_sum / rel_n;
  if (teach_n > 0) out.ndcg5_teacher = 100.0 * teach_sum / teach_n;
  return out;
}

}  // namespace

LinearModel LinearModel::zeros(size_t dim) {
  LinearModel m;
  m.weights.assign(dim, 0.0);
  m.bias = 0.0;
  m.adagrad_accum.assign(dim + 1, 0.0);
  return m;
}

std::vector<double> score_list(const LinearModel& model, const RankList& rl) {
  if (!rl.has_features())
    throw std::invalid_argument("list " + rl.query_id + " has no features to score");
  if (rl.features.cols != model.dim())
    throw std::invalid_argument("feature dimension mismatch for list " + rl.query_id);
  std::vector<double> s(rl.size());
  for (size_t i = 0; i < rl.size(); ++i) {
    const double* x = rl.features.row(i);
    double v = model.bias;
    for (size_t f = 0; f < model.dim(); ++f) v += model.weights[f] * x[f];
    s[i] = v;
  }
  return s;
}

LinearModel adagrad_step(const LinearModel& model, std::span<const double> gradient,
                         double learning_rate) {
  const size_t d = model.dim();
  if (gradient.size() != d + 1)
    throw std::invalid_argument("gradient must have d + 1 entries (weights then bias)");
  for (double g : gradient)
    if (!std::isfinite(g)) throw std::runtime_error("training diverged: non-finite gradient");

  LinearModel out = model;
  for (size_t i = 0; i <= d; ++i) {
    const double g = gradient[i];
    out.adagrad_accum[i] += g * g;
    const double update = learning_rate * g / (std::sqrt(out.adagrad_accum[i]) + kAdagradEps);
    if (i < d)
      out.weights[i] -= update;
    else
      out.bias -= update;
  }
  return out;
}

TrainResult train(const Dataset& train_ds, const Dataset& val_ds, const DistillConfig& cfg) {
  cfg.validate();
  if (train_ds.lists.empty()) throw std::invalid_argument("empty training dataset");
  if (train_ds.feature_dim == 0)
    throw std::invalid_argument("training dataset has no features; the student is linear");

  const size_t d = train_ds.feature_dim;
  const bool use_rel = cfg.alpha > 0.0;
  const bool use_teacher = cfg.alpha < 1.0 && cfg.distill_loss.has_value();

  TrainResult result;
  result.best_val_ndcg5 = -std::numeric_limits<double>::infinity();

  TransformSpec transform;
  transform.temperature = cfg.temperature;
  transform.enabled =
      use_teacher && (cfg.transform_on || transform_forced_on(*cfg.distill_loss));

  // Per-list teacher labels are static for a fixed config; build them once.
  const size_t n_lists = train_ds.lists.size();
  std::vector<std::vector<double>> teacher_labels;
  if (use_teacher) {
    teacher_labels.resize(n_lists);
    for (size_t i = 0; i < n_lists; ++i) {
      const RankList& rl = train_ds.lists[i];
      if (!rl.teacher_scores)
        throw std::invalid_argument("alpha < 1 needs teacher scores; list " + rl.query_id +
                                    " has none");
      teacher_labels[i] = transform_teacher_scores(*rl.teacher_scores, transform);
      result.teacher_reads += 1;
    }
  }
  if (use_rel) {
    for (const RankList& rl : train_ds.lists)
      if (!rl.relevance)
        throw std::invalid_argument("alpha > 0 needs relevance labels; list " + rl.query_id +
                                    " has none");
  }

  LinearModel model = LinearModel::zeros(d);
  result.best_model = model;
  result.final_model = model;
  if (cfg.train_steps == 0) return result;

  const int eval_every =
      cfg.eval_every > 0 ? cfg.eval_every : std::max(1, cfg.train_steps / 20);

  // Shuffle-and-cycle over list indices.
  Rng order_rng(derive_seed(cfg.seed, "batch-order"));
  std::vector<size_t> order(n_lists);
  std::iota(order.begin(), order.end(), 0);
  size_t cursor = n_lists;

  std::vector<double> grad(d + 1);
  bool have_eval = false;
  for (int step = 1; step <= cfg.train_steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double batch_loss = 0.0;
    for (int b = 0; b < cfg.batch_lists; ++b) {
      if (cursor == n_lists) {
        order_rng.shuffle(order);
        cursor = 0;
      }
      const size_t li = order[cursor++];
      const RankList& rl = train_ds.lists[li];
      const std::vector<double> s = score_list(model, rl);

      LossParams params;
      params.top_k = std::min<int>(cfg.top_k, static_cast<int>(rl.size()));
      params.num_samples = cfg.num_permutation_samples;
      params.seed = derive_seed(cfg.seed, "loss-draw",
                                static_cast<uint64_t>(step) * cfg.batch_lists + b);

      std::optional<std::span<const double>> rel;
      if (use_rel) {
        rel = std::span<const double>(*rl.relevance);
        result.relevance_reads += 1;
      }
      std::optional<std::span<const double>> teach;
      if (use_teacher) teach = std::span<const double>(teacher_labels[li]);

      const LossResult lr =
          combined_loss(rel, teach, s, cfg.alpha, cfg.relevance_loss, cfg.distill_loss, params);
      batch_loss += lr.value;
      for (size_t i = 0; i < rl.size(); ++i) {
        const double g = lr.gradient[i];
        const double* x = rl.features.row(i);
        for (size_t f = 0; f < d; ++f) grad[f] += g * x[f];
        grad[d] += g;
      }
    }
    batch_loss /= cfg.batch_lists;
    for (double& g : grad) g /= cfg.batch_lists;
    if (!std::isfinite(batch_loss)) throw std::runtime_error("training diverged: non-finite loss");
    model = adagrad_step(model, grad, cfg.learning_rate);

    if ((step % eval_every == 0 || step == cfg.train_steps) && !val_ds.lists.empty()) {
      const ValMetrics vm = eval_validation(model, val_ds);
      result.trace.push_back({step, batch_loss, vm.ndcg5_relevance, vm.ndcg5_teacher});
      if (std::isfinite(vm.ndcg5_relevance) && vm.ndcg5_relevance > result.best_val_ndcg5) {
        result.best_val_ndcg5 = vm.ndcg5_relevance;
        result.best_model = model;
        result.best_step = step;
        have_eval = true;
      }
    }
  }
  result.final_model = model;
  if (!have_eval) {
    result.best_model = model;
    result.best_step = cfg.train_steps;
    result.best_val_ndcg5 = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace rdkit
