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
#include "rdkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rdkit/random.hpp"

namespace rdkit {
namespace {

constexpr double kLn2 = 0.6931471805599453;

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln sigmoid(x), stable for large |x|.
double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

void check_lengths(std::span<const double> labels, std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw std::invalid_argument("labels and scores must have equal length");
  if (labels.empty()) throw std::invalid_argument("list must be non-empty");
}

void check_nonnegative_labels(std::span<const double> labels) {
  for (double y : labels)
    if (!(y >= 0.0)) throw std::invalid_argument("labels must be >= 0 for this loss");
}

double gain(double y) { return std::exp2(y) - 1.0; }

// Ideal DCG at full depth: labels sorted descending, discount 1/log2(1+rank).
double ideal_dcg(std::span<const double> labels) {
  std::vector<double> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double dcg = 0.0;
  for (size_t r = 0; r < sorted.size(); ++r) dcg += gain(sorted[r]) / std::log2(2.0 + r);
  return dcg;
}

void check_simplex(std::span<const double> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("teacher_probs must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("teacher_probs must sum to 1 within 1e-9");
}

void check_prefix(const std::vector<int>& prefix, size_t n) {
  if (prefix.empty()) throw std::invalid_argument("permutation prefix must be non-empty");
  if (prefix.size() > n) throw std::invalid_argument("top_k exceeds list length");
  std::vector<char> seen(n, 0);
  for (int i : prefix) {
    if (i < 0 || static_cast<size_t>(i) >= n)
      throw std::invalid_argument("permutation index out of range");
    if (seen[i]) throw std::invalid_argument("permutation contains repeated indices");
    seen[i] = 1;
  }
}

}  // namespace

std::vector<int> teacher_order_from(std::span<const double> labels) {
  std::vector<int> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return labels[a] > labels[b]; });
  return order;
}

LossResult loss_mse(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  LossResult out;
  out.gradient.assign(scores.size(), 0.0);
  for (size_t i = 0; i < scores.size(); ++i) {
    const double e = scores[i] - labels[i];
    out.value += e * e;
    out.gradient[i] = 2.0 * e;
  }
  return out;
}

LossResult loss_pair_logistic(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  const size_t n = scores.size();
  LossResult out;
  out.gradient.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (!(labels[i] > labels[j])) continue;
      const double d = scores[i] - scores[j];
      out.value -= log_sigmoid(d);
      const double t = 1.0 - sigmoid(d);
      out.gradient[i] -= t;
      out.gradient[j] += t;
    }
  }
  return out;
}

LossResult loss_pair_mse(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  const size_t n = scores.size();
  LossResult out;
  out.gradient.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double e = (scores[i] - scores[j]) - (labels[i] - labels[j]);
      out.value += 2.0 * e * e;  // (i,j) and (j,i) contribute equally
      out.gradient[i] += 4.0 * e;
      out.gradient[j] -= 4.0 * e;
    }
  }
  return out;
}

LossResult loss_softmax(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  const size_t n = scores.size();
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - m);
  const double log_z = m + std::log(z);
  double label_sum = 0.0;
  LossResult out;
  out.gradient.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    out.value += labels[i] * (log_z - scores[i]);
    label_sum += labels[i];
  }
  for (size_t i = 0; i < n; ++i)
    out.gradient[i] = label_sum * (std::exp(scores[i] - m) / z) - labels[i];
  return out;
}

LossResult loss_gumbel_ndcg(std::span<const double> labels, std::span<const double> scores,
                            const NoiseSpec& noise) {
  check_lengths(labels, scores);
  check_nonnegative_labels(labels);
  if (noise.num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  if (!(noise.smoothing_tau > 0.0)) throw std::invalid_argument("smoothing_tau must be > 0");
  if (!(noise.gumbel_scale >= 0.0)) throw std::invalid_argument("gumbel_scale must be >= 0");
  const double idcg = ideal_dcg(labels);
  if (idcg <= 0.0)
    throw std::invalid_argument("ideal DCG is undefined: labels contain no positive entry");

  const size_t n = scores.size();
  const bool noiseless = noise.gumbel_scale == 0.0;
  const int samples = noiseless ? 1 : noise.num_samples;
  Rng rng(noise.seed);

  LossResult out;
  out.gradient.assign(n, 0.0);
  std::vector<double> perturbed(n), ranks(n), dv_drank(n);
  for (int t = 0; t < samples; ++t) {
    for (size_t i = 0; i < n; ++i)
      perturbed[i] = scores[i] + (noiseless ? 0.0 : rng.next_gumbel(noise.gumbel_scale));
    for (size_t i = 0; i < n; ++i) {
      double r = 1.0;
      for (size_t j = 0; j < n; ++j)
        if (j != i) r += sigmoid((perturbed[j] - perturbed[i]) / noise.smoothing_tau);
      ranks[i] = r;
    }
    for (size_t i = 0; i < n; ++i) {
      const double lg = std::log2(1.0 + ranks[i]);
      out.value -= gain(labels[i]) / lg / idcg;
      dv_drank[i] = gain(labels[i]) / (idcg * kLn2 * (1.0 + ranks[i]) * lg * lg);
    }
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double sg = sigmoid((perturbed[j] - perturbed[i]) / noise.smoothing_tau);
        const double d = sg * (1.0 - sg) / noise.smoothing_tau;
        out.gradient[j] += dv_drank[i] * d;
        out.gradient[i] -= dv_drank[i] * d;
      }
    }
  }
  out.value /= samples;
  for (double& g : out.gradient) g /= samples;
  return out;
}

LossResult loss_lambda(std::span<const double> labels, std::span<const double> scores) {
  check_lengths(labels, scores);
  check_nonnegative_labels(labels);
  const double idcg = ideal_dcg(labels);
  if (idcg <= 0.0)
    throw std::invalid_argument("ideal DCG is undefined: labels contain no positive entry");

  const size_t n = scores.size();
  // Rank of each item under the current scores, ties broken by ascending index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  std::vector<double> discount(n);
  for (size_t r = 0; r < n; ++r) discount[order[r]] = 1.0 / std::log2(2.0 + r);

  LossResult out;
  out.gradient.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (!(labels[i] > labels[j])) continue;
      const double delta =
          std::abs(gain(labels[i]) - gain(labels[j])) * std::abs(discount[i] - discount[j]) / idcg;
      const double d = scores[i] - scores[j];
      out.value -= delta * log_sigmoid(d);
      const double t = delta * (1.0 - sigmoid(d));
      out.gradient[i] -= t;
      out.gradient[j] += t;
    }
  }
  return out;
}

LossResult loss_rd(const std::vector<int>& teacher_order, std::span<const double> scores,
                   int top_k) {
  check_prefix(teacher_order, scores.size());
  if (teacher_order.size() != scores.size())
    throw std::invalid_argument("teacher_order must be a full permutation");
  if (top_k < 1 || static_cast<size_t>(top_k) > scores.size())
    throw std::invalid_argument("top_k must be in [1, n]");
  LossResult out;
  out.gradient.assign(scores.size(), 0.0);
  for (int r = 0; r < top_k; ++r) {
    const int i = teacher_order[r];
    out.value -= log_sigmoid(scores[i]);
    out.gradient[i] = -(1.0 - sigmoid(scores[i]));
  }
  return out;
}

double plackett_luce_log_prob(const std::vector<int>& perm_prefix,
                              std::span<const double> scores) {
  const size_t n = scores.size();
  check_prefix(perm_prefix, n);
  const size_t k = perm_prefix.size();

  std::vector<char> remaining(n, 1);
  double log_p = -std::lgamma(static_cast<double>(n - k) + 1.0);
  for (size_t j = 0; j < k; ++j) {
    double m = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
      if (remaining[i]) m = std::max(m, scores[i]);
    double z = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (remaining[i]) z += std::exp(scores[i] - m);
    log_p += scores[perm_prefix[j]] - (m + std::log(z));
    remaining[perm_prefix[j]] = 0;
  }
  return log_p;
}

std::vector<int> sample_top_k_permutation(std::span<const double> teacher_probs, int top_k,
                                          uint64_t seed) {
  check_simplex(teacher_probs);
  const size_t n = teacher_probs.size();
  if (top_k < 1 || static_cast<size_t>(top_k) > n)
    throw std::invalid_argument("top_k must be in [1, n]");

  Rng rng(seed);
  std::vector<char> alive(n, 1);
  double mass = std::accumulate(teacher_probs.begin(), teacher_probs.end(), 0.0);
  std::vector<int> out;
  out.reserve(top_k);
  for (int j = 0; j < top_k; ++j) {
    size_t pick = n;
    if (mass <= 1e-300) {
      // Degenerate remaining mass: renormalize to uniform over survivors.
      size_t alive_count = 0;
      for (size_t i = 0; i < n; ++i) alive_count += alive[i];
      uint64_t target = rng.next_below(alive_count);
      for (size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        if (target == 0) {
          pick = i;
          break;
        }
        --target;
      }
    } else {
      const double u = rng.next_double() * mass;
      double cum = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        cum += teacher_probs[i];
        pick = i;  // last survivor is the fallback against rounding
        if (cum > u) break;
      }
    }
    alive[pick] = 0;
    mass -= teacher_probs[pick];
    out.push_back(static_cast<int>(pick));
  }
  return out;
}

LossResult loss_rankdistil(std::span<const double> teacher_probs,
                           std::span<const double> scores, int top_k, int num_samples,
                           uint64_t seed) {
  check_lengths(teacher_probs, scores);
  check_simplex(teacher_probs);
  const size_t n = scores.size();
  if (top_k < 1 || static_cast<size_t>(top_k) > n)
    throw std::invalid_argument("top_k must be in [1, n]");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");

  LossResult out;
  out.gradient.assign(n, 0.0);
  std::vector<char> remaining(n);
  for (int t = 0; t < num_samples; ++t) {
    const std::vector<int> perm =
        sample_top_k_permutation(teacher_probs, top_k, derive_seed(seed, "rankdistil-perm", t));
    out.value -= plackett_luce_log_prob(perm, scores);
    // d(-ln P)/ds_m = sum_j [ softmax over remaining at step j ](m) - [m == pi(j)]
    std::fill(remaining.begin(), remaining.end(), 1);
    for (int j = 0; j < top_k; ++j) {
      double m = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < n; ++i)
        if (remaining[i]) m = std::max(m, scores[i]);
      double z = 0.0;
      for (size_t i = 0; i < n; ++i)
        if (remaining[i]) z += std::exp(scores[i] - m);
      for (size_t i = 0; i < n; ++i)
        if (remaining[i]) out.gradient[i] += std::exp(scores[i] - m) / z;
      out.gradient[perm[j]] -= 1.0;
      remaining[perm[j]] = 0;
    }
  }
  out.value /= num_samples;
  for (double& g : out.gradient) g /= num_samples;
  return out;
}

LossResult eval_list_loss(LossKind kind, std::span<const double> labels,
                          std::span<const double> scores, const LossParams& params) {
  switch (kind) {
    case LossKind::kMSE:
      return loss_mse(labels, scores);
    case LossKind::kPairLog:
      return loss_pair_logistic(labels, scores);
    case LossKind::kPairMSE:
      return loss_pair_mse(labels, scores);
    case LossKind::kSoftmax:
      return loss_softmax(labels, scores);
    case LossKind::kGumbelNDCG: {
      NoiseSpec noise;
      noise.num_samples = params.num_samples;
      noise.gumbel_scale = params.gumbel_scale;
      noise.smoothing_tau = params.smoothing_tau;
      noise.seed = params.seed;
      return loss_gumbel_ndcg(labels, scores, noise);
    }
    case LossKind::kLambdaLoss:
      return loss_lambda(labels, scores);
    case LossKind::kRD:
      return loss_rd(teacher_order_from(labels), scores, params.top_k);
    case LossKind::kRankDistil:
      return loss_rankdistil(labels, scores, params.top_k, params.num_samples, params.seed);
  }
  throw std::invalid_argument("unknown loss kind");
}

}  // namespace rdkit
