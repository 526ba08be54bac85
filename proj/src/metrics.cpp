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
#include "rdkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rdkit {
namespace {

// Descending scores, ties by ascending index.
std::vector<int> ranked_order(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

size_t effective_cutoff(int k, size_t n) {
  if (k <= 0) return n;
  return std::min(static_cast<size_t>(k), n);
}

}  // namespace

const char* to_string(EmptyQueryPolicy policy) {
  switch (policy) {
    case EmptyQueryPolicy::kPerfect: return "perfect";
    case EmptyQueryPolicy::kZero: return "zero";
    case EmptyQueryPolicy::kIgnore: return "ignore";
  }
  return "?";
}

EmptyQueryPolicy policy_from_string(const std::string& name) {
  if (name == "perfect") return EmptyQueryPolicy::kPerfect;
  if (name == "zero") return EmptyQueryPolicy::kZero;
  if (name == "ignore") return EmptyQueryPolicy::kIgnore;
  throw std::invalid_argument("unknown empty-query policy: " + name);
}

double ndcg_at_k(std::span<const double> relevance, std::span<const double> scores, int k) {
  if (relevance.size() != scores.size())
    throw std::invalid_argument("relevance and scores must have equal length");
  if (relevance.empty()) throw std::invalid_argument("list must be non-empty");
  const size_t cut = effective_cutoff(k, scores.size());

  const std::vector<int> order = ranked_order(scores);
  double dcg = 0.0;
  for (size_t r = 0; r < cut; ++r)
    dcg += (std::exp2(relevance[order[r]]) - 1.0) / std::log2(2.0 + r);

  std::vector<double> sorted(relevance.begin(), relevance.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double idcg = 0.0;
  for (size_t r = 0; r < cut; ++r) idcg += (std::exp2(sorted[r]) - 1.0) / std::log2(2.0 + r);

  if (idcg <= 0.0) return 0.0;
  return dcg / idcg;
}

std::optional<double> ndcg_identity_gain_at_k(std::span<const double> gains,
                                              std::span<const double> scores, int k) {
  if (gains.size() != scores.size())
    throw std::invalid_argument("gains and scores must have equal length");
  if (gains.empty()) throw std::invalid_argument("list must be non-empty");
  const size_t cut = effective_cutoff(k, scores.size());

  std::vector<double> sorted(gains.begin(), gains.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double idcg = 0.0;
  for (size_t r = 0; r < cut; ++r) idcg += sorted[r] / std::log2(2.0 + r);
  if (!(idcg > 0.0)) return std::nullopt;

  const std::vector<int> order = ranked_order(scores);
  double dcg = 0.0;
  for (size_t r = 0; r < cut; ++r) dcg += gains[order[r]] / std::log2(2.0 + r);
  return dcg / idcg;
}

double mrr_at_k(std::span<const double> binary_relevance, std::span<const double> scores, int k) {
  if (binary_relevance.size() != scores.size())
    throw std::invalid_argument("relevance and scores must have equal length");
  if (binary_relevance.empty()) throw std::invalid_argument("list must be non-empty");
  const size_t cut = effective_cutoff(k, scores.size());
  const std::vector<int> order = ranked_order(scores);
  for (size_t r = 0; r < cut; ++r)
    if (binary_relevance[order[r]] >= 0.5) return 1.0 / (1.0 + r);
  return 0.0;
}

std::vector<ScoredList> scored_lists_from(const Dataset& ds) {
  std::vector<ScoredList> out;
  out.reserve(ds.lists.size());
  for (const RankList& rl : ds.lists) {
    if (!rl.teacher_scores)
      throw std::invalid_argument("list " + rl.query_id + " has no scores to evaluate");
    ScoredList sl;
    sl.query_id = rl.query_id;
    sl.doc_ids = rl.doc_ids;
    sl.scores = *rl.teacher_scores;
    sl.labels = rl.relevance ? *rl.relevance : std::vector<double>(rl.size(), 0.0);
    out.push_back(std::move(sl));
  }
  return out;
}

EvalReport evaluate(const std::vector<ScoredList>& lists, const MetricSpec& spec) {
  EvalReport report;
  double sum = 0.0;
  for (const ScoredList& sl : lists) {
    const size_t n = sl.doc_ids.size();
    if (n == 0 || sl.labels.size() != n || sl.scores.size() != n)
      throw std::invalid_argument("malformed scored list for query " + sl.query_id);

    // Ties rank by ascending doc_id; reorder once so downstream index
    // tie-breaking reproduces that order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (sl.scores[a] != sl.scores[b]) return sl.scores[a] > sl.scores[b];
      return sl.doc_ids[a] < sl.doc_ids[b];
    });
    std::vector<double> labels(n), scores(n);
    for (size_t r = 0; r < n; ++r) {
      labels[r] = sl.labels[order[r]];
      scores[r] = static_cast<double>(n - r);  // encodes the final ranking
    }

    if (spec.kind == MetricKind::kMRR) {
      if (spec.binarize_threshold) {
        const double thr = *spec.binarize_threshold;
        for (double& y : labels) y = (y >= thr) ? 1.0 : 0.0;
      } else {
        for (double y : labels)
          if (y != 0.0 && y != 1.0)
            throw std::invalid_argument(
                "MRR requires binary labels; set a binarize threshold for graded data");
      }
    }

    const bool has_positive =
        std::any_of(labels.begin(), labels.end(), [](double y) { return y > 0.0; });
    double value = 0.0;
    if (!has_positive) {
      switch (spec.policy) {
        case EmptyQueryPolicy::kPerfect: value = 1.0; break;
        case EmptyQueryPolicy::kZero: value = 0.0; break;
        case EmptyQueryPolicy::kIgnore: report.dropped_count += 1; continue;
      }
    } else {
      value = spec.kind == MetricKind::kMRR ? mrr_at_k(labels, scores, spec.cutoff)
                                            : ndcg_at_k(labels, scores, spec.cutoff);
    }
    report.per_query.emplace_back(sl.query_id, value);
    sum += value;
    report.retained_count += 1;
  }
  report.aggregate = report.retained_count == 0 ? 0.0 : 100.0 * sum / report.retained_count;
  return report;
}

}  // namespace rdkit
