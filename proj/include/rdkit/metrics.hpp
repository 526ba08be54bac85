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
#ifndef RDKIT_METRICS_HPP_
#define RDKIT_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdkit/core.hpp"

namespace rdkit {

enum class MetricKind { kNDCG, kMRR };

/*! \brief What to do with queries that have no relevant document. */
enum class EmptyQueryPolicy { kPerfect, kZero, kIgnore };

const char* to_string(EmptyQueryPolicy policy);
EmptyQueryPolicy policy_from_string(const std::string& name);

/*!
 * \brief Pins every evaluation convention: metric, cutoff, empty-query
 *        handling, and the binarization threshold MRR needs on graded labels.
 */
struct MetricSpec {
  MetricKind kind = MetricKind::kNDCG;
  int cutoff = 0;  // <= 0 means unbounded
  EmptyQueryPolicy policy = EmptyQueryPolicy::kIgnore;
  std::optional<double> binarize_threshold;
};

/*!
 * \brief NDCG@k with gain 2^y - 1 and discount 1/log2(1 + rank).
 *
 * Ranks come from sorting scores descending with ascending-index tie break;
 * the normalizer is the DCG of the label-sorted ideal ordering. k <= 0 means
 * no cutoff. Returns 0 when the ideal DCG is 0 (callers apply the
 * empty-query policy before getting here).
 */
double ndcg_at_k(std::span<const double> relevance, std::span<const double> scores, int k);

/*!
 * \brief NDCG@k with identity gains, for real-valued grading signals such as
 *        raw teacher scores. Empty when the ideal DCG is not positive.
 */
std::optional<double> ndcg_identity_gain_at_k(std::span<const double> gains,
                                              std::span<const double> scores, int k);

/*! \brief Reciprocal rank of the first relevant item within the cutoff, else 0. */
double mrr_at_k(std::span<const double> binary_relevance, std::span<const double> scores, int k);

/*! \brief One query's judged documents and system scores, joined upstream. */
struct ScoredList {
  std::string query_id;
  std::vector<std::string> doc_ids;
  std::vector<double> labels;
  std::vector<double> scores;
};

struct EvalReport {
  std::vector<std::pair<std::string, double>> per_query;  // retained queries, input order
  double aggregate = 0.0;                                 // 100 * mean over retained
  size_t retained_count = 0;
  size_t dropped_count = 0;
  std::vector<std::string> warnings;
};

/*!
 * \brief Evaluates scored lists under the spec's conventions.
 *
 * Score ties rank by ascending doc_id. MRR binarizes graded labels at the
 * configured threshold (label >= threshold -> 1). Queries without a positive
 * label score 1 / 0 / are dropped according to the policy. The aggregate is
 * the mean over retained queries, times 100.
 */
EvalReport evaluate(const std::vector<ScoredList>& lists, const MetricSpec& spec);

/*!
 * \brief Views a joined run/qrel dataset as scored lists: teacher_scores are
 *        the system scores, relevance labels are the judgments.
 */
std::vector<ScoredList> scored_lists_from(const Dataset& ds);

}  // namespace rdkit

#endif  // RDKIT_METRICS_HPP_
