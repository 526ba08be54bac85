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
#ifndef RDKIT_DATA_IO_HPP_
#define RDKIT_DATA_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rdkit/core.hpp"

namespace rdkit {

/*!
 * \brief One line of a TREC run file:
 *        <query_id> <placeholder> <doc_id> <rank> <score> <tag>
 *
 * The placeholder and tag carry no information but are preserved verbatim so
 * files round-trip byte for byte.
 */
struct TrecRunRecord {
  std::string query_id;
  std::string placeholder = "Q0";
  std::string doc_id;
  int rank = 1;
  double score = 0.0;
  std::string tag = "rdkit";

  bool operator==(const TrecRunRecord&) const = default;
};

/*! \brief One line of a TREC qrel file: <query_id> <placeholder> <doc_id> <label>. */
struct TrecQrelRecord {
  std::string query_id;
  std::string placeholder = "0";
  std::string doc_id;
  double label = 0.0;

  bool operator==(const TrecQrelRecord&) const = default;
};

/*! \brief Pooled distribution summary of teacher scores. */
struct ScoreStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population standard deviation
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;
};

std::vector<TrecRunRecord> parse_trec_run(std::istream& in);
void write_trec_run(std::ostream& out, const std::vector<TrecRunRecord>& records);
std::vector<TrecQrelRecord> parse_qrels(std::istream& in);
void write_qrels(std::ostream& out, const std::vector<TrecQrelRecord>& records);

struct JoinResult {
  Dataset dataset;
  size_t dropped_qrel_only_docs = 0;       // judged documents missing from the run
  std::vector<std::string> unjudged_queries;  // run queries absent from the qrels
};

/*!
 * \brief Joins a run and a qrel file on (query_id, doc_id).
 *
 * Documents present in the run form each list, in run order; qrel labels
 * attach by doc_id and default to 0 when unjudged. Documents that appear only
 * in the qrels are dropped and counted. Duplicate (query, doc) pairs in the
 * run are an error.
 */
JoinResult join_run_qrels(const std::vector<TrecRunRecord>& run,
                          const std::vector<TrecQrelRecord>& qrels);

/*!
 * \brief Parses ranking-LibSVM text: "<label> qid:<q> <fid>:<val> ... # comment".
 *
 * Consecutive lines with the same qid form one list; features are 1-based and
 * sparse, densified to the maximum feature id seen in the stream. Document
 * ids are synthesized as d0000, d0001, ... per list, matching the convention
 * of run files written by this toolkit.
 */
Dataset parse_libsvm_ranking(std::istream& in);

void write_libsvm_ranking(std::ostream& out, const Dataset& ds);

/*!
 * \brief Attaches teacher scores from a run file to an existing feature
 *        dataset by (query_id, doc_id). Every document of a covered query
 *        must receive a score; queries absent from the run stay untouched.
 */
void attach_teacher_scores(Dataset& ds, const std::vector<TrecRunRecord>& run);

struct SyntheticSpec {
  int n_queries = 100;
  int list_len_min = 10;
  int list_len_max = 20;
  int feature_dim = 10;
  double teacher_quality = 0.9;  // 1 = oracle teacher, 0 = random teacher
  double label_sparsity = 0.1;   // fraction of positive documents per list
  uint64_t seed = 0;
};

/*!
 * \brief Deterministic synthetic ranking data.
 *
 * Features are i.i.d. standard normal; the true utility is the fixed
 * nonlinearity u(x) = x0*x1 + x2; relevance labels grade the top
 * label_sparsity fraction of each list by utility; teacher scores are
 * teacher_quality * u + (1 - teacher_quality) * noise. A linear student can
 * capture the x2 term but not the interaction, which is the headroom the
 * teacher knows about.
 */
Dataset generate_synthetic(const SyntheticSpec& spec);

/*!
 * \brief Pooled teacher-score statistics over every document of every list.
 *
 * Percentiles interpolate linearly between order statistics.
 */
ScoreStats teacher_score_stats(const Dataset& ds);

/*! \brief Run records for a dataset's scores, ranks recomputed per query. */
std::vector<TrecRunRecord> run_records_from(const Dataset& ds, const std::string& tag);
std::vector<TrecQrelRecord> qrel_records_from(const Dataset& ds);

// File wrappers; parse errors carry the file name.
std::vector<TrecRunRecord> load_trec_run(const std::string& path);
std::vector<TrecQrelRecord> load_qrels(const std::string& path);
Dataset load_libsvm_ranking(const std::string& path);

}  // namespace rdkit

#endif  // RDKIT_DATA_IO_HPP_
