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
#include "rdkit/core.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rdkit {

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kMSE: return "MSE";
    case LossKind::kPairLog: return "PairLog";
    case LossKind::kPairMSE: return "PairMSE";
    case LossKind::kSoftmax: return "Softmax";
    case LossKind::kGumbelNDCG: return "GumbelNDCG";
    case LossKind::kLambdaLoss: return "LambdaLoss";
    case LossKind::kRD: return "RD";
    case LossKind::kRankDistil: return "RankDistil";
  }
  return "?";
}

LossKind loss_kind_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "mse") return LossKind::kMSE;
  if (s == "pairlog") return LossKind::kPairLog;
  if (s == "pairmse") return LossKind::kPairMSE;
  if (s == "softmax") return LossKind::kSoftmax;
  if (s == "gumbelndcg") return LossKind::kGumbelNDCG;
  if (s == "lambdaloss") return LossKind::kLambdaLoss;
  if (s == "rd") return LossKind::kRD;
  if (s == "rankdistil") return LossKind::kRankDistil;
  throw std::invalid_argument("unknown loss: " + name);
}

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kT1InDomain: return "t1";
    case TaskKind::kT2Transfer: return "t2";
    case TaskKind::kT3TransferZeroshot: return "t3";
    case TaskKind::kT4Tabular: return "t4";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "t1" || name == "T1") return TaskKind::kT1InDomain;
  if (name == "t2" || name == "T2") return TaskKind::kT2Transfer;
  if (name == "t3" || name == "T3") return TaskKind::kT3TransferZeroshot;
  if (name == "t4" || name == "T4") return TaskKind::kT4Tabular;
  throw std::invalid_argument("unknown task: " + name);
}

void DistillConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0,1]");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
  if (num_permutation_samples < 1)
    throw std::invalid_argument("num_permutation_samples must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_lists < 1) throw std::invalid_argument("batch_lists must be >= 1");
  if (train_steps < 0) throw std::invalid_argument("train_steps must be >= 0");
  if (eval_every < 0) throw std::invalid_argument("eval_every must be >= 0");
  if (relevance_loss != LossKind::kSoftmax && relevance_loss != LossKind::kLambdaLoss)
    throw std::invalid_argument("relevance_loss must be Softmax or LambdaLoss");
  if (!distill_loss && alpha != 1.0)
    throw std::invalid_argument("relevance-only config requires alpha = 1");
}

std::vector<Violation> validate_dataset(const Dataset& ds) {
  std::vector<Violation> out;
  std::unordered_set<std::string> seen_queries;
  for (const RankList& rl : ds.lists) {
    const size_t n = rl.doc_ids.size();
    if (!seen_queries.insert(rl.query_id).second)
      out.push_back({rl.query_id, "query_id", "duplicate query_id in dataset"});
    if (n == 0) {
      out.push_back({rl.query_id, "doc_ids", "list is empty"});
      continue;
    }
    if (rl.has_features()) {
      if (rl.features.rows != n)
        out.push_back({rl.query_id, "features", "feature row count does not match doc count"});
      if (rl.features.cols != ds.feature_dim)
        out.push_back({rl.query_id, "features", "feature column count does not match feature_dim"});
    }
    if (rl.relevance && rl.relevance->size() != n)
      out.push_back({rl.query_id, "relevance", "relevance length does not match doc count"});
    if (rl.teacher_scores && rl.teacher_scores->size() != n)
      out.push_back({rl.query_id, "teacher_scores", "teacher score length does not match doc count"});
    if (!rl.relevance && !rl.teacher_scores)
      out.push_back({rl.query_id, "labels", "neither relevance nor teacher_scores present"});
    if (rl.relevance) {
      for (double y : *rl.relevance) {
        if (!std::isfinite(y) || y < 0.0) {
          out.push_back({rl.query_id, "relevance", "relevance values must be finite and >= 0"});
          break;
        }
      }
    }
    std::unordered_set<std::string> seen_docs;
    for (const std::string& d : rl.doc_ids) {
      if (!seen_docs.insert(d).second) {
        out.push_back({rl.query_id, "doc_ids", "duplicate doc_id " + d});
        break;
      }
    }
  }
  return out;
}

DistillConfig derive_task_constraints(TaskKind kind, const DistillConfig& cfg) {
  cfg.validate();
  if (kind != TaskKind::kT3TransferZeroshot) return cfg;
  if (!cfg.distill_loss)
    throw std::invalid_argument(
        "incompatible configuration: zeroshot task requires a distillation loss");
  if (*cfg.distill_loss == LossKind::kRD)
    throw std::invalid_argument(
        "incompatible configuration: RD requires relevance labels and cannot run zeroshot");
  DistillConfig out = cfg;
  out.alpha = 0.0;
  return out;
}

}  // namespace rdkit
