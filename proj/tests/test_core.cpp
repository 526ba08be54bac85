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
#include <doctest.h>

#include <stdexcept>

#include "rdkit/core.hpp"

using namespace rdkit;

namespace {

RankList make_list(const std::string& qid, size_t n) {
  RankList rl;
  rl.query_id = qid;
  for (size_t i = 0; i < n; ++i) rl.doc_ids.push_back("d" + std::to_string(i));
  rl.relevance = std::vector<double>(n, 0.0);
  (*rl.relevance)[0] = 1.0;
  return rl;
}

Dataset two_list_dataset() {
  Dataset ds;
  ds.lists.push_back(make_list("q1", 3));
  ds.lists.push_back(make_list("q2", 2));
  return ds;
}

}  // namespace

TEST_CASE("validate_dataset accepts a well-formed dataset") {
  CHECK(validate_dataset(two_list_dataset()).empty());
}

TEST_CASE("validate_dataset flags a length mismatch") {
  Dataset ds = two_list_dataset();
  ds.lists[0].relevance = std::vector<double>{1.0, 0.0};  // 3 docs, 2 labels
  const auto v = validate_dataset(ds);
  REQUIRE(v.size() == 1);
  CHECK(v[0].query_id == "q1");
  CHECK(v[0].field == "relevance");
}

TEST_CASE("validate_dataset flags duplicate doc ids") {
  Dataset ds = two_list_dataset();
  ds.lists[1].doc_ids[1] = ds.lists[1].doc_ids[0];
  const auto v = validate_dataset(ds);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "doc_ids");
}

TEST_CASE("validate_dataset flags missing labels, bad relevance, duplicate queries") {
  Dataset ds = two_list_dataset();
  ds.lists[0].relevance.reset();  // neither label kind present
  ds.lists[1].query_id = "q1";
  (*ds.lists[1].relevance)[0] = -1.0;
  const auto v = validate_dataset(ds);
  CHECK(v.size() == 3);
}

TEST_CASE("validate_dataset is idempotent and side-effect free") {
  Dataset ds = two_list_dataset();
  ds.lists[0].doc_ids.pop_back();  // length mismatch with features absent but labels present
  const auto first = validate_dataset(ds);
  const auto second = validate_dataset(ds);
  CHECK(first.size() == second.size());
}

TEST_CASE("derive_task_constraints forces alpha 0 for zeroshot transfer") {
  DistillConfig cfg;
  cfg.distill_loss = LossKind::kSoftmax;
  cfg.alpha = 0.5;
  const DistillConfig out = derive_task_constraints(TaskKind::kT3TransferZeroshot, cfg);
  CHECK(out.alpha == 0.0);
  CHECK(out.distill_loss == LossKind::kSoftmax);

  // Idempotent: a second application is a no-op.
  const DistillConfig again = derive_task_constraints(TaskKind::kT3TransferZeroshot, out);
  CHECK(again.alpha == 0.0);
}

TEST_CASE("derive_task_constraints passes T1 through unchanged") {
  DistillConfig cfg;
  cfg.distill_loss = LossKind::kSoftmax;
  cfg.alpha = 0.5;
  const DistillConfig out = derive_task_constraints(TaskKind::kT1InDomain, cfg);
  CHECK(out.alpha == 0.5);
}

TEST_CASE("derive_task_constraints rejects RD under zeroshot") {
  DistillConfig cfg;
  cfg.distill_loss = LossKind::kRD;
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(derive_task_constraints(TaskKind::kT3TransferZeroshot, cfg),
                  std::invalid_argument);
}

TEST_CASE("DistillConfig validation") {
  DistillConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // no distill loss at alpha < 1
  cfg.distill_loss = LossKind::kMSE;
  CHECK_NOTHROW(cfg.validate());
  cfg.temperature = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("loss kind names round-trip") {
  for (LossKind k : {LossKind::kMSE, LossKind::kPairLog, LossKind::kPairMSE, LossKind::kSoftmax,
                     LossKind::kGumbelNDCG, LossKind::kLambdaLoss, LossKind::kRD,
                     LossKind::kRankDistil})
    CHECK(loss_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(loss_kind_from_string("bogus"), std::invalid_argument);
}
