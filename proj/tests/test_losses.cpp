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

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "rdkit/losses.hpp"
#include "rdkit/random.hpp"

using namespace rdkit;

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::vector<double> random_scores(Rng& rng, size_t n, double lo = -2.0, double hi = 2.0) {
  std::vector<double> s(n);
  for (double& v : s) v = lo + (hi - lo) * rng.next_double();
  return s;
}

// Nonnegative graded labels with at least one positive entry.
std::vector<double> random_labels(Rng& rng, size_t n) {
  std::vector<double> y(n);
  for (double& v : y) v = static_cast<double>(rng.next_below(4));
  y[rng.next_below(n)] = 1.0 + static_cast<double>(rng.next_below(3));
  return y;
}

std::vector<double> random_simplex(Rng& rng, size_t n) {
  std::vector<double> p = random_scores(rng, n);
  double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

TEST_CASE("loss_mse examples") {
  const LossResult zero = loss_mse(std::vector<double>{1, 0}, std::vector<double>{1, 0});
  CHECK(zero.value == 0.0);
  CHECK(zero.gradient == std::vector<double>{0, 0});

  const LossResult one = loss_mse(std::vector<double>{1, 0}, std::vector<double>{0, 0});
  CHECK(one.value == doctest::Approx(1.0));
  CHECK(one.gradient[0] == doctest::Approx(-2.0));
  CHECK(one.gradient[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(loss_mse(std::vector<double>{1}, std::vector<double>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("loss_mse gradient matches finite differences") {
  Rng rng(11);
  const std::vector<double> y = random_scores(rng, 5);
  const std::vector<double> s = random_scores(rng, 5);
  const LossResult r = loss_mse(y, s);
  const auto fd = oracles::finite_difference(
      [&](const std::vector<double>& v) { return loss_mse(y, v).value; }, s);
  CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-6);
}

TEST_CASE("loss_pair_logistic examples") {
  CHECK(loss_pair_logistic(std::vector<double>{1, 0}, std::vector<double>{0, 0}).value ==
        doctest::Approx(kLn2));

  const LossResult flat = loss_pair_logistic(std::vector<double>{1, 1}, std::vector<double>{3, -1});
  CHECK(flat.value == 0.0);
  CHECK(flat.gradient == std::vector<double>{0, 0});

  const std::vector<double> y{2, 1, 0};
  const std::vector<double> s{0.3, -0.1, 0.5};
  const LossResult r = loss_pair_logistic(y, s);
  CHECK(r.value == doctest::Approx(oracles::pair_logistic_value(y, s)).epsilon(1e-12));
  const auto fd = oracles::finite_difference(
      [&](const std::vector<double>& v) { return loss_pair_logistic(y, v).value; }, s);
  CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-6);
}

TEST_CASE("loss_pair_mse examples") {
  CHECK(loss_pair_mse(std::vector<double>{1, 0}, std::vector<double>{1, 0}).value == 0.0);
  // Two ordered pairs, each off by 1.
  CHECK(loss_pair_mse(std::vector<double>{1, 0}, std::vector<double>{0, 0}).value ==
        doctest::Approx(2.0));

  Rng rng(5);
  const std::vector<double> y = random_scores(rng, 6);
  std::vector<double> s = random_scores(rng, 6);
  const double base = loss_pair_mse(y, s).value;
  for (double& v : s) v += 1.7;
  CHECK(std::abs(loss_pair_mse(y, s).value - base) < 1e-9);
}

TEST_CASE("loss_softmax examples") {
  CHECK(loss_softmax(std::vector<double>{1, 0}, std::vector<double>{0, 0}).value ==
        doctest::Approx(kLn2));
  for (double c : {-3.0, 0.0, 7.5})
    CHECK(loss_softmax(std::vector<double>{1, 0, 0, 0}, std::vector<double>{c, c, c, c}).value ==
          doctest::Approx(std::log(4.0)));

  Rng rng(17);
  const std::vector<double> y = random_labels(rng, 6);
  const std::vector<double> s = random_scores(rng, 6);
  const LossResult r = loss_softmax(y, s);
  const auto fd = oracles::finite_difference(
      [&](const std::vector<double>& v) { return loss_softmax(y, v).value; }, s);
  CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-6);
}

TEST_CASE("loss_gumbel_ndcg noise-free values") {
  // Smooth ranks with a well-separated score gap: ranks are essentially exact.
  NoiseSpec noise;
  noise.num_samples = 1;
  noise.gumbel_scale = 0.0;
  noise.smoothing_tau = 0.1;

  const LossResult top = loss_gumbel_ndcg(std::vector<double>{1, 0}, std::vector<double>{10, -10},
                                          noise);
  CHECK(top.value == doctest::Approx(-1.0).epsilon(1e-3));

  const LossResult second = loss_gumbel_ndcg(std::vector<double>{1, 0},
                                             std::vector<double>{-10, 10}, noise);
  CHECK(second.value == doctest::Approx(-1.0 / std::log2(3.0)).epsilon(1e-3));

  CHECK_THROWS_AS(
      loss_gumbel_ndcg(std::vector<double>{0, 0}, std::vector<double>{1, 2}, noise),
      std::invalid_argument);
}

TEST_CASE("loss_gumbel_ndcg gradient matches finite differences with frozen noise") {
  NoiseSpec noise;
  noise.num_samples = 4;
  noise.gumbel_scale = 1.0;
  noise.smoothing_tau = 0.1;
  noise.seed = 99;
  Rng rng(23);
  const std::vector<double> y = random_labels(rng, 5);
  const std::vector<double> s = random_scores(rng, 5);
  const LossResult r = loss_gumbel_ndcg(y, s, noise);
  const auto fd = oracles::finite_difference(
      [&](const std::vector<double>& v) { return loss_gumbel_ndcg(y, v, noise).value; }, s);
  CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-4);
}

TEST_CASE("loss_lambda hand-computed example") {
  // Ranks tie-broken by index: item 0 at rank 1, item 1 at rank 2.
  // delta = |2^1 - 2^0| * |1 - 1/log2(3)| / idealDCG, idealDCG = 1.
  const double delta = 1.0 - 1.0 / std::log2(3.0);
  const LossResult r = loss_lambda(std::vector<double>{1, 0}, std::vector<double>{0, 0});
  CHECK(r.value == doctest::Approx(delta * kLn2).epsilon(1e-12));

  CHECK(loss_lambda(std::vector<double>{1, 1, 1}, std::vector<double>{3, 2, 1}).value == 0.0);
  CHECK_THROWS_AS(loss_lambda(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("loss_lambda is exactly translation invariant") {
  Rng rng(31);
  const std::vector<double> y = random_labels(rng, 7);
  std::vector<double> s = random_scores(rng, 7);
  const LossResult base = loss_lambda(y, s);
  for (double& v : s) v += 2.5;
  const LossResult shifted = loss_lambda(y, s);
  CHECK(std::abs(base.value - shifted.value) < 1e-9);
  CHECK(oracles::max_rel_err(base.gradient, shifted.gradient) < 1e-9);
}

TEST_CASE("loss_rd values and gradient support") {
  const std::vector<int> order{1, 0, 2};
  const LossResult k1 = loss_rd(order, std::vector<double>{5, 0, -1}, 1);
  CHECK(k1.value == doctest::Approx(kLn2));  // teacher-top item has score 0

  const LossResult k2 = loss_rd(std::vector<int>{0, 1}, std::vector<double>{0, 0}, 2);
  CHECK(k2.value == doctest::Approx(2 * kLn2));

  // Support is exactly the teacher's top-K set.
  const LossResult k = loss_rd(order, std::vector<double>{0.3, -0.2, 0.9}, 2);
  CHECK(k.gradient[1] != 0.0);
  CHECK(k.gradient[0] != 0.0);
  CHECK(k.gradient[2] == 0.0);

  CHECK_THROWS_AS(loss_rd(order, std::vector<double>{1, 2, 3}, 4), std::invalid_argument);
  CHECK_THROWS_AS(loss_rd(std::vector<int>{0, 0, 2}, std::vector<double>{1, 2, 3}, 2),
                  std::invalid_argument);
}

TEST_CASE("plackett_luce_log_prob examples") {
  CHECK(plackett_luce_log_prob({0, 1}, std::vector<double>{0, 0}) ==
        doctest::Approx(std::log(0.5)));
  CHECK(plackett_luce_log_prob({1, 0}, std::vector<double>{0, 0}) ==
        doctest::Approx(std::log(0.5)));
  // K=1, L=2: the (L-K)! term is ln(1!) = 0.
  CHECK(plackett_luce_log_prob({0}, std::vector<double>{0, 0}) ==
        doctest::Approx(std::log(0.5)));

  CHECK_THROWS_AS(plackett_luce_log_prob({0, 0}, std::vector<double>{0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(plackett_luce_log_prob({0, 1, 2}, std::vector<double>{0, 0}),
                  std::invalid_argument);
}

TEST_CASE("plackett_luce probabilities sum to 1 and match the direct product") {
  Rng rng(41);
  const std::vector<double> s = random_scores(rng, 3);
  double total = 0.0;
  std::vector<int> perm{0, 1, 2};
  std::sort(perm.begin(), perm.end());
  do {
    const double p = std::exp(plackett_luce_log_prob(perm, s));
    CHECK(p == doctest::Approx(oracles::pl_prob_ref(perm, s)).epsilon(1e-12));
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample_top_k_permutation handles degenerate mass") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto perm = sample_top_k_permutation(std::vector<double>{1, 0, 0}, 2, seed);
    CHECK(perm[0] == 0);  // all mass on the first index
    CHECK(perm[1] != 0);  // tail drawn uniformly from the survivors
  }
}

TEST_CASE("sample_top_k_permutation frequencies match the sampling model") {
  const std::vector<double> probs{0.5, 0.3, 0.2};
  std::map<std::vector<int>, int> counts;
  const int trials = 60000;
  for (int t = 0; t < trials; ++t) counts[sample_top_k_permutation(probs, 3, 1000 + t)] += 1;
  for (const auto& [perm, count] : counts) {
    const double expected = oracles::sample_prob_ref(perm, probs);
    CHECK(std::abs(static_cast<double>(count) / trials - expected) < 0.01);
  }
}

TEST_CASE("sample_top_k_permutation is deterministic given the seed") {
  const std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
  CHECK(sample_top_k_permutation(probs, 4, 7) == sample_top_k_permutation(probs, 4, 7));
  CHECK_THROWS_AS(sample_top_k_permutation(std::vector<double>{0.7, 0.7}, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("loss_rankdistil examples") {
  // Any permutation of two tied scores has Plackett-Luce probability 1/2.
  const LossResult tied = loss_rankdistil(std::vector<double>{0.5, 0.5},
                                          std::vector<double>{0, 0}, 2, 5, 3);
  CHECK(tied.value == doctest::Approx(kLn2));

  // A single sample reduces to the negative log prob of that sample.
  const std::vector<double> probs{0.6, 0.3, 0.1};
  Rng rng(53);
  const std::vector<double> s = random_scores(rng, 3);
  const LossResult single = loss_rankdistil(probs, s, 2, 1, 77);
  const auto perm = sample_top_k_permutation(probs, 2, derive_seed(77, "rankdistil-perm", 0));
  CHECK(single.value == doctest::Approx(-plackett_luce_log_prob(perm, s)).epsilon(1e-12));
}

TEST_CASE("loss_rankdistil gradient matches finite differences on fixed samples") {
  Rng rng(61);
  const std::vector<double> probs = random_simplex(rng, 4);
  const std::vector<double> s = random_scores(rng, 4);
  const LossResult r = loss_rankdistil(probs, s, 2, 6, 123);
  const auto fd = oracles::finite_difference(
      [&](const std::vector<double>& v) { return loss_rankdistil(probs, v, 2, 6, 123).value; },
      s);
  CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-6);
}

TEST_CASE("translation invariance of the paired losses") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 2 + rng.next_below(7);
    const std::vector<double> y = random_labels(rng, n);
    std::vector<double> s = random_scores(rng, n);
    const double c = 0.1 + 3.0 * rng.next_double();

    NoiseSpec noise;
    noise.seed = 1000 + trial;
    const double lp = loss_pair_logistic(y, s).value;
    const double pm = loss_pair_mse(y, s).value;
    const double sm = loss_softmax(y, s).value;
    const double la = loss_lambda(y, s).value;
    const double gn = loss_gumbel_ndcg(y, s, noise).value;
    const double ms = loss_mse(y, s).value;
    for (double& v : s) v += c;
    CHECK(std::abs(loss_pair_logistic(y, s).value - lp) < 1e-9);
    CHECK(std::abs(loss_pair_mse(y, s).value - pm) < 1e-9);
    CHECK(std::abs(loss_softmax(y, s).value - sm) < 1e-9);
    CHECK(std::abs(loss_lambda(y, s).value - la) < 1e-9);
    CHECK(std::abs(loss_gumbel_ndcg(y, s, noise).value - gn) < 1e-9);
    // The pointwise MSE is the designated non-invariant witness.
    CHECK(std::abs(loss_mse(y, s).value - ms) > 1e-9);
  }
}

TEST_CASE("ordering losses vanish when labels carry no preference") {
  Rng rng(83);
  for (double level : {0.0, 1.0, 2.5}) {
    const std::vector<double> y(6, level);
    const std::vector<double> s = random_scores(rng, 6);
    for (const LossResult& r :
         {loss_pair_logistic(y, s), level > 0 ? loss_lambda(y, s) : loss_pair_logistic(y, s)}) {
      CHECK(r.value == 0.0);
      for (double g : r.gradient) CHECK(g == 0.0);
    }
  }
  // All-zero labels silence the softmax loss as well.
  const std::vector<double> zeros(4, 0.0);
  const LossResult sm = loss_softmax(zeros, std::vector<double>{1, 2, 3, 4});
  CHECK(sm.value == 0.0);
  for (double g : sm.gradient) CHECK(g == 0.0);
}

TEST_CASE("every loss passes a randomized finite-difference sweep") {
  Rng rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 2 + rng.next_below(9);
    const std::vector<double> y = random_labels(rng, n);
    const std::vector<double> s = random_scores(rng, n);
    LossParams params;
    params.top_k = 1 + static_cast<int>(rng.next_below(n));
    params.num_samples = 4;
    params.seed = 500 + trial;

    for (LossKind kind : {LossKind::kMSE, LossKind::kPairLog, LossKind::kPairMSE,
                          LossKind::kSoftmax, LossKind::kGumbelNDCG, LossKind::kLambdaLoss,
                          LossKind::kRD}) {
      const LossResult r = eval_list_loss(kind, y, s, params);
      const auto fd = oracles::finite_difference(
          [&](const std::vector<double>& v) { return eval_list_loss(kind, y, v, params).value; },
          s);
      CAPTURE(to_string(kind));
      CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-4);
    }
    const std::vector<double> probs = random_simplex(rng, n);
    const LossResult r = eval_list_loss(LossKind::kRankDistil, probs, s, params);
    const auto fd = oracles::finite_difference(
        [&](const std::vector<double>& v) {
          return eval_list_loss(LossKind::kRankDistil, probs, v, params).value;
        },
        s);
    CHECK(oracles::max_rel_err(r.gradient, fd) < 1e-4);
  }
}
