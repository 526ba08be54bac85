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
// Independent reference implementations used as test oracles. Everything in
// this header is deliberately written the naive way (direct sums, explicit
// sorts, numerically plain formulas) and must stay independent of the library
// code paths it checks.
#ifndef RDKIT_TESTS_ORACLES_HPP_
#define RDKIT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace oracles {

// Central finite differences of a scalar function of a score vector.
inline std::vector<double> finite_difference(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> s,
    double h = 1e-6) {
  std::vector<double> grad(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    const double orig = s[i];
    s[i] = orig + h;
    const double up = f(s);
    s[i] = orig - h;
    const double down = f(s);
    s[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Elementwise relative error with a unit guard for near-zero entries.
inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

// Brute-force pairwise logistic loss: direct enumeration of ordered pairs.
inline double pair_logistic_value(const std::vector<double>& y, const std::vector<double>& s) {
  double v = 0.0;
  for (size_t i = 0; i < y.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j)
      if (y[i] > y[j]) v -= std::log(1.0 / (1.0 + std::exp(-(s[i] - s[j]))));
  return v;
}

// Naive NDCG@k: explicit sort, pow-based gains, label-sorted ideal.
inline double ndcg_ref(const std::vector<double>& labels, const std::vector<double>& scores,
                       int k) {
  const size_t n = labels.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  const size_t cut = k <= 0 ? n : std::min<size_t>(k, n);
  double dcg = 0.0;
  for (size_t r = 0; r < cut; ++r)
    dcg += (std::pow(2.0, labels[order[r]]) - 1.0) / (std::log(2.0 + r) / std::log(2.0));
  std::vector<double> ideal = labels;
  std::sort(ideal.begin(), ideal.end(), std::greater<double>());
  double idcg = 0.0;
  for (size_t r = 0; r < cut; ++r)
    idcg += (std::pow(2.0, ideal[r]) - 1.0) / (std::log(2.0 + r) / std::log(2.0));
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

// Naive MRR@k over binary labels.
inline double mrr_ref(const std::vector<double>& labels, const std::vector<double>& scores,
                      int k) {
  const size_t n = labels.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  const size_t cut = k <= 0 ? n : std::min<size_t>(k, n);
  for (size_t r = 0; r < cut; ++r)
    if (labels[order[r]] >= 0.5) return 1.0 / (r + 1.0);
  return 0.0;
}

// Plackett-Luce probability of a full permutation by direct product.
inline double pl_prob_ref(const std::vector<int>& perm, const std::vector<double>& s) {
  std::vector<char> used(s.size(), 0);
  double p = 1.0;
  for (int idx : perm) {
    double z = 0.0;
    for (size_t i = 0; i < s.size(); ++i)
      if (!used[i]) z += std::exp(s[i]);
    p *= std::exp(s[idx]) / z;
    used[idx] = 1;
  }
  return p;
}

// Probability of drawing `prefix` when sampling without replacement from probs.
inline double sample_prob_ref(const std::vector<int>& prefix, const std::vector<double>& probs) {
  std::vector<char> used(probs.size(), 0);
  double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  double p = 1.0;
  for (int idx : prefix) {
    p *= probs[idx] / mass;
    mass -= probs[idx];
    used[idx] = 1;
  }
  return p;
}

// Fixtures directory: RDKIT_DATA_DIR or a few relative guesses.
inline std::string data_dir() {
  if (const char* env = std::getenv("RDKIT_DATA_DIR")) return env;
  for (const char* guess : {"data", "../data", "../../data"}) {
    const std::string probe = std::string(guess) + "/published_ndcg5.csv";
    if (FILE* f = std::fopen(probe.c_str(), "r")) {
      std::fclose(f);
      return guess;
    }
  }
  return "data";
}

}  // namespace oracles

#endif  // RDKIT_TESTS_ORACLES_HPP_
