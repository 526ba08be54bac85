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
#include "rdkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rdkit/csv.hpp"
#include "rdkit/distill.hpp"

namespace rdkit {

const std::vector<std::string> kStandardMetrics = {"MRR@10", "MRR", "NDCG@1", "NDCG@5", "NDCG"};

namespace {

// Regularized incomplete beta via the continued fraction of Lentz.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
               b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

MetricSpec spec_for(const std::string& metric, const EvalSettings& eval) {
  MetricSpec spec;
  spec.policy = eval.policy;
  if (metric == "MRR@10") {
    spec.kind = MetricKind::kMRR;
    spec.cutoff = 10;
    spec.binarize_threshold = eval.binarize_threshold;
  } else if (metric == "MRR") {
    spec.kind = MetricKind::kMRR;
    spec.cutoff = 0;
    spec.binarize_threshold = eval.binarize_threshold;
  } else if (metric == "NDCG@1") {
    spec.kind = MetricKind::kNDCG;
    spec.cutoff = 1;
  } else if (metric == "NDCG@5") {
    spec.kind = MetricKind::kNDCG;
    spec.cutoff = 5;
  } else if (metric == "NDCG") {
    spec.kind = MetricKind::kNDCG;
    spec.cutoff = 0;
  } else {
    throw std::invalid_argument("unknown metric column: " + metric);
  }
  return spec;
}

std::vector<ScoredList> score_dataset(const LinearModel& model, const Dataset& ds) {
  std::vector<ScoredList> out;
  out.reserve(ds.lists.size());
  for (const RankList& rl : ds.lists) {
    ScoredList sl;
    sl.query_id = rl.query_id;
    sl.doc_ids = rl.doc_ids;
    sl.scores = score_list(model, rl);
    sl.labels = rl.relevance ? *rl.relevance : std::vector<double>(rl.size(), 0.0);
    out.push_back(std::move(sl));
  }
  return out;
}

struct GridPoint {
  std::string method;
  DistillConfig cfg;
  std::string config_id;
};

std::string format_trim(double v) { return format_double(v); }

std::vector<GridPoint> enumerate_grid(const SweepGrid& grid, const DistillConfig& base) {
  if (grid.losses.empty()) throw std::invalid_argument("sweep grid has no methods");
  if (grid.learning_rates.empty() || grid.alphas.empty() || grid.transform_modes.empty() ||
      grid.temperatures.empty() || grid.top_ks.empty())
    throw std::invalid_argument("sweep grid has an empty dimension");

  std::vector<GridPoint> points;
  for (const std::optional<LossKind>& loss : grid.losses) {
    const std::string method = loss ? to_string(*loss) : "RelevanceOnly";
    const bool needs_k = loss && (*loss == LossKind::kRD || *loss == LossKind::kRankDistil);
    std::vector<bool> transforms;
    if (!loss)
      transforms = {false};
    else if (transform_forced_on(*loss))
      transforms = {true};
    else if (transform_irrelevant(*loss))
      transforms = {false};
    else
      transforms = std::vector<bool>(grid.transform_modes.begin(), grid.transform_modes.end());

    for (double lr : grid.learning_rates) {
      const std::vector<double> alphas = loss ? grid.alphas : std::vector<double>{1.0};
      for (double alpha : alphas) {
        for (bool tr : transforms) {
          const std::vector<double> temps =
              tr ? grid.temperatures : std::vector<double>{base.temperature};
          for (double temp : temps) {
            const std::vector<int> ks = needs_k ? grid.top_ks : std::vector<int>{base.top_k};
            for (int k : ks) {
              GridPoint p;
              p.method = method;
              p.cfg = base;
              p.cfg.distill_loss = loss;
              p.cfg.alpha = loss ? alpha : 1.0;
              p.cfg.learning_rate = lr;
              p.cfg.transform_on = tr;
              p.cfg.temperature = temp;
              p.cfg.top_k = k;
              std::ostringstream id;
              id << "loss=" << method << ";alpha=" << format_trim(p.cfg.alpha)
                 << ";lr=" << format_trim(lr) << ";transform=" << (tr ? "on" : "off");
              if (tr) id << ";T=" << format_trim(temp);
              if (needs_k) id << ";K=" << k;
              p.config_id = id.str();
              points.push_back(std::move(p));
            }
          }
        }
      }
    }
  }
  return points;
}

struct PointOutcome {
  bool ok = false;
  std::string error;
  double val_ndcg5 = 0.0;
  bool val_usable = false;
  LinearModel model;
};

}  // namespace

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::max<size_t>(1, std::min<size_t>(jobs < 1 ? 1 : jobs, n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : threads) t.join();
}

MethodResult evaluate_model(const LinearModel& model, const Dataset& test,
                            const EvalSettings& eval) {
  const std::vector<ScoredList> scored = score_dataset(model, test);
  MethodResult out;
  out.model = model;
  for (const std::string& metric : kStandardMetrics) {
    const EvalReport report = evaluate(scored, spec_for(metric, eval));
    out.aggregate[metric] = report.aggregate;
    std::vector<double>& pq = out.per_query[metric];
    pq.reserve(report.per_query.size());
    for (const auto& [qid, v] : report.per_query) pq.push_back(v);
  }
  return out;
}

ResultTable run_sweep(const Dataset& ds_train, const Dataset& ds_val, const Dataset& ds_test,
                      const SweepGrid& grid, const DistillConfig& base_cfg,
                      const EvalSettings& eval, int jobs) {
  const std::vector<GridPoint> points = enumerate_grid(grid, base_cfg);
  std::vector<PointOutcome> outcomes(points.size());
  parallel_for(points.size(), jobs, [&](size_t i) {
    PointOutcome& o = outcomes[i];
    try {
      const TrainResult tr = train(ds_train, ds_val, points[i].cfg);
      o.ok = true;
      o.val_usable = std::isfinite(tr.best_val_ndcg5);
      o.val_ndcg5 = tr.best_val_ndcg5;
      o.model = tr.best_model;
    } catch (const std::exception& e) {
      o.ok = false;
      o.error = e.what();
    }
  });

  ResultTable table;
  table.dataset = ds_test.name;
  for (const std::optional<LossKind>& loss : grid.losses) {
    const std::string method = loss ? to_string(*loss) : "RelevanceOnly";
    int best = -1;
    for (size_t i = 0; i < points.size(); ++i) {
      if (points[i].method != method) continue;
      const PointOutcome& o = outcomes[i];
      if (!o.ok) {
        table.failed.push_back({points[i].config_id, o.error});
        continue;
      }
      if (!o.val_usable) {
        table.failed.push_back({points[i].config_id, "no usable validation metric"});
        continue;
      }
      if (best < 0 || o.val_ndcg5 > outcomes[best].val_ndcg5) best = static_cast<int>(i);
    }
    if (best < 0)
      throw std::runtime_error("sweep: every grid point failed for method " + method);
    MethodResult row = evaluate_model(outcomes[best].model, ds_test, eval);
    row.method = method;
    row.config_id = points[best].config_id;
    row.transform_on = points[best].cfg.transform_on ||
                       (loss && transform_forced_on(*loss));
    row.val_ndcg5 = outcomes[best].val_ndcg5;
    table.rows.push_back(std::move(row));
  }
  return table;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired vectors must have equal length");
  const size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs n >= 2");

  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) - mean;
    ss += d * d;
  }
  const double var = ss / (n - 1);

  TTestResult out;
  if (var == 0.0) {
    if (mean == 0.0) return {0.0, 1.0, false};
    out.t = mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
    out.p = 0.0;
    out.significant_at_001 = true;
    return out;
  }
  out.t = mean / std::sqrt(var / n);
  const double dof = static_cast<double>(n - 1);
  out.p = incomplete_beta(dof / 2.0, 0.5, dof / (dof + out.t * out.t));
  out.p = std::clamp(out.p, 0.0, 1.0);
  out.significant_at_001 = out.p < 0.01;
  return out;
}

std::vector<RankSummary> aggregate_ranks(const std::vector<MetricTable>& tables) {
  if (tables.empty()) throw std::invalid_argument("aggregate_ranks needs at least one table");

  std::vector<std::string> methods;
  for (const MetricTable& t : tables)
    for (const auto& [m, v] : t.method_metric)
      if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);

  std::map<std::string, std::vector<double>> ranks;
  for (const MetricTable& t : tables) {
    std::vector<std::pair<std::string, double>> rows = t.method_metric;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    // Average ranks over runs of equal values.
    size_t i = 0;
    while (i < rows.size()) {
      size_t j = i;
      while (j + 1 < rows.size() && rows[j + 1].second == rows[i].second) ++j;
      const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (size_t r = i; r <= j; ++r) ranks[rows[r].first].push_back(avg);
      i = j + 1;
    }
  }

  std::vector<RankSummary> out;
  for (const std::string& m : methods) {
    const std::vector<double>& rs = ranks[m];
    if (rs.empty()) throw std::invalid_argument("method " + m + " appears in zero tables");
    RankSummary s;
    s.method = m;
    s.best_rank = *std::min_element(rs.begin(), rs.end());
    s.worst_rank = *std::max_element(rs.begin(), rs.end());
    s.mean_rank = std::accumulate(rs.begin(), rs.end(), 0.0) / rs.size();
    s.tables = rs.size();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<MetricTable> load_metric_tables_csv(std::istream& in) {
  std::vector<MetricTable> tables;
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 3)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 3 columns (table,method,value)");
    if (!header_seen) {
      header_seen = true;  // first row is the header
      continue;
    }
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const MetricTable& t) { return t.name == f[0]; });
    if (it == tables.end()) {
      tables.push_back({f[0], {}});
      it = tables.end() - 1;
    }
    it->method_metric.emplace_back(f[1], parse_double(f[2]));
  }
  return tables;
}

MetricTable metric_table_from(const ResultTable& table, const std::string& metric,
                              bool include_baseline) {
  MetricTable out;
  out.name = table.dataset;
  for (const MethodResult& row : table.rows) {
    if (!include_baseline && row.method == "RelevanceOnly") continue;
    const auto it = row.aggregate.find(metric);
    if (it == row.aggregate.end())
      throw std::invalid_argument("result table lacks metric " + metric);
    out.method_metric.emplace_back(row.method, it->second);
  }
  return out;
}

std::vector<AlphaCurvePoint> alpha_sensitivity(const Dataset& ds_train, const Dataset& ds_val,
                                               const std::vector<LossKind>& losses,
                                               const std::vector<double>& alphas,
                                               const DistillConfig& base_cfg,
                                               const EvalSettings& eval, int jobs) {
  if (losses.empty() || alphas.empty())
    throw std::invalid_argument("alpha_sensitivity needs losses and alphas");
  std::vector<AlphaCurvePoint> points;
  for (LossKind loss : losses)
    for (double alpha : alphas) points.push_back({loss, alpha, 0.0});

  const MetricSpec mrr10 = spec_for("MRR@10", eval);
  std::vector<std::string> errors(points.size());
  parallel_for(points.size(), jobs, [&](size_t i) {
    try {
      DistillConfig cfg = base_cfg;
      cfg.distill_loss = points[i].loss;
      cfg.alpha = points[i].alpha;
      if (transform_forced_on(points[i].loss)) cfg.transform_on = true;
      const TrainResult tr = train(ds_train, ds_val, cfg);
      const EvalReport report = evaluate(score_dataset(tr.best_model, ds_val), mrr10);
      points[i].mrr10 = report.aggregate;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < points.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("alpha_sensitivity: run (loss=" +
                               std::string(to_string(points[i].loss)) + ", alpha=" +
                               format_trim(points[i].alpha) + ") failed: " + errors[i]);
  return points;
}

void export_learning_dynamics(std::ostream& out, const std::vector<TrainTrace>& traces) {
  std::vector<TrainTrace> sorted = traces;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrainTrace& a, const TrainTrace& b) { return a.step < b.step; });
  out << "step,train_loss,ndcg5_vs_relevance,ndcg5_vs_teacher\n";
  for (const TrainTrace& t : sorted) {
    out << t.step << ',' << format_double(t.train_loss) << ','
        << format_double(t.val_ndcg5_relevance) << ',' << format_double(t.val_ndcg5_teacher)
        << '\n';
  }
}

std::vector<TrainTrace> parse_learning_dynamics(std::istream& in) {
  std::vector<TrainTrace> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 4) throw std::runtime_error("trace CSV needs 4 columns");
    TrainTrace t;
    t.step = static_cast<int>(parse_double(f[0]));
    t.train_loss = parse_double(f[1]);
    t.val_ndcg5_relevance = parse_double(f[2]);
    t.val_ndcg5_teacher = parse_double(f[3]);
    out.push_back(t);
  }
  return out;
}

}  // namespace rdkit
