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
#include "rdkit/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rdkit/csv.hpp"
#include "rdkit/random.hpp"

namespace rdkit {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& tok, size_t line_no, const char* field) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    parse_fail(line_no, std::string("unparseable ") + field + " '" + tok + "'");
  return v;
}

double parse_real(const std::string& tok, size_t line_no, const char* field) {
  try {
    return parse_double(tok);
  } catch (const std::exception&) {
    parse_fail(line_no, std::string("unparseable ") + field + " '" + tok + "'");
  }
}

std::string doc_ordinal_id(size_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "d%04zu", index);
  return buf;
}

}  // namespace

std::vector<TrecRunRecord> parse_trec_run(std::istream& in) {
  std::vector<TrecRunRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 6)
      parse_fail(line_no, "expected 6 fields, got " + std::to_string(f.size()));
    TrecRunRecord r;
    r.query_id = f[0];
    r.placeholder = f[1];
    r.doc_id = f[2];
    r.rank = parse_int(f[3], line_no, "rank");
    r.score = parse_real(f[4], line_no, "score");
    r.tag = f[5];
    if (r.rank < 1) parse_fail(line_no, "rank must be >= 1");
    if (!std::isfinite(r.score)) parse_fail(line_no, "score must be finite");
    out.push_back(std::move(r));
  }
  return out;
}

void write_trec_run(std::ostream& out, const std::vector<TrecRunRecord>& records) {
  for (const TrecRunRecord& r : records) {
    out << r.query_id << ' ' << r.placeholder << ' ' << r.doc_id << ' ' << r.rank << ' '
        << format_double(r.score) << ' ' << r.tag << '\n';
  }
}

std::vector<TrecQrelRecord> parse_qrels(std::istream& in) {
  std::vector<TrecQrelRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 4)
      parse_fail(line_no, "expected 4 fields, got " + std::to_string(f.size()));
    TrecQrelRecord r;
    r.query_id = f[0];
    r.placeholder = f[1];
    r.doc_id = f[2];
    r.label = parse_real(f[3], line_no, "label");
    if (!std::isfinite(r.label) || r.label < 0.0)
      parse_fail(line_no, "label must be finite and >= 0");
    out.push_back(std::move(r));
  }
  return out;
}

void write_qrels(std::ostream& out, const std::vector<TrecQrelRecord>& records) {
  for (const TrecQrelRecord& r : records) {
    out << r.query_id << ' ' << r.placeholder << ' ' << r.doc_id << ' '
        << format_double(r.label) << '\n';
  }
}

JoinResult join_run_qrels(const std::vector<TrecRunRecord>& run,
                          const std::vector<TrecQrelRecord>& qrels) {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> labels;
  for (const TrecQrelRecord& q : qrels) labels[q.query_id][q.doc_id] = q.label;

  JoinResult out;
  std::vector<std::string> query_order;
  std::unordered_map<std::string, size_t> list_index;
  std::unordered_set<std::string> seen_pairs;
  for (const TrecRunRecord& r : run) {
    if (!seen_pairs.insert(r.query_id + '\x1f' + r.doc_id).second)
      throw std::runtime_error("duplicate (query, doc) pair in run: " + r.query_id + " " +
                               r.doc_id);
    auto it = list_index.find(r.query_id);
    if (it == list_index.end()) {
      it = list_index.emplace(r.query_id, out.dataset.lists.size()).first;
      RankList rl;
      rl.query_id = r.query_id;
      rl.relevance = std::vector<double>{};
      rl.teacher_scores = std::vector<double>{};
      out.dataset.lists.push_back(std::move(rl));
      query_order.push_back(r.query_id);
    }
    RankList& rl = out.dataset.lists[it->second];
    rl.doc_ids.push_back(r.doc_id);
    rl.teacher_scores->push_back(r.score);
    double label = 0.0;
    const auto qit = labels.find(r.query_id);
    if (qit != labels.end()) {
      const auto dit = qit->second.find(r.doc_id);
      if (dit != qit->second.end()) label = dit->second;
    }
    rl.relevance->push_back(label);
  }

  for (const std::string& qid : query_order)
    if (!labels.count(qid)) out.unjudged_queries.push_back(qid);
  for (const auto& [qid, docs] : labels) {
    const auto it = list_index.find(qid);
    if (it == list_index.end()) {
      out.dropped_qrel_only_docs += docs.size();
      continue;
    }
    const RankList& rl = out.dataset.lists[it->second];
    const std::unordered_set<std::string> in_run(rl.doc_ids.begin(), rl.doc_ids.end());
    for (const auto& [doc, label] : docs)
      if (!in_run.count(doc)) out.dropped_qrel_only_docs += 1;
  }
  return out;
}

Dataset parse_libsvm_ranking(std::istream& in) {
  Dataset ds;
  std::string line;
  size_t line_no = 0;
  size_t max_fid = 0;
  std::vector<std::vector<std::pair<size_t, double>>> sparse_rows;
  std::vector<size_t> row_list;  // list index of each row
  std::string current_qid;

  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() < 2) parse_fail(line_no, "expected '<label> qid:<q> ...'");
    const double label = parse_real(toks[0], line_no, "label");
    if (toks[1].rfind("qid:", 0) != 0) parse_fail(line_no, "second token must be qid:<q>");
    const std::string qid = toks[1].substr(4);
    if (qid.empty()) parse_fail(line_no, "empty qid");

    if (ds.lists.empty() || qid != current_qid) {
      RankList rl;
      rl.query_id = qid;
      rl.relevance = std::vector<double>{};
      ds.lists.push_back(std::move(rl));
      current_qid = qid;
    }
    RankList& rl = ds.lists.back();
    rl.relevance->push_back(label);

    std::vector<std::pair<size_t, double>> feats;
    size_t prev_fid = 0;
    for (size_t t = 2; t < toks.size(); ++t) {
      const size_t colon = toks[t].find(':');
      if (colon == std::string::npos || colon == 0)
        parse_fail(line_no, "malformed feature token '" + toks[t] + "'");
      const int fid = parse_int(toks[t].substr(0, colon), line_no, "feature id");
      if (fid < 1) parse_fail(line_no, "feature ids are 1-based");
      if (static_cast<size_t>(fid) <= prev_fid)
        parse_fail(line_no, "feature ids must be strictly increasing within a line");
      prev_fid = static_cast<size_t>(fid);
      const double val = parse_real(toks[t].substr(colon + 1), line_no, "feature value");
      feats.emplace_back(static_cast<size_t>(fid), val);
    }
    max_fid = std::max(max_fid, prev_fid);
    sparse_rows.push_back(std::move(feats));
    row_list.push_back(ds.lists.size() - 1);
  }

  ds.feature_dim = max_fid;
  std::vector<size_t> next_row(ds.lists.size(), 0);
  for (RankList& rl : ds.lists) {
    rl.features = Matrix(rl.relevance->size(), max_fid);
    for (size_t i = 0; i < rl.relevance->size(); ++i) rl.doc_ids.push_back(doc_ordinal_id(i));
  }
  for (size_t r = 0; r < sparse_rows.size(); ++r) {
    RankList& rl = ds.lists[row_list[r]];
    const size_t row = next_row[row_list[r]]++;
    for (const auto& [fid, val] : sparse_rows[r]) rl.features.at(row, fid - 1) = val;
  }
  return ds;
}

void write_libsvm_ranking(std::ostream& out, const Dataset& ds) {
  for (const RankList& rl : ds.lists) {
    if (!rl.relevance || !rl.has_features())
      throw std::invalid_argument("libsvm output needs relevance labels and features");
    for (size_t i = 0; i < rl.size(); ++i) {
      const double y = (*rl.relevance)[i];
      if (y == std::floor(y))
        out << static_cast<long long>(y);
      else
        out << format_double(y);
      out << " qid:" << rl.query_id;
      for (size_t f = 0; f < rl.features.cols; ++f)
        out << ' ' << (f + 1) << ':' << format_double(rl.features.at(i, f));
      out << '\n';
    }
  }
}

void attach_teacher_scores(Dataset& ds, const std::vector<TrecRunRecord>& run) {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> scores;
  for (const TrecRunRecord& r : run) {
    if (!scores[r.query_id].emplace(r.doc_id, r.score).second)
      throw std::runtime_error("duplicate (query, doc) pair in run: " + r.query_id + " " +
                               r.doc_id);
  }
  for (RankList& rl : ds.lists) {
    const auto qit = scores.find(rl.query_id);
    if (qit == scores.end()) continue;
    std::vector<double> ts;
    ts.reserve(rl.size());
    for (const std::string& doc : rl.doc_ids) {
      const auto dit = qit->second.find(doc);
      if (dit == qit->second.end())
        throw std::runtime_error("teacher run covers query " + rl.query_id +
                                 " but is missing doc " + doc);
      ts.push_back(dit->second);
    }
    rl.teacher_scores = std::move(ts);
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_queries < 1) throw std::invalid_argument("n_queries must be >= 1");
  if (spec.list_len_min < 1 || spec.list_len_max < spec.list_len_min)
    throw std::invalid_argument("degenerate list length range");
  if (spec.feature_dim < 3)
    throw std::invalid_argument("feature_dim must be >= 3 (the utility uses x0, x1, x2)");
  if (!(spec.teacher_quality >= 0.0 && spec.teacher_quality <= 1.0))
    throw std::invalid_argument("teacher_quality must be in [0,1]");
  if (!(spec.label_sparsity > 0.0 && spec.label_sparsity <= 1.0))
    throw std::invalid_argument("label_sparsity must be in (0,1]");

  Dataset ds;
  ds.feature_dim = static_cast<size_t>(spec.feature_dim);
  ds.name = "synthetic";
  ds.lists.reserve(spec.n_queries);
  for (int q = 0; q < spec.n_queries; ++q) {
    Rng len_rng(derive_seed(spec.seed, "synth-len", q));
    Rng feat_rng(derive_seed(spec.seed, "synth-features", q));
    Rng noise_rng(derive_seed(spec.seed, "synth-teacher", q));
    const size_t n =
        spec.list_len_min +
        static_cast<size_t>(len_rng.next_below(spec.list_len_max - spec.list_len_min + 1));

    RankList rl;
    char qbuf[16];
    std::snprintf(qbuf, sizeof(qbuf), "q%05d", q);
    rl.query_id = qbuf;
    rl.features = Matrix(n, ds.feature_dim);
    std::vector<double> utility(n);
    // Fixed ground truth: one two-feature interaction plus a linear term whose
    // coefficients decay slowly across every remaining feature. The
    // interaction is invisible to a linear student (it is the teacher's
    // headroom); the wide coefficient tail is recoverable from dense teacher
    // signal long before sparse relevance labels pin it down.
    for (size_t i = 0; i < n; ++i) {
      rl.doc_ids.push_back(doc_ordinal_id(i));
      for (size_t f = 0; f < ds.feature_dim; ++f) rl.features.at(i, f) = feat_rng.next_normal();
      double u = rl.features.at(i, 0) * rl.features.at(i, 1);
      for (size_t f = 2; f < ds.feature_dim; ++f)
        u += 0.5 / std::sqrt(static_cast<double>(f)) * rl.features.at(i, f);
      utility[i] = u;
    }

    // Graded labels: the top ceil(sparsity * n) documents by utility are
    // positive, graded 4 down to 1 from the best.
    const size_t positives =
        std::max<size_t>(1, static_cast<size_t>(std::llround(spec.label_sparsity * n)));
    std::vector<int> by_utility(n);
    std::iota(by_utility.begin(), by_utility.end(), 0);
    std::stable_sort(by_utility.begin(), by_utility.end(),
                     [&](int a, int b) { return utility[a] > utility[b]; });
    std::vector<double> labels(n, 0.0);
    for (size_t p = 0; p < positives && p < n; ++p) {
      const size_t grade = std::max<size_t>(1, 4 - (4 * p) / positives);
      labels[by_utility[p]] = static_cast<double>(grade);
    }
    rl.relevance = std::move(labels);

    // Teacher noise is heavy tailed (Student t, 2 dof): real teacher rankers
    // emit unconstrained scores with occasional extreme values, which is what
    // makes raw-value matching without a transform fragile.
    std::vector<double> teacher(n);
    for (size_t i = 0; i < n; ++i) {
      const double t2 = noise_rng.next_normal() / std::sqrt(-std::log(noise_rng.next_open()));
      teacher[i] = spec.teacher_quality * utility[i] + (1.0 - spec.teacher_quality) * t2;
    }
    rl.teacher_scores = std::move(teacher);
    ds.lists.push_back(std::move(rl));
  }
  return ds;
}

ScoreStats teacher_score_stats(const Dataset& ds) {
  std::vector<double> pool;
  for (const RankList& rl : ds.lists)
    if (rl.teacher_scores)
      pool.insert(pool.end(), rl.teacher_scores->begin(), rl.teacher_scores->end());
  if (pool.empty()) throw std::invalid_argument("dataset has no teacher scores");

  ScoreStats st;
  const size_t n = pool.size();
  st.mean = std::accumulate(pool.begin(), pool.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : pool) ss += (v - st.mean) * (v - st.mean);
  st.std_dev = std::sqrt(ss / n);

  std::sort(pool.begin(), pool.end());
  const auto percentile = [&](double p) {
    const double h = (n - 1) * p;
    const size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= n) return pool[n - 1];
    return pool[lo] + (h - lo) * (pool[lo + 1] - pool[lo]);
  };
  st.min = pool.front();
  st.p25 = percentile(0.25);
  st.p50 = percentile(0.50);
  st.p75 = percentile(0.75);
  st.max = pool.back();
  return st;
}

std::vector<TrecRunRecord> run_records_from(const Dataset& ds, const std::string& tag) {
  std::vector<TrecRunRecord> out;
  for (const RankList& rl : ds.lists) {
    if (!rl.teacher_scores)
      throw std::invalid_argument("list " + rl.query_id + " has no teacher scores");
    std::vector<int> order(rl.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return (*rl.teacher_scores)[a] > (*rl.teacher_scores)[b];
    });
    for (size_t r = 0; r < order.size(); ++r) {
      TrecRunRecord rec;
      rec.query_id = rl.query_id;
      rec.doc_id = rl.doc_ids[order[r]];
      rec.rank = static_cast<int>(r + 1);
      rec.score = (*rl.teacher_scores)[order[r]];
      rec.tag = tag;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<TrecQrelRecord> qrel_records_from(const Dataset& ds) {
  std::vector<TrecQrelRecord> out;
  for (const RankList& rl : ds.lists) {
    if (!rl.relevance)
      throw std::invalid_argument("list " + rl.query_id + " has no relevance labels");
    for (size_t i = 0; i < rl.size(); ++i) {
      TrecQrelRecord rec;
      rec.query_id = rl.query_id;
      rec.doc_id = rl.doc_ids[i];
      rec.label = (*rl.relevance)[i];
      out.push_back(std::move(rec));
    }
  }
  return out;
}

namespace {

template <typename T>
T load_with_path(const std::string& path, T (*parse)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace

std::vector<TrecRunRecord> load_trec_run(const std::string& path) {
  return load_with_path(path, parse_trec_run);
}

std::vector<TrecQrelRecord> load_qrels(const std::string& path) {
  return load_with_path(path, parse_qrels);
}

Dataset load_libsvm_ranking(const std::string& path) {
  return load_with_path(path, parse_libsvm_ranking);
}

}  // namespace rdkit
