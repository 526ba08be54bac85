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

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_bin() {
  const char* env = std::getenv("RDKIT_CLI_BIN");
  return env ? env : "";
}

int run(const std::string& args) {
  const int status = std::system((cli_bin() + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rdkit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli end-to-end" * doctest::skip(std::getenv("RDKIT_CLI_BIN") == nullptr)) {
  TempDir tmp;
  const std::string data = oracles::data_dir();

  SUBCASE("evaluate scores the documented single-line pair at 100 everywhere") {
    const fs::path run_file = tmp.path / "run.txt";
    const fs::path qrel_file = tmp.path / "qrel.txt";
    std::ofstream(run_file) << "1101282 Q0 8007514 1 3.5860724449157715 msmarco_dev_teacher\n";
    std::ofstream(qrel_file) << "1101282 0 8007514 1\n";
    const fs::path out = tmp.path / "eval";
    REQUIRE(run("evaluate --run " + run_file.string() + " --qrels " + qrel_file.string() +
                " --out-dir " + out.string()) == 0);
    const std::string csv = slurp(out / "evaluate_aggregates.csv");
    CHECK(csv == "metric,aggregate,retained,dropped\n"
                 "MRR@10,100,1,0\nMRR,100,1,0\nNDCG@1,100,1,0\nNDCG@5,100,1,0\nNDCG,100,1,0\n");
  }

  SUBCASE("policy flag changes the aggregate on empty queries") {
    const fs::path out_ignore = tmp.path / "ig";
    const fs::path out_zero = tmp.path / "ze";
    const std::string base = "evaluate --run " + data + "/mini_teacher_run.txt --qrels " + data +
                             "/mini_qrels.txt --metric ndcg --cutoff 5";
    REQUIRE(run(base + " --policy ignore --out-dir " + out_ignore.string()) == 0);
    REQUIRE(run(base + " --policy zero --out-dir " + out_zero.string()) == 0);
    CHECK(slurp(out_ignore / "evaluate_aggregates.csv") !=
          slurp(out_zero / "evaluate_aggregates.csv"));
  }

  SUBCASE("identical invocations produce byte-identical outputs") {
    const fs::path a = tmp.path / "a";
    const fs::path b = tmp.path / "b";
    const std::string cmd = "evaluate --run " + data + "/mini_teacher_run.txt --qrels " + data +
                            "/mini_qrels.txt --binarize-threshold 3";
    REQUIRE(run(cmd + " --out-dir " + a.string()) == 0);
    REQUIRE(run(cmd + " --out-dir " + b.string()) == 0);
    for (const char* name : {"evaluate_aggregates.csv", "evaluate_per_query.csv"})
      CHECK(slurp(a / name) == slurp(b / name));
  }

  SUBCASE("missing required flags exit nonzero") {
    CHECK(run("evaluate --qrels nowhere.txt") != 0);
    CHECK(run("train --format libsvm") != 0);  // no --train path
    CHECK(run("definitely-not-a-command") != 0);
  }

  SUBCASE("synth is deterministic and stats reports the constant-score row") {
    const fs::path s1 = tmp.path / "s1";
    const fs::path s2 = tmp.path / "s2";
    const std::string cmd = "synth --queries 6 --dim 6 --list-len 5:9 --seed 17";
    REQUIRE(run(cmd + " --out-dir " + s1.string()) == 0);
    REQUIRE(run(cmd + " --out-dir " + s2.string()) == 0);
    for (const char* name : {"synth.libsvm", "synth_run.txt", "synth_qrels.txt"})
      CHECK(slurp(s1 / name) == slurp(s2 / name));

    const fs::path const_run = tmp.path / "const_run.txt";
    std::ofstream(const_run) << "q Q0 a 1 2.5 t\nq Q0 b 2 2.5 t\n";
    const fs::path st = tmp.path / "st";
    REQUIRE(run("stats --run " + const_run.string() + " --out-dir " + st.string()) == 0);
    CHECK(slurp(st / "teacher_stats.csv") ==
          "mean,std,min,p25,p50,p75,max\n2.5,0,2.5,2.5,2.5,2.5,2.5\n");
  }

  SUBCASE("train writes a model, trace, and manifest; rerun reproduces them") {
    const fs::path out = tmp.path / "tr";
    REQUIRE(run("train --format synthetic --synth-train 30 --synth-val 10 --synth-dim 6 "
                "--steps 40 --batch-lists 4 --alpha 0.5 --distill-loss softmax --transform on "
                "--seed 3 --out-dir " +
                out.string()) == 0);
    CHECK(fs::exists(out / "model.csv"));
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "train_manifest.json"));

    const fs::path redo = tmp.path / "tr2";
    REQUIRE(run("rerun --manifest " + (out / "train_manifest.json").string() + " --out-dir " +
                redo.string()) == 0);
    for (const char* name : {"model.csv", "trace.csv", "train_manifest.json"})
      CHECK(slurp(out / name) == slurp(redo / name));
  }

  SUBCASE("report over the bundled benchmark table ranks Softmax first") {
    const fs::path out = tmp.path / "rep";
    REQUIRE(run("report --published " + data + "/published_ndcg5.csv --out-dir " +
                out.string()) == 0);
    const std::string csv = slurp(out / "ranks.csv");
    std::istringstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(first.rfind("Softmax,", 0) == 0);
  }
}
